# core/errors.py

from typing import List, Optional, Sequence, Tuple


class BSAError(Exception):
    """Base error for everything the CLI reports as an input problem (exit code 2)."""

    code = 2

    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.message = message
        self.position = position

    def __str__(self) -> str:
        if self.position is None:
            return self.message
        line, col = self.position
        return f"{self.message} (line {line}, col {col})"


class GraphFormatError(BSAError):
    pass


class ExprSyntaxError(BSAError):
    def __init__(self, message: str, column: int):
        super().__init__(message, (1, column))
        self.column = column


class UnknownIdentifierError(BSAError):
    """An id that is not a vertex/edge/block/λ of the loaded graph."""

    def __init__(self, ident: str, kind: str, suggestions: Sequence[str] = ()):
        hint = ""
        if suggestions:
            hint = " (did you mean: " + ", ".join(suggestions) + "?)"
        super().__init__(f"unknown {kind} '{ident}'{hint}")
        self.ident = ident
        self.kind = kind
        self.suggestions: List[str] = list(suggestions)


class ConstructionError(BSAError):
    pass


class InvalidTripleError(BSAError):
    pass


class GuardExceededError(BSAError):
    pass


class LinalgError(BSAError):
    pass


class NotHypergraphError(BSAError):
    """An operation that needs every hyperedge in TS met another class."""


class RepresentationError(BSAError):
    pass
