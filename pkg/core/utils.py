import json
import re
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from rapidfuzz import fuzz, process

from .config import settings
from .errors import BSAError, GuardExceededError, UnknownIdentifierError

log = logging.getLogger(__name__)

# ---------- Rational helpers ----------
RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

def parse_rational(text: Union[str, int]) -> Optional[Fraction]:
    """
    Parse "3", "-3/2" or an int into a Fraction.

    Returns:
        The Fraction, or None when the text is not a rational or the denominator is 0
    """
    if isinstance(text, bool):
        return None
    if isinstance(text, int):
        return Fraction(text)
    m = RATIONAL_RE.match(text or "")
    if not m:
        return None
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        return None
    return Fraction(int(m.group(1)), den)

def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"

# ---------- JSON files ----------
def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise BSAError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise BSAError(f"invalid JSON in {path}: {e.msg}", (e.lineno, e.colno))

def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)

def save_json(path: Union[str, Path], data: Any) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_json(data))
        f.write("\n")

# ---------- Identifier lookup ----------
def suggest(name: str, choices: Iterable[str], limit: int = 3) -> List[str]:
    """Closest known ids to a mistyped one, best first."""
    pool = list(choices)
    if not pool:
        return []
    hits = process.extract(name, pool, scorer=fuzz.ratio, limit=limit)
    return [h[0] for h in hits if h[1] >= settings.FUZZY_CUTOFF]

def require_known(name: str, known: Sequence[str], kind: str) -> str:
    """Return name when it is one of known, else raise with "did you mean" hints."""
    if name in known:
        return name
    raise UnknownIdentifierError(name, kind, suggest(name, known))

# ---------- Guards ----------
def check_subset_guard(n: int, what: str) -> None:
    if 2 ** n > settings.MAX_SUBSETS:
        raise GuardExceededError(
            f"{what}: 2^{n} subsets exceed BSA_MAX_SUBSETS={settings.MAX_SUBSETS}"
        )

def ordered(items: Iterable[str], order: Dict[str, int]) -> List[str]:
    """Sort ids by their input position."""
    return sorted(items, key=lambda x: order[x])

# ---------- Console output ----------
OK, FAIL, WARN = "✅", "❌", "⚠️"

def status(ok: Optional[bool], text: str) -> str:
    """Emoji status line; None is the undecided case."""
    mark = WARN if ok is None else OK if ok else FAIL
    return f"{mark} {text}"

def emit(data: Any, as_json: bool, lines: Iterable[str]) -> None:
    if as_json:
        print(dump_json(data))
    else:
        for line in lines:
            print(line)
