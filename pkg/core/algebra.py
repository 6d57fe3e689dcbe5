# core/algebra.py
"""
Elements of the Cohn-Leavitt path algebra of a bi-separated graph over ℚ.

Elements are finite ℚ-combinations of generalized paths in the double graph.
Every element has a unique normal form: a combination of paths containing no
forbidden word. Forbidden words are fixed per graph:

  type I   (XY)(X'Y)*  for X, X' ∈ S and Y the first column block meeting both
  type II  (XY)*(XY')  for Y, Y' ∈ T and X the first row block meeting both

and each one rewrites by its defining relation

  (XY)(X'Y)*  ->  δ s(X)  - Σ_{Y''≠Y} (XY'')(X'Y'')*
  (XY)*(XY')  ->  δ r(Y)  - Σ_{X''≠X} (X''Y)*(X''Y')

with the sums over blocks meeting both.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

from .config import settings
from .errors import GuardExceededError
from .graph import BHypergraph, BiSepGraph, full_subhypergraph

log = logging.getLogger(__name__)

VERTEX = "vertex"
EDGE = "edge"
GHOST = "ghost"

Scalar = Union[int, Fraction]


class Letter(NamedTuple):
    kind: str
    id: str

    def __str__(self) -> str:
        return f"{self.id}^*" if self.kind == GHOST else self.id

    def star(self) -> "Letter":
        if self.kind == EDGE:
            return Letter(GHOST, self.id)
        if self.kind == GHOST:
            return Letter(EDGE, self.id)
        return self


@dataclass(frozen=True, order=False)
class GenPath:
    """A vertex, or a nonempty composable word in edges and ghost edges."""

    letters: Tuple[Letter, ...]
    source: str
    range: str

    @property
    def is_vertex(self) -> bool:
        return self.letters[0].kind == VERTEX

    @property
    def length(self) -> int:
        return 0 if self.is_vertex else len(self.letters)

    @property
    def degree(self) -> int:
        return sum(1 if x.kind == EDGE else -1 if x.kind == GHOST else 0 for x in self.letters)

    def __str__(self) -> str:
        return "*".join(str(x) for x in self.letters)


def vertex_path(v: str) -> GenPath:
    return GenPath((Letter(VERTEX, v),), v, v)


class AlgElem:
    """Sparse ℚ-combination of generalized paths; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[GenPath, Fraction]] = None):
        self.terms: Dict[GenPath, Fraction] = {}
        for p, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[p] = c

    @classmethod
    def of(cls, path: GenPath, coef: Scalar = 1) -> "AlgElem":
        return cls({path: Fraction(coef)})

    @classmethod
    def zero(cls) -> "AlgElem":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[GenPath, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "AlgElem") -> "AlgElem":
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, Fraction(0)) + c
        return AlgElem(out)

    def __neg__(self) -> "AlgElem":
        return AlgElem({p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "AlgElem") -> "AlgElem":
        return self + (-other)

    def __rmul__(self, k: Scalar) -> "AlgElem":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return AlgElem({p: c * k for p, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"AlgElem({format_elem(self)!r})"

    def paths(self) -> List[GenPath]:
        return list(self.terms)


def _sort_key(p: GenPath) -> Tuple:
    return (p.length, p.degree, tuple((x.kind != VERTEX, x.id, x.kind == GHOST) for x in p.letters))


def format_elem(a: AlgElem, g: Optional[BiSepGraph] = None) -> str:
    """Canonical text: `v - 3/2*e1*e2^*`; zero prints as `0`. Terms follow the graph's letter ranks when g is given."""
    if a.is_zero():
        return "0"
    key = algebra_of(g).sort_key if g is not None else _sort_key
    parts: List[str] = []
    for p in sorted(a.terms, key=key):
        c = a.terms[p]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = str(p) if mag == 1 else f"{mag.numerator}*{p}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}*{p}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


# ---------- Forbidden words ----------
class ForbiddenTable(NamedTuple):
    typeI: Dict[Tuple[str, str], str]    # (X, X') -> connecting column block
    typeII: Dict[Tuple[str, str], str]   # (Y, Y') -> connecting row block


Rule = List[Tuple[Fraction, Tuple[Letter, ...]]]


@dataclass
class CohnLeavittAlgebra:
    """Rewriting data and a normal-form cache for one bi-separated graph."""

    g: BiSepGraph
    _cache: Dict[GenPath, Dict[GenPath, Fraction]] = field(default_factory=dict, repr=False)

    @cached_property
    def forbidden(self) -> ForbiddenTable:
        g = self.g
        typeI: Dict[Tuple[str, str], str] = {}
        for X1 in g.S_order:
            for X2 in g.S_order:
                common = g.common_cols(X1, X2)
                if common:
                    typeI[(X1, X2)] = common[0]
        typeII: Dict[Tuple[str, str], str] = {}
        for Y1 in g.T_order:
            for Y2 in g.T_order:
                common = g.common_rows(Y1, Y2)
                if common:
                    typeII[(Y1, Y2)] = common[0]
        return ForbiddenTable(typeI, typeII)

    @cached_property
    def rules(self) -> Dict[Tuple[Letter, Letter], Rule]:
        """Forbidden letter pair -> its replacement, as (coefficient, letters) terms."""
        g = self.g
        out: Dict[Tuple[Letter, Letter], Rule] = {}
        for (X1, X2), Y in self.forbidden.typeI.items():
            word = (Letter(EDGE, g.cell[(X1, Y)]), Letter(GHOST, g.cell[(X2, Y)]))
            rhs: Rule = []
            if X1 == X2:
                rhs.append((Fraction(1), (Letter(VERTEX, g.s_block(X1)),)))
            for Y2 in g.common_cols(X1, X2):
                if Y2 != Y:
                    rhs.append((Fraction(-1), (Letter(EDGE, g.cell[(X1, Y2)]), Letter(GHOST, g.cell[(X2, Y2)]))))
            out[word] = rhs
        for (Y1, Y2), X in self.forbidden.typeII.items():
            word = (Letter(GHOST, g.cell[(X, Y1)]), Letter(EDGE, g.cell[(X, Y2)]))
            rhs = []
            if Y1 == Y2:
                rhs.append((Fraction(1), (Letter(VERTEX, g.r_block(Y1)),)))
            for X2 in g.common_rows(Y1, Y2):
                if X2 != X:
                    rhs.append((Fraction(-1), (Letter(GHOST, g.cell[(X2, Y1)]), Letter(EDGE, g.cell[(X2, Y2)]))))
            out[word] = rhs
        return out

    @cached_property
    def letters(self) -> List[Letter]:
        """All non-vertex letters in rank order: per edge in input order, e then e*."""
        out: List[Letter] = []
        for e in self.g.edges:
            out.append(Letter(EDGE, e.id))
            out.append(Letter(GHOST, e.id))
        return out

    @cached_property
    def rank(self) -> Dict[Letter, int]:
        out = {Letter(VERTEX, v): i for i, v in enumerate(self.g.vertices)}
        base = len(out)
        for i, x in enumerate(self.letters):
            out[x] = base + i
        return out

    def ends(self, x: Letter) -> Tuple[str, str]:
        if x.kind == VERTEX:
            return x.id, x.id
        e = self.g.graph.edge_map[x.id]
        return (e.src, e.tgt) if x.kind == EDGE else (e.tgt, e.src)

    def is_forbidden(self, a: Letter, b: Letter) -> bool:
        return (a, b) in self.rules

    def letter(self, x: Letter) -> GenPath:
        s, r = self.ends(x)
        return GenPath((x,), s, r)

    def path(self, letters: Iterable[Letter]) -> Optional[GenPath]:
        """Compose letters into a path; None when they do not compose."""
        letters = [x for x in letters]
        if not letters:
            return None
        word = [x for x in letters if x.kind != VERTEX]
        verts = [x for x in letters if x.kind == VERTEX]
        if not word:
            if len({v.id for v in verts}) != 1:
                return None
            return vertex_path(verts[0].id)
        cur = None
        for x in letters:
            s, r = self.ends(x)
            if cur is not None and s != cur:
                return None
            cur = r
        return GenPath(tuple(word), self.ends(word[0])[0], self.ends(word[-1])[1])

    def sort_key(self, p: GenPath) -> Tuple:
        return (p.length, p.degree, tuple(self.rank[x] for x in p.letters))

    # ---------- Products ----------
    def path_mul(self, p: GenPath, q: GenPath) -> Optional[GenPath]:
        if p.range != q.source:
            return None
        if p.is_vertex:
            return q
        if q.is_vertex:
            return p
        return GenPath(p.letters + q.letters, p.source, q.range)

    def raw_mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        out: Dict[GenPath, Fraction] = {}
        for p, c in a:
            for q, d in b:
                pq = self.path_mul(p, q)
                if pq is not None:
                    out[pq] = out.get(pq, Fraction(0)) + c * d
        return AlgElem(out)

    # ---------- Reduction ----------
    def first_forbidden(self, p: GenPath) -> int:
        if p.is_vertex:
            return -1
        letters = p.letters
        for i in range(len(letters) - 1):
            if (letters[i], letters[i + 1]) in self.rules:
                return i
        return -1

    def is_normal(self, p: GenPath) -> bool:
        return self.first_forbidden(p) < 0

    def _splice(self, p: GenPath, i: int, repl: Tuple[Letter, ...]) -> GenPath:
        prefix, suffix = p.letters[:i], p.letters[i + 2:]
        if repl[0].kind == VERTEX:
            if not prefix and not suffix:
                return vertex_path(repl[0].id)
            repl = ()
        return GenPath(prefix + repl + suffix, p.source, p.range)

    def nf_path(self, p: GenPath) -> Dict[GenPath, Fraction]:
        """Normal form of a single path, leftmost forbidden word first, layer by layer."""
        hit = self._cache.get(p)
        if hit is not None:
            return hit
        result: Dict[GenPath, Fraction] = {}
        layer: Dict[GenPath, Fraction] = {p: Fraction(1)}
        steps = 0
        while layer:
            nxt: Dict[GenPath, Fraction] = {}
            for q, c in layer.items():
                known = self._cache.get(q) if q != p else None
                if known is not None:
                    for r, d in known.items():
                        result[r] = result.get(r, Fraction(0)) + c * d
                    continue
                i = self.first_forbidden(q)
                if i < 0:
                    result[q] = result.get(q, Fraction(0)) + c
                    continue
                steps += 1
                if steps > settings.MAX_REWRITES:
                    raise GuardExceededError(
                        f"normal form of {p} needs more than BSA_MAX_REWRITES={settings.MAX_REWRITES} rewrites"
                    )
                for k, repl in self.rules[(q.letters[i], q.letters[i + 1])]:
                    r = self._splice(q, i, repl)
                    nxt[r] = nxt.get(r, Fraction(0)) + c * k
            layer = {q: c for q, c in nxt.items() if c}
        result = {q: c for q, c in result.items() if c}
        if steps:
            log.debug("nf(%s): %d rewrites, %d terms", p, steps, len(result))
        self._cache[p] = result
        return result

    def nf(self, a: AlgElem) -> AlgElem:
        out: Dict[GenPath, Fraction] = {}
        for p, c in a:
            for q, d in self.nf_path(p).items():
                out[q] = out.get(q, Fraction(0)) + c * d
        return AlgElem(out)

    def mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return self.nf(self.raw_mul(a, b))

    # ---------- Basis ----------
    def basis_paths(self, max_len: int) -> List[GenPath]:
        if max_len < 0:
            raise ValueError("max_len must be nonnegative")
        out = [vertex_path(v) for v in self.g.vertices]
        level = [self.letter(x) for x in self.letters]
        length = 1
        while level and length <= max_len:
            out.extend(level)
            if length == max_len:
                break
            nxt: List[GenPath] = []
            for p in level:
                last = p.letters[-1]
                for x in self.letters:
                    s, r = self.ends(x)
                    if s == p.range and (last, x) not in self.rules:
                        nxt.append(GenPath(p.letters + (x,), p.source, r))
            level = nxt
            length += 1
        return out

    def growth_count(self, n: int) -> int:
        """Number of normal paths of length <= n, by counting normal words per last letter."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        total = len(self.g.vertices)
        if n == 0:
            return total
        succ: Dict[Letter, List[Letter]] = {}
        for a in self.letters:
            r = self.ends(a)[1]
            succ[a] = [b for b in self.letters if self.ends(b)[0] == r and (a, b) not in self.rules]
        counts = {x: 1 for x in self.letters}
        total += len(counts)
        for _ in range(n - 1):
            nxt = {x: 0 for x in self.letters}
            for a, k in counts.items():
                if k:
                    for b in succ[a]:
                        nxt[b] += k
            counts = nxt
            total += sum(counts.values())
        return total


# ---------- Module-level API ----------
@lru_cache(maxsize=64)
def algebra_of(g: BiSepGraph) -> CohnLeavittAlgebra:
    return CohnLeavittAlgebra(g)

def forbidden_table(g: BiSepGraph) -> ForbiddenTable:
    return algebra_of(g).forbidden

def path_mul(g: BiSepGraph, p: GenPath, q: GenPath) -> Optional[GenPath]:
    return algebra_of(g).path_mul(p, q)

def nf(g: BiSepGraph, a: AlgElem) -> AlgElem:
    return algebra_of(g).nf(a)

def mul(g: BiSepGraph, a: AlgElem, b: AlgElem) -> AlgElem:
    return algebra_of(g).mul(a, b)

def star(a: AlgElem) -> AlgElem:
    out: Dict[GenPath, Fraction] = {}
    for p, c in a:
        if p.is_vertex:
            out[p] = c
        else:
            out[GenPath(tuple(x.star() for x in reversed(p.letters)), p.range, p.source)] = c
    return AlgElem(out)

def basis_paths(g: BiSepGraph, max_len: int) -> List[GenPath]:
    return algebra_of(g).basis_paths(max_len)

def growth_count(g: BiSepGraph, n: int) -> int:
    return algebra_of(g).growth_count(n)

def is_normal(g: BiSepGraph, p: GenPath) -> bool:
    return algebra_of(g).is_normal(p)

def valuation(g: BiSepGraph, a: AlgElem) -> float:
    """Largest path length in nf(a); -inf for zero."""
    reduced = nf(g, a)
    if reduced.is_zero():
        return float("-inf")
    return max(p.length for p in reduced.paths())

def degree_components(a: AlgElem) -> Dict[int, AlgElem]:
    out: Dict[int, Dict[GenPath, Fraction]] = {}
    for p, c in a:
        out.setdefault(p.degree, {})[p] = c
    return {d: AlgElem(t) for d, t in sorted(out.items())}

def element(g: BiSepGraph, *letters: Letter, coef: Scalar = 1) -> AlgElem:
    """Single-path element from letters; zero when they do not compose."""
    p = algebra_of(g).path(letters)
    return AlgElem() if p is None else AlgElem.of(p, coef)

def vertex(v: str) -> AlgElem:
    return AlgElem.of(vertex_path(v))

def edge(g: BiSepGraph, e: str) -> AlgElem:
    return element(g, Letter(EDGE, e))

def ghost(g: BiSepGraph, e: str) -> AlgElem:
    return element(g, Letter(GHOST, e))

def unit(g: BiSepGraph) -> AlgElem:
    return AlgElem({vertex_path(v): Fraction(1) for v in g.vertices})

def check_relations(g: BiSepGraph) -> Optional[str]:
    """
    Reduce every defining relation; None when all vanish.

    Returns:
        A description of the first relation whose normal form is nonzero
    """
    alg = algebra_of(g)
    for X1 in g.S_order:
        for X2 in g.S_order:
            lhs = AlgElem()
            for Y in g.common_cols(X1, X2):
                lhs = lhs + alg.raw_mul(edge(g, g.cell[(X1, Y)]), ghost(g, g.cell[(X2, Y)]))
            if X1 == X2:
                lhs = lhs - vertex(g.s_block(X1))
            rest = alg.nf(lhs)
            if rest:
                return f"row relation ({X1}, {X2}) reduces to {format_elem(rest, g)}"
    for Y1 in g.T_order:
        for Y2 in g.T_order:
            lhs = AlgElem()
            for X in g.common_rows(Y1, Y2):
                lhs = lhs + alg.raw_mul(ghost(g, g.cell[(X, Y1)]), edge(g, g.cell[(X, Y2)]))
            if Y1 == Y2:
                lhs = lhs - vertex(g.r_block(Y1))
            rest = alg.nf(lhs)
            if rest:
                return f"column relation ({Y1}, {Y2}) reduces to {format_elem(rest, g)}"
    return None

def restriction_hom(H: BHypergraph, W: Iterable[str], a: AlgElem) -> Tuple[BHypergraph, AlgElem]:
    """
    Image of a under the onto map to the full sub-hypergraph on W, which kills
    every vertex outside W and every edge leaving W.

    Returns:
        (the sub-hypergraph, the normal form of the image in its algebra)
    """
    sub = full_subhypergraph(H, W)
    keep_v = set(sub.base.vertices)
    keep_e = set(sub.base.graph.edge_map)
    out: Dict[GenPath, Fraction] = {}
    for p, c in a:
        if all((x.id in keep_v) if x.kind == VERTEX else (x.id in keep_e) for x in p.letters):
            out[p] = out.get(p, Fraction(0)) + c
    return sub, nf(sub.base, AlgElem(out))
