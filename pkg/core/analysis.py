# core/analysis.py
"""Structural predicates on bi-separated graphs and the ring-theoretic facts they imply."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Set, Tuple

from .algebra import (
    EDGE, GHOST, AlgElem, GenPath, Letter, algebra_of, edge, element, format_elem, ghost, nf, vertex,
)
from .config import DEFAULT_CONN_LEN, DEFAULT_MAX_LEN, DEFAULT_ZD_MAX_LEN
from .graph import BiSepGraph, is_connected, lambda_partition

log = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


class Flag(NamedTuple):
    value: bool
    evidence: str


class Fact(NamedTuple):
    status: str
    theorem: str
    witness: Optional[str] = None


@dataclass
class PropertyReport:
    flags: Dict[str, Flag] = field(default_factory=dict)
    facts: Dict[str, Fact] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "flags": {k: {"value": f.value, "evidence": f.evidence} for k, f in self.flags.items()},
            "facts": {
                k: {"status": f.status, "theorem": f.theorem, **({"witness": f.witness} if f.witness else {})}
                for k, f in self.facts.items()
            },
        }


class QuasiCycle(NamedTuple):
    path: GenPath
    connector: Optional[GenPath]   # None: none found up to conn_len
    conn_len: int

    @property
    def self_connected(self) -> bool:
        return self.connector is not None


class GrowthClass(NamedTuple):
    exponential: bool
    witness: Optional[QuasiCycle]
    max_len: int
    conn_len: int

    @property
    def label(self) -> str:
        if self.exponential:
            return "Exponential"
        return f"NoSelfConnectedQC_up_to(|p|<={self.max_len}, |o|<={self.conn_len})"


# ---------- LV and domains ----------
def _two_common(found: List[str]) -> bool:
    return len(found) >= 2

def _lv2_rows(g: BiSepGraph, distinct: bool) -> Optional[Tuple[str, str]]:
    """First pair of S-blocks sharing exactly one column block, or None."""
    for i, X1 in enumerate(g.S_order):
        for X2 in g.S_order[i + 1 if distinct else i:]:
            common = g.common_cols(X1, X2)
            if common and not _two_common(common):
                return X1, X2
    return None

def _lv2_cols(g: BiSepGraph, distinct: bool) -> Optional[Tuple[str, str]]:
    for i, Y1 in enumerate(g.T_order):
        for Y2 in g.T_order[i + 1 if distinct else i:]:
            common = g.common_rows(Y1, Y2)
            if common and not _two_common(common):
                return Y1, Y2
    return None

def lv1(g: BiSepGraph) -> bool:
    if len(g.S) > 1 or len(g.T) > 1:
        return False
    return all(len(g.row_map[X].edges) > 1 for X in g.S) and all(len(g.col_map[Y].edges) > 1 for Y in g.T)

def lv2(g: BiSepGraph, distinct: bool = False) -> bool:
    """
    |S| > 1 or |T| > 1, and any two S-blocks (resp. T-blocks) sharing a column
    (resp. row) block share at least two. With distinct=True only pairs of
    different blocks are compared.
    """
    if len(g.S) <= 1 and len(g.T) <= 1:
        return False
    return _lv2_rows(g, distinct) is None and _lv2_cols(g, distinct) is None

def condition_lv(g: BiSepGraph) -> bool:
    return lv1(g) or lv2(g)

def domain_condition(g: BiSepGraph) -> bool:
    return (len(g.S) <= 1 and len(g.T) <= 1) or lv2(g, distinct=True)

def _singleton_idempotent(g: BiSepGraph) -> Optional[Tuple[AlgElem, AlgElem]]:
    """(e*e, r(e) - e*e) for a singleton S-block {e} with e*e != r(e); dually for T."""
    for X in g.S_order:
        block = g.row_map[X].edges
        if len(block) == 1:
            e = block[0]
            ee = nf(g, element(g, Letter(GHOST, e), Letter(EDGE, e)))
            r = vertex(g.graph.r(e))
            if ee != r:
                return ee, r - ee
    for Y in g.T_order:
        block = g.col_map[Y].edges
        if len(block) == 1:
            f = block[0]
            ff = nf(g, element(g, Letter(EDGE, f), Letter(GHOST, f)))
            s = vertex(g.graph.s(f))
            if ff != s:
                return ff, s - ff
    return None

def is_domain(g: BiSepGraph) -> bool:
    """
    Domain condition plus the two cases it does not see: more than one vertex,
    and a singleton S- or T-block whose idempotent e*e (resp. ff*) is proper.
    """
    if len(g.vertices) != 1:
        return False
    return domain_condition(g) and _singleton_idempotent(g) is None

def _search_zero_product(g: BiSepGraph, max_len: int) -> Optional[Tuple[AlgElem, AlgElem]]:
    alg = algebra_of(g)
    if max_len < 2:
        return None
    paths = [p for p in alg.basis_paths(max_len - 1) if not p.is_vertex]
    # a product of normal paths is normal unless the junction is forbidden
    by_first: Dict[Letter, List[GenPath]] = {}
    for p in paths:
        by_first.setdefault(p.letters[0], []).append(p)
    after: Dict[Letter, List[Letter]] = {}
    for x, y in alg.rules:
        after.setdefault(x, []).append(y)
    checked = 0
    for p in paths:
        for first in after.get(p.letters[-1], []):
            for q in by_first.get(first, []):
                if p.length + q.length > max_len:
                    continue
                checked += 1
                a, b = AlgElem.of(p), AlgElem.of(q)
                if alg.mul(a, b).is_zero():
                    return a, b
    log.debug("zero-product search up to length %d: %d forbidden junctions checked", max_len, checked)
    return None

def zero_divisor_witness(g: BiSepGraph, max_len: int = DEFAULT_ZD_MAX_LEN) -> Optional[Tuple[AlgElem, AlgElem]]:
    """
    Nonzero a, b with ab = 0, or None.

    Tried in order: two distinct vertices; an S-pair (resp. T-pair) sharing
    exactly one block, whose forbidden word reduces to 0; a proper singleton
    idempotent with its complement; a search over products of normal paths.
    """
    vs = g.vertices
    if len(vs) > 1:
        return vertex(vs[0]), vertex(vs[1])
    if not vs:
        return None
    rows = _lv2_rows(g, distinct=True)
    if rows is not None:
        X1, X2 = rows
        Y = g.common_cols(X1, X2)[0]
        return edge(g, g.cell[(X1, Y)]), ghost(g, g.cell[(X2, Y)])
    cols = _lv2_cols(g, distinct=True)
    if cols is not None:
        Y1, Y2 = cols
        X = g.common_rows(Y1, Y2)[0]
        return ghost(g, g.cell[(X, Y1)]), edge(g, g.cell[(X, Y2)])
    pair = _singleton_idempotent(g)
    if pair is not None:
        return pair
    return _search_zero_product(g, max_len)


# ---------- Conditions A and A' ----------
def _xy_letters(g: BiSepGraph, X: str, Y: str) -> Optional[Tuple[Letter, Letter]]:
    e = g.meet(X, Y)
    return None if e is None else (Letter(EDGE, e), Letter(GHOST, e))

def _a_pair(g: BiSepGraph, X: str, Y: str) -> bool:
    """X∩Y != ∅ and neither (XY)(XY)* nor (XY)*(XY) is forbidden."""
    pair = _xy_letters(g, X, Y)
    if pair is None:
        return False
    alg = algebra_of(g)
    e, es = pair
    return not alg.is_forbidden(e, es) and not alg.is_forbidden(es, e)

def condition_a(g: BiSepGraph) -> bool:
    if not g.S and not g.T:
        return len(g.edges) > 0
    for X in g.S_order:
        for Y in g.D:
            if _a_pair(g, X, Y.id):
                return True
    for Y in g.T_order:
        for X in g.C:
            if _a_pair(g, X.id, Y):
                return True
    return False

def _forbidden_edges(g: BiSepGraph) -> Set[str]:
    """Edges e such that e or e* occurs in some forbidden word."""
    out: Set[str] = set()
    for a, b in algebra_of(g).rules:
        out.update((a.id, b.id))
    return out

def _a_prime_witness(g: BiSepGraph) -> Optional[str]:
    used = _forbidden_edges(g)

    def free(X: str, Y: str) -> bool:
        e = g.meet(X, Y)
        return e is not None and e not in used

    for i, X1 in enumerate(g.S_order):
        for X2 in g.S_order[i + 1:]:
            if g.s_block(X1) != g.s_block(X2):
                continue
            for Y in g.D:
                if free(X1, Y.id) and free(X2, Y.id):
                    return f"(a) {X1}, {X2} with {Y.id}"
    for i, Y1 in enumerate(g.T_order):
        for Y2 in g.T_order[i + 1:]:
            if g.r_block(Y1) != g.r_block(Y2):
                continue
            for X in g.C:
                if free(X.id, Y1) and free(X.id, Y2):
                    return f"(b) {Y1}, {Y2} with {X.id}"
    for X in g.S_order:
        for Y in g.D:
            if g.s_block(X) == Y.owner and free(X, Y.id):
                return f"(c) {X}, {Y.id}"
    for Y in g.T_order:
        for X in g.C:
            if X.owner == g.r_block(Y) and free(X.id, Y):
                return f"(d) {Y}, {X.id}"
    return None

def condition_a_prime(g: BiSepGraph) -> bool:
    if not g.S and not g.T:
        return len(g.edges) > 0
    return _a_prime_witness(g) is not None

def connected(g: BiSepGraph) -> bool:
    return is_connected(g)


# ---------- Growth ----------
def _is_primitive(p: GenPath) -> bool:
    word = p.letters
    n = len(word)
    doubled = word + word
    return all(doubled[k:k + n] != word for k in range(1, n))

def quasi_cycles(g: BiSepGraph, max_len: int = DEFAULT_MAX_LEN, conn_len: int = DEFAULT_CONN_LEN) -> List[QuasiCycle]:
    """
    Normal closed primitive paths p with p² normal, each with the first connector
    found: a normal closed o, |o| <= conn_len, p not a prefix of o, and pop normal.
    """
    if max_len < 1 or conn_len < 1:
        raise ValueError("bounds must be at least 1")
    alg = algebra_of(g)
    closed = [p for p in alg.basis_paths(max(max_len, conn_len)) if not p.is_vertex and p.source == p.range]
    out: List[QuasiCycle] = []
    for p in closed:
        if p.length > max_len or not _is_primitive(p):
            continue
        first, last = p.letters[0], p.letters[-1]
        if alg.is_forbidden(last, first):
            continue
        connector = None
        for o in closed:
            if o.length > conn_len or o.source != p.range:
                continue
            if o.letters[:p.length] == p.letters:
                continue
            if alg.is_forbidden(last, o.letters[0]) or alg.is_forbidden(o.letters[-1], first):
                continue
            connector = o
            break
        out.append(QuasiCycle(p, connector, conn_len))
    log.debug("quasi_cycles: %d found up to length %d", len(out), max_len)
    return out

def growth_class(g: BiSepGraph, max_len: int = DEFAULT_MAX_LEN, conn_len: int = DEFAULT_CONN_LEN) -> GrowthClass:
    for qc in quasi_cycles(g, max_len, conn_len):
        if qc.self_connected:
            return GrowthClass(True, qc, max_len, conn_len)
    return GrowthClass(False, None, max_len, conn_len)


# ---------- Report ----------
def _pair_text(g: BiSepGraph, pair: Optional[Tuple[AlgElem, AlgElem]]) -> Optional[str]:
    if pair is None:
        return None
    a, b = pair
    return f"({format_elem(a, g)}) * ({format_elem(b, g)}) = 0"

def property_report(g: BiSepGraph, max_len: int = DEFAULT_ZD_MAX_LEN) -> PropertyReport:
    rep = PropertyReport()
    lv = condition_lv(g)
    dom_c = domain_condition(g)
    dom = is_domain(g)
    a = condition_a(g)
    a_prime_why = _a_prime_witness(g) if (g.S or g.T) else None
    a_prime = condition_a_prime(g)
    conn = connected(g)
    tame = lambda_partition(g).tame
    n_edges = len(g.edges)

    rep.flags["condition_lv"] = Flag(lv, "LV1" if lv1(g) else "LV2" if lv2(g) else "neither LV1 nor LV2")
    rep.flags["domain_condition"] = Flag(dom_c, f"|S|={len(g.S)}, |T|={len(g.T)}")
    rep.flags["is_domain"] = Flag(dom, f"|E0|={len(g.vertices)}")
    rep.flags["condition_a"] = Flag(a, "S=T=∅, |E1|>0" if a and not (g.S or g.T) else "A2" if a else "no admissible (X, Y)")
    rep.flags["condition_a_prime"] = Flag(a_prime, a_prime_why or ("S=T=∅, |E1|>0" if a_prime else "no free pair"))
    rep.flags["connected"] = Flag(conn, "double graph connectivity")
    rep.flags["tame"] = Flag(tame, "finite graph")

    lv_thm = "local valuation corollary"
    rep.facts["nonsingular"] = Fact(HOLDS if lv else UNKNOWN, lv_thm)
    rep.facts["semiprimitive"] = Fact(HOLDS if lv and conn else UNKNOWN, lv_thm)
    rep.facts["prime"] = Fact(HOLDS if lv and conn and g.vertices else UNKNOWN, lv_thm)
    if a:
        rep.facts["von_neumann_regular"] = Fact(FAILS, "Condition (A) corollary")
    elif lv and n_edges >= 1:
        rep.facts["von_neumann_regular"] = Fact(FAILS, lv_thm)
    else:
        rep.facts["von_neumann_regular"] = Fact(UNKNOWN, lv_thm)
    a_thm = "Condition (A) corollary"
    rep.facts["finite_dimensional"] = Fact(FAILS if a else UNKNOWN, a_thm)
    rep.facts["simple"] = Fact(FAILS if a else UNKNOWN, a_thm)
    rep.facts["artinian"] = Fact(FAILS if a else UNKNOWN, a_thm)
    rep.facts["noetherian"] = Fact(FAILS if a_prime else UNKNOWN, "Condition (A') corollary")
    witness = None if dom else _pair_text(g, zero_divisor_witness(g, max_len))
    rep.facts["domain"] = Fact(HOLDS if dom else FAILS, "characterisation of domains", witness)
    return rep
