# core/hypermonoid.py
"""
The H-monoid of a finite B-hypergraph, its order-ideals as admissible triples,
and the quotient homomorphism π.

Generators are the vertices, one q_λ per TFin hyperedge and one p_λ per FinS
hyperedge; relations are

    TS    𝐬(λ) = 𝐫(λ)
    TFin  𝐬(λ) = 𝐫(λ) + q_λ
    FinS  𝐫(λ) = 𝐬(λ) + p_λ

with 𝐬(λ) = Σ_X s(X) and 𝐫(λ) = Σ_Y r(Y) counted with multiplicity.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .config import settings
from .errors import InvalidTripleError
from .graph import (
    FIN_S, T_FIN, TS, BHypergraph, check_triple_parts, enumerate_bisaturated, one_sided_closed,
    quotient_bhypergraph, sigma_theta_saturation,
)
from .linalg import integral_vector, kernel, qmatrix
from .utils import check_subset_guard

log = logging.getLogger(__name__)

MonoidElt = Tuple[int, ...]


class Relation(NamedTuple):
    lam: str
    left: MonoidElt
    right: MonoidElt


@dataclass(frozen=True)
class HMonoidPres:
    generators: Tuple[str, ...]
    relations: Tuple[Relation, ...]

    @cached_property
    def index(self) -> Dict[str, int]:
        return {x: i for i, x in enumerate(self.generators)}

    def elt(self, counts: Mapping[str, int]) -> MonoidElt:
        """Dense vector from generator multiplicities."""
        out = [0] * len(self.generators)
        for g, k in counts.items():
            if k < 0:
                raise ValueError(f"negative multiplicity for '{g}'")
            out[self.index[g]] += k
        return tuple(out)

    def zero(self) -> MonoidElt:
        return (0,) * len(self.generators)

    def unit(self) -> MonoidElt:
        """Σ_v v over the vertices."""
        return tuple(1 if not _is_marker(g) else 0 for g in self.generators)

    def format(self, x: MonoidElt) -> str:
        parts = [g if k == 1 else f"{k}{g}" for g, k in zip(self.generators, x) if k]
        return " + ".join(parts) if parts else "0"


def q_name(lam: str) -> str:
    return f"q_{lam}"

def p_name(lam: str) -> str:
    return f"p_{lam}"

def _is_marker(gen: str) -> bool:
    return gen.startswith("q_") or gen.startswith("p_")


def _add(x: MonoidElt, y: MonoidElt) -> MonoidElt:
    return tuple(a + b for a, b in zip(x, y))

def _sub(x: MonoidElt, y: MonoidElt) -> Optional[MonoidElt]:
    out = tuple(a - b for a, b in zip(x, y))
    return None if any(k < 0 for k in out) else out


def presentation(H: BHypergraph) -> HMonoidPres:
    gens: List[str] = list(H.vertices)
    for lam in H.of_class(T_FIN):
        gens.append(q_name(lam.id))
    for lam in H.of_class(FIN_S):
        gens.append(p_name(lam.id))
    if len(set(gens)) != len(gens):
        raise InvalidTripleError("vertex ids collide with q_/p_ generator names")
    index = {g: i for i, g in enumerate(gens)}

    def vec(counts: Mapping[str, int]) -> MonoidElt:
        out = [0] * len(gens)
        for g, k in counts.items():
            out[index[g]] += k
        return tuple(out)

    rels: List[Relation] = []
    for lam in H.lambdas:
        s, r = dict(H.s_vector(lam)), dict(H.r_vector(lam))
        if lam.cls == TS:
            rels.append(Relation(lam.id, vec(s), vec(r)))
        elif lam.cls == T_FIN:
            r[q_name(lam.id)] = 1
            rels.append(Relation(lam.id, vec(s), vec(r)))
        elif lam.cls == FIN_S:
            s[p_name(lam.id)] = 1
            rels.append(Relation(lam.id, vec(r), vec(s)))
    return HMonoidPres(tuple(gens), tuple(rels))


# ---------- Word problem ----------
@dataclass(frozen=True)
class Equal:
    trace: Tuple[MonoidElt, ...]     # x = trace[0], ..., trace[-1] = y

@dataclass(frozen=True)
class Distinct:
    certificate: Optional[Tuple[int, ...]]   # functional vanishing on every relation; None: class exhausted
    exhausted: bool = False

@dataclass(frozen=True)
class Unknown:
    depth: int

EqResult = Union[Equal, Distinct, Unknown]


def _moves(pres: HMonoidPres, x: MonoidElt) -> Iterable[MonoidElt]:
    for rel in pres.relations:
        for a, b in ((rel.left, rel.right), (rel.right, rel.left)):
            rest = _sub(x, a)
            if rest is not None:
                yield _add(rest, b)

def separating_functional(pres: HMonoidPres, x: MonoidElt, y: MonoidElt) -> Optional[Tuple[int, ...]]:
    """Integer functional f with f·(l - r) = 0 on every relation and f·x != f·y."""
    n = len(pres.generators)
    diffs = [[a - b for a, b in zip(rel.left, rel.right)] for rel in pres.relations]
    basis = kernel(qmatrix(diffs, n)) if diffs else [
        [Fraction(int(i == j)) for j in range(n)] for i in range(n)
    ]
    delta = [a - b for a, b in zip(x, y)]
    for f in basis:
        if sum(Fraction(fi) * d for fi, d in zip(f, delta)) != 0:
            return integral_vector(list(f))
    return None

def _trace(parents: Dict[MonoidElt, Optional[MonoidElt]], node: MonoidElt) -> List[MonoidElt]:
    out = [node]
    while parents[out[-1]] is not None:
        out.append(parents[out[-1]])
    return out

def monoid_equal(pres: HMonoidPres, x: MonoidElt, y: MonoidElt, depth: Optional[int] = None) -> EqResult:
    """
    Decide x = y in the monoid, three-valued.

    Equal when a bidirectional breadth-first search (relations both ways) meets
    within depth steps in total; Distinct when a rational functional vanishing on
    all relations separates x and y, or when one side's class is exhausted
    without meeting the other; Unknown otherwise.
    """
    depth = settings.BFS_DEPTH if depth is None else depth
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if x == y:
        return Equal((x,))
    cert = separating_functional(pres, x, y)
    if cert is not None:
        return Distinct(cert)
    parents = [{x: None}, {y: None}]
    frontiers = [[x], [y]]
    steps = 0
    while steps < depth:
        # smaller frontier first, ties to the side seen less
        side = min((0, 1), key=lambda i: (len(frontiers[i]), len(parents[i])))
        nxt: List[MonoidElt] = []
        seen, other = parents[side], parents[1 - side]
        for node in frontiers[side]:
            for m in _moves(pres, node):
                if m in seen:
                    continue
                seen[m] = node
                if m in other:
                    left = _trace(parents[0], m)[::-1]
                    right = _trace(parents[1], m)[1:]
                    log.debug("monoid_equal: met after %d steps", steps + 1)
                    return Equal(tuple(left + right))
                nxt.append(m)
                if len(seen) > settings.BFS_MAX_NODES:
                    log.warning("monoid_equal: node cap %d reached", settings.BFS_MAX_NODES)
                    return Unknown(depth)
        frontiers[side] = nxt
        if not nxt:
            log.debug("monoid_equal: class of side %d exhausted with %d elements", side, len(seen))
            return Distinct(None, exhausted=True)
        steps += 1
    return Unknown(depth)

def probe_confluence(pres: HMonoidPres, x: MonoidElt, depth: int = 4) -> List[Tuple[str, str, EqResult]]:
    """For each pair of one-step left-to-right reductions of x, whether they rejoin within depth."""
    steps: List[Tuple[str, MonoidElt]] = []
    for rel in pres.relations:
        rest = _sub(x, rel.left)
        if rest is not None:
            steps.append((rel.lam, _add(rest, rel.right)))
    out = []
    for i in range(len(steps)):
        for j in range(i + 1, len(steps)):
            out.append((steps[i][0], steps[j][0], monoid_equal(pres, steps[i][1], steps[j][1], depth)))
    return out


# ---------- Admissible triples ----------
class AdmissibleTriple(NamedTuple):
    V: FrozenSet[str]
    Sigma: FrozenSet[str]
    Theta: FrozenSet[str]

    def to_json(self, H: BHypergraph) -> Dict[str, List[str]]:
        vi, li = {v: i for i, v in enumerate(H.vertices)}, H.lambda_index
        return {
            "V": sorted(self.V, key=vi.get),
            "Sigma": sorted(self.Sigma, key=li.get),
            "Theta": sorted(self.Theta, key=li.get),
        }


def triple(V: Iterable[str] = (), Sigma: Iterable[str] = (), Theta: Iterable[str] = ()) -> AdmissibleTriple:
    return AdmissibleTriple(frozenset(V), frozenset(Sigma), frozenset(Theta))

def bottom(H: BHypergraph) -> AdmissibleTriple:
    return triple()

def top(H: BHypergraph) -> AdmissibleTriple:
    return triple(H.vertices)

def check_triple(H: BHypergraph, t: AdmissibleTriple) -> None:
    check_triple_parts(H, t.V, t.Sigma, t.Theta)

def is_admissible(H: BHypergraph, t: AdmissibleTriple) -> bool:
    try:
        check_triple(H, t)
    except InvalidTripleError:
        return False
    return True

def _powerset(items: Sequence[str]) -> List[FrozenSet[str]]:
    out: List[FrozenSet[str]] = [frozenset()]
    for x in items:
        out += [s | {x} for s in out]
    return sorted(out, key=lambda s: (len(s), sorted(items.index(i) for i in s)))

def enumerate_admissible_triples(H: BHypergraph) -> List[AdmissibleTriple]:
    out: List[AdmissibleTriple] = []
    order = [lam.id for lam in H.lambdas]
    for V in enumerate_bisaturated(H):
        if not one_sided_closed(H, V):
            continue
        fin_s = [x for x in order if x in H.fin_s_over(V)]
        t_fin = [x for x in order if x in H.t_fin_over(V)]
        check_subset_guard(len(fin_s) + len(t_fin), "admissible triple enumeration")
        for sigma in _powerset(fin_s):
            for theta in _powerset(t_fin):
                out.append(AdmissibleTriple(V, sigma, theta))
    log.debug("enumerate_admissible_triples: %d triples", len(out))
    return out

def at_leq(H: BHypergraph, t1: AdmissibleTriple, t2: AdmissibleTriple) -> bool:
    return (
        t1.V <= t2.V
        and t1.Sigma <= t2.Sigma | H.fin_s_absorbed(t2.V)
        and t1.Theta <= t2.Theta | H.t_fin_absorbed(t2.V)
    )

def at_join(H: BHypergraph, t1: AdmissibleTriple, t2: AdmissibleTriple) -> AdmissibleTriple:
    check_triple(H, t1)
    check_triple(H, t2)
    sigma, theta = t1.Sigma | t2.Sigma, t1.Theta | t2.Theta
    V = sigma_theta_saturation(H, t1.V | t2.V, sigma, theta)
    over = H.over(V)
    return AdmissibleTriple(V, sigma & over, theta & over)

def at_meet(H: BHypergraph, t1: AdmissibleTriple, t2: AdmissibleTriple) -> AdmissibleTriple:
    check_triple(H, t1)
    check_triple(H, t2)
    V = t1.V & t2.V
    sigma = (t1.Sigma | H.fin_s_absorbed(t1.V)) & (t2.Sigma | H.fin_s_absorbed(t2.V)) & H.fin_s_over(V)
    theta = (t1.Theta | H.t_fin_absorbed(t1.V)) & (t2.Theta | H.t_fin_absorbed(t2.V)) & H.t_fin_over(V)
    return AdmissibleTriple(V, sigma, theta)

def ideal_generators(H: BHypergraph, t: AdmissibleTriple) -> List[str]:
    """V ⊔ {q_λ : λ ∈ Θ} ⊔ {p_λ : λ ∈ Σ}, in generator order."""
    check_triple(H, t)
    pres = presentation(H)
    wanted = set(t.V) | {q_name(x) for x in t.Theta} | {p_name(x) for x in t.Sigma}
    return [g for g in pres.generators if g in wanted]


# ---------- π ----------
class PiHom(NamedTuple):
    source: HMonoidPres
    target: HMonoidPres
    quotient: BHypergraph
    images: Dict[str, MonoidElt]

    def apply(self, x: MonoidElt) -> MonoidElt:
        out = self.target.zero()
        for g, k in zip(self.source.generators, x):
            if k:
                out = _add(out, tuple(k * a for a in self.images[g]))
        return out


def _restricted(counts: Mapping[str, int], keep: FrozenSet[str]) -> Dict[str, int]:
    return {v: k for v, k in counts.items() if v in keep}

def pi_hom(H: BHypergraph, t: AdmissibleTriple) -> PiHom:
    """
    π: H(H) -> H(H/t): vertices of V vanish; q_α vanishes when s(α) ⊆ V or α ∈ Θ,
    becomes 𝐬̃(α) when r(α) ⊆ V, else q_α̃; p_β dually with Σ.
    """
    check_triple(H, t)
    Q = quotient_bhypergraph(H, t.V, t.Sigma, t.Theta)
    src, tgt = presentation(H), presentation(Q)
    keep = frozenset(Q.vertices)
    images: Dict[str, MonoidElt] = {}
    for v in H.vertices:
        images[v] = tgt.zero() if v in t.V else tgt.elt({v: 1})
    for lam in H.of_class(T_FIN):
        if H.s_set(lam) <= t.V or lam.id in t.Theta:
            img = tgt.zero()
        elif H.r_set(lam) <= t.V:
            img = tgt.elt(_restricted(H.s_vector(lam), keep))
        else:
            img = tgt.elt({q_name(lam.id): 1})
        images[q_name(lam.id)] = img
    for lam in H.of_class(FIN_S):
        if H.r_set(lam) <= t.V or lam.id in t.Sigma:
            img = tgt.zero()
        elif H.s_set(lam) <= t.V:
            img = tgt.elt(_restricted(H.r_vector(lam), keep))
        else:
            img = tgt.elt({p_name(lam.id): 1})
        images[p_name(lam.id)] = img
    return PiHom(src, tgt, Q, images)

def order_ideal_contains(H: BHypergraph, t: AdmissibleTriple, x: MonoidElt, depth: Optional[int] = None) -> Optional[bool]:
    """x lies in the order-ideal of t iff π(x) = 0; None when the zero test is Unknown."""
    pi = pi_hom(H, t)
    res = monoid_equal(pi.target, pi.apply(x), pi.target.zero(), depth)
    if isinstance(res, Unknown):
        return None
    return isinstance(res, Equal)

def psi(H: BHypergraph, t: AdmissibleTriple, depth: Optional[int] = None) -> AdmissibleTriple:
    """
    Read a triple back off the order-ideal generated by ideal_generators(t):
    the vertices it contains, the FinS λ whose p_λ it contains and the TFin λ
    whose q_λ it contains.
    """
    pres = presentation(H)

    def inside(gen: str) -> bool:
        found = order_ideal_contains(H, t, pres.elt({gen: 1}), depth)
        if found is None:
            raise InvalidTripleError(f"membership of {gen} undecided within depth {depth}")
        return found

    V = frozenset(v for v in H.vertices if inside(v))
    sigma = frozenset(x for x in H.fin_s_over(V) if inside(p_name(x)))
    theta = frozenset(x for x in H.t_fin_over(V) if inside(q_name(x)))
    return AdmissibleTriple(V, sigma, theta)


# ---------- Simplicity ----------
def is_monoid_simple(H: BHypergraph) -> bool:
    """S = C, T = D and the only bisaturated sets are ∅ and E⁰."""
    g = H.base
    if set(g.S) != set(g.row_map) or set(g.T) != set(g.col_map):
        return False
    found = enumerate_bisaturated(H)
    return set(found) <= {frozenset(), frozenset(H.vertices)}
