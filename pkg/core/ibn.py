# core/ibn.py
"""
Invariant basis number and finite-dimensional representations of finite
B-hypergraphs.

For a regular hypergraph with h hyperedges and n vertices, A and B are the h×n
coefficient matrices of the left and right hand sides of 𝐬(λ) = 𝐫(λ). The
algebra has IBN exactly when the all-ones column c is not in the column space
of Bᵗ − Aᵗ; the test is only as good as the confluence of the monoid, so every
answer carries that caveat. On the other side, a dimension function is a
nonnegative integer solution of (A − B)·d = 0, and each one is realized by a
representation with θ_λ = I.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .algebra import EDGE, VERTEX, GenPath
from .errors import LinalgError, NotHypergraphError, RepresentationError
from .graph import TS, BHypergraph, BiSepGraph, Lambda, cobisaturated_subhypergraphs
from .hypermonoid import EqResult, Equal, monoid_equal, presentation
from .linalg import (
    QMatrix, identity_matrix, integer_echelon, kernel, kernel_sign_decision, matmul,
    nonneg_int_solutions, nonneg_kernel_vector, qmatrix, rank, zero_matrix,
)

log = logging.getLogger(__name__)


# ---------- Coefficient matrices ----------
class CoeffMatrices(NamedTuple):
    lambdas: Tuple[str, ...]     # row order
    vertices: Tuple[str, ...]    # column order
    A: QMatrix
    B: QMatrix

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.lambdas), len(self.vertices)


def coeff_matrices(H: BHypergraph) -> CoeffMatrices:
    """A[λ][v] = #{X ∈ 𝒳_λ : s(X) = v}, B[λ][v] = #{Y ∈ 𝒴_λ : r(Y) = v}."""
    odd = [lam.id for lam in H.lambdas if lam.cls != TS]
    if odd:
        raise NotHypergraphError(f"hyperedges outside TS: {', '.join(odd)}")
    vertices = H.vertices
    a_rows, b_rows = [], []
    for lam in H.lambdas:
        s, r = H.s_vector(lam), H.r_vector(lam)
        a_rows.append([s.get(v, 0) for v in vertices])
        b_rows.append([r.get(v, 0) for v in vertices])
    n = len(vertices)
    return CoeffMatrices(
        tuple(lam.id for lam in H.lambdas), vertices, qmatrix(a_rows, n), qmatrix(b_rows, n)
    )


def _difference_t(cm: CoeffMatrices) -> QMatrix:
    """Bᵗ − Aᵗ, n×h."""
    return (cm.B - cm.A).T.copy()

def _augmented(cm: CoeffMatrices) -> QMatrix:
    d = _difference_t(cm)
    ones = qmatrix([[1] for _ in cm.vertices], 1)
    return np.hstack([d, ones])


# ---------- IBN ----------
@dataclass(frozen=True)
class IbnResult:
    has_ibn: bool
    rank_matrix: int
    rank_augmented: int
    confluence_assumed: bool = True
    advisory: bool = False

    def __bool__(self) -> bool:
        return self.has_ibn


def has_ibn(H: BHypergraph) -> IbnResult:
    """rank(Bᵗ − Aᵗ) < rank([Bᵗ − Aᵗ | c])."""
    cm = coeff_matrices(H)
    r1, r2 = rank(_difference_t(cm)), rank(_augmented(cm))
    log.debug("has_ibn: rank %d vs augmented %d on %dx%d", r1, r2, *cm.shape)
    return IbnResult(r1 < r2, r1, r2)

def k0_span_ibn(H: BHypergraph) -> IbnResult:
    """
    Σv outside the rational span of the relation vectors of the H-monoid.

    Works for every finite B-hypergraph (q and p generators included); for a
    regular hypergraph it is the matrix criterion transposed.
    """
    pres = presentation(H)
    width = len(pres.generators)
    rows = [[a - b for a, b in zip(rel.left, rel.right)] for rel in pres.relations]
    r1 = rank(qmatrix(rows, width))
    r2 = rank(qmatrix(rows + [list(pres.unit())], width))
    return IbnResult(r1 < r2, r1, r2, advisory=True)


@dataclass
class IbnWitness:
    m: int
    p: int
    multipliers: Tuple[int, ...]          # m_j per hyperedge, (Bᵗ − Aᵗ)·m_j = (m − p)·c
    k_prime: Tuple[int, ...]              # forward applications on the p side
    k: Tuple[int, ...]                    # forward applications on the m side
    shift: int = 0
    confirmation: Optional[EqResult] = None

    @property
    def lifted(self) -> Tuple[int, int]:
        return self.m + self.shift, self.p + self.shift

    @property
    def confirmed(self) -> bool:
        return isinstance(self.confirmation, Equal)

    def to_json(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "m": self.m, "p": self.p, "multipliers": list(self.multipliers),
            "shift": self.shift, "lifted": list(self.lifted),
        }
        if self.confirmation is not None:
            out["confirmed"] = self.confirmed
        return out


def verify_witness(H: BHypergraph, w: IbnWitness) -> bool:
    """Substitute the multipliers back into (Bᵗ − Aᵗ)x = (m − p)c."""
    d = _difference_t(coeff_matrices(H))
    for row in d:
        if sum((x * k for x, k in zip(row, w.multipliers)), Fraction(0)) != w.m - w.p:
            return False
    return w.m != w.p

def ibn_witness(H: BHypergraph, confirm: bool = True) -> Optional[IbnWitness]:
    """
    (m, p) with m·Σv = p·Σv, read off the integer echelon form of [Bᵗ − Aᵗ | c].

    Pivot rows give m_{j_i} = c_i·|Πd|/d_i; then p = max |m_j| and m = |Πd| + p.
    None when the algebra has IBN.
    """
    if has_ibn(H):
        return None
    cm = coeff_matrices(H)
    h = len(cm.lambdas)
    rows, pivots = integer_echelon(_augmented(cm))
    pivots = [c for c in pivots if c < h]
    diag = [rows[i][c] for i, c in enumerate(pivots)]
    scale = abs(prod(diag))
    multipliers = [0] * h
    for i, c in enumerate(pivots):
        multipliers[c] = rows[i][h] * scale // diag[i]
    p = max((abs(x) for x in multipliers), default=0)
    if p == 0:
        return None
    w = IbnWitness(
        m=scale + p,
        p=p,
        multipliers=tuple(multipliers),
        k_prime=tuple(max(x, 0) for x in multipliers),
        k=tuple(max(-x, 0) for x in multipliers),
    )
    if not verify_witness(H, w):
        raise LinalgError(f"witness fails substitution: {w}")
    log.debug("ibn_witness: m=%d p=%d multipliers=%s", w.m, w.p, w.multipliers)
    return lift_witness(H, w) if confirm else w

def lift_witness(H: BHypergraph, w: IbnWitness) -> IbnWitness:
    """
    Shift both sides by t so every planned forward step has enough vertices to
    consume, then let the monoid search confirm (m+t)Σv = (p+t)Σv.
    """
    cm = coeff_matrices(H)

    def need(counts: Sequence[int]) -> int:
        return max(
            (sum(k * int(cm.A[j, i]) for j, k in enumerate(counts)) for i in range(len(cm.vertices))),
            default=0,
        )

    w.shift = max(0, need(w.k_prime) - w.p, need(w.k) - w.m)
    pres = presentation(H)
    unit = pres.unit()
    big, small = w.lifted
    depth = max(1, sum(w.k) + sum(w.k_prime))
    w.confirmation = monoid_equal(pres, tuple(big * x for x in unit), tuple(small * x for x in unit), depth)
    if not w.confirmed:
        log.warning("lift_witness: %d·Σv = %d·Σv not confirmed within depth %d", big, small, depth)
    return w


# ---------- Dimension functions ----------
class DimFunctions(NamedTuple):
    vertices: Tuple[str, ...]
    kernel: List[Tuple[Fraction, ...]]     # rational basis of (A − B)·d = 0
    samples: List[Dict[str, int]]          # nonzero nonnegative solutions inside the box
    exists: Optional[bool]                 # nonzero nonnegative solution at all; None undecided

    def to_json(self) -> Dict[str, object]:
        return {
            "vertices": list(self.vertices),
            "kernel": [[str(x) for x in v] for v in self.kernel],
            "samples": self.samples,
            "exists": self.exists,
        }


def _constraint_matrix(H: BHypergraph) -> QMatrix:
    cm = coeff_matrices(H)
    return cm.A - cm.B

def dimension_functions(H: BHypergraph, bound: int, exact: bool = False) -> DimFunctions:
    """
    Solutions of (A − B)·d = 0 with d ≥ 0: the kernel, the box samples with
    max(d) ≤ bound and, when exact, a decision by extreme-ray search.
    """
    m = _constraint_matrix(H)
    vertices = H.vertices
    samples = [dict(zip(vertices, d)) for d in nonneg_int_solutions(m, bound)]
    if samples:
        exists: Optional[bool] = True
    elif exact:
        exists = nonneg_kernel_vector(m) is not None
    else:
        exists = kernel_sign_decision(m)
    basis = [tuple(v) for v in kernel(m)]
    return DimFunctions(vertices, basis, samples, exists)

def is_dimension_function(H: BHypergraph, d: Mapping[str, int]) -> Optional[str]:
    """None when d satisfies every hyperedge; else the first failure."""
    for v in H.vertices:
        if d.get(v, 0) < 0:
            return f"negative dimension at '{v}'"
    for lam in H.lambdas:
        left = sum(d.get(H.base.s_block(X), 0) for X in lam.X)
        right = sum(d.get(H.base.r_block(Y), 0) for Y in lam.Y)
        if left != right:
            return f"hyperedge '{lam.id}': sources sum to {left}, ranges to {right}"
    return None

def nonzero_dimension_function(H: BHypergraph) -> Optional[Dict[str, int]]:
    """A nonzero dimension function of some co-bisaturated full sub-hypergraph, extended by 0."""
    for sub in cobisaturated_subhypergraphs(H):
        if not sub.vertices:
            continue
        ray = nonneg_kernel_vector(_constraint_matrix(sub))
        if ray is not None:
            d = {v: 0 for v in H.vertices}
            d.update(zip(sub.vertices, ray))
            log.debug("nonzero_dimension_function: support %s", sorted(sub.vertices))
            return d
    return None

def has_nonzero_findim_rep(H: BHypergraph) -> bool:
    return nonzero_dimension_function(H) is not None


# ---------- Representations ----------
@dataclass
class QuiverRep:
    dims: Dict[str, int]
    maps: Dict[str, QMatrix]
    ghosts: Dict[str, QMatrix] = field(default_factory=dict)

    def dim(self, v: str) -> int:
        return self.dims.get(v, 0)

    def shape_errors(self, g: BiSepGraph) -> List[str]:
        out = []
        for e in g.edges:
            want = (self.dim(e.src), self.dim(e.tgt))
            got = self.maps.get(e.id)
            if got is None:
                out.append(f"no matrix for edge '{e.id}'")
            elif got.shape != want:
                out.append(f"edge '{e.id}' is {got.shape[0]}x{got.shape[1]}, expected {want[0]}x{want[1]}")
            ghost = self.ghosts.get(e.id)
            if ghost is not None and ghost.shape != want[::-1]:
                out.append(f"ghost of '{e.id}' is {ghost.shape[0]}x{ghost.shape[1]}, expected {want[1]}x{want[0]}")
        return out


def _offsets(sizes: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for k in sizes:
        out.append(acc)
        acc += k
    return out

def build_representation(H: BHypergraph, d: Mapping[str, int]) -> QuiverRep:
    """
    Realize d with θ_λ = I: ρ(XY) is the (X, Y) block of the N_λ identity,
    ρ((XY)*) the (Y, X) block of its inverse.
    """
    problem = is_dimension_function(H, d)
    if problem:
        raise RepresentationError(f"not a dimension function: {problem}")
    g = H.base
    dims = {v: d.get(v, 0) for v in H.vertices}
    rep = QuiverRep(dims, {}, {})
    for lam in H.lambdas:
        heights = [dims[g.s_block(X)] for X in lam.X]
        widths = [dims[g.r_block(Y)] for Y in lam.Y]
        theta = identity_matrix(sum(heights))
        for X, top, hgt in zip(lam.X, _offsets(heights), heights):
            for Y, left, wid in zip(lam.Y, _offsets(widths), widths):
                e = g.meet(X, Y)
                if e is None:
                    continue
                rep.maps[e] = theta[top:top + hgt, left:left + wid].copy()
                rep.ghosts[e] = theta[left:left + wid, top:top + hgt].copy()
    # edges outside every λ act by zero
    for e in g.edges:
        if e.id not in rep.maps:
            rep.maps[e.id] = zero_matrix(dims[e.src], dims[e.tgt])
            rep.ghosts[e.id] = zero_matrix(dims[e.tgt], dims[e.src])
    log.debug("build_representation: %d edge maps, total dimension %d", len(rep.maps), sum(dims.values()))
    return rep


def _assemble(H: BHypergraph, lam: Lambda, blocks: Dict[str, QMatrix], rep: QuiverRep, transpose: bool) -> QMatrix:
    g = H.base
    heights = [rep.dim(g.s_block(X)) for X in lam.X]
    widths = [rep.dim(g.r_block(Y)) for Y in lam.Y]
    if transpose:
        out = zero_matrix(sum(widths), sum(heights))
    else:
        out = zero_matrix(sum(heights), sum(widths))
    for X, top, hgt in zip(lam.X, _offsets(heights), heights):
        for Y, left, wid in zip(lam.Y, _offsets(widths), widths):
            e = g.meet(X, Y)
            if e is None or e not in blocks:
                continue
            if transpose:
                out[left:left + wid, top:top + hgt] = blocks[e]
            else:
                out[top:top + hgt, left:left + wid] = blocks[e]
    return out

def lambda_matrix(H: BHypergraph, rep: QuiverRep, lam: Lambda) -> QMatrix:
    """[ρ(λ)]: row blocks X ∈ 𝒳_λ, column blocks Y ∈ 𝒴_λ, block (X, Y) = ρ(XY)."""
    return _assemble(H, lam, rep.maps, rep, transpose=False)

def lambda_inverse(H: BHypergraph, rep: QuiverRep, lam: Lambda) -> QMatrix:
    """[λ]*: block (Y, X) = ρ((XY)*)."""
    if not rep.ghosts:
        raise RepresentationError("representation carries no ghost maps")
    return _assemble(H, lam, rep.ghosts, rep, transpose=True)


class HCheck(NamedTuple):
    ok: bool
    details: Dict[str, str]


def _require_shapes(H: BHypergraph, rep: QuiverRep) -> None:
    errors = rep.shape_errors(H.base)
    if errors:
        raise RepresentationError("; ".join(errors))

def check_condition_h(H: BHypergraph, rep: QuiverRep) -> HCheck:
    """Every [ρ(λ)] square and of full rank."""
    _require_shapes(H, rep)
    details: Dict[str, str] = {}
    for lam in H.lambdas:
        mat = lambda_matrix(H, rep, lam)
        rows, cols = mat.shape
        if rows != cols:
            details[lam.id] = f"dimension mismatch {rows}x{cols}"
            continue
        r = rank(mat)
        details[lam.id] = "invertible" if r == rows else f"singular (rank {r} of {rows})"
    return HCheck(all(v == "invertible" for v in details.values()), details)

def check_inverses(H: BHypergraph, rep: QuiverRep) -> HCheck:
    """[ρ(λ)]·[λ]* and [λ]*·[ρ(λ)] are identities."""
    _require_shapes(H, rep)
    details: Dict[str, str] = {}
    for lam in H.lambdas:
        fwd, back = lambda_matrix(H, rep, lam), lambda_inverse(H, rep, lam)
        if fwd.shape[0] != fwd.shape[1]:
            details[lam.id] = f"dimension mismatch {fwd.shape[0]}x{fwd.shape[1]}"
            continue
        n = fwd.shape[0]
        ok = np.array_equal(matmul(fwd, back), identity_matrix(n)) and np.array_equal(matmul(back, fwd), identity_matrix(n))
        details[lam.id] = "inverse" if ok else "not inverse"
    return HCheck(all(v == "inverse" for v in details.values()), details)


def rep_path_action(rep: QuiverRep, path: GenPath) -> QMatrix:
    """ρ(p) as a d(s(p))×d(r(p)) matrix; ghosts act by their ghost maps."""
    out = identity_matrix(rep.dim(path.source))
    for letter in path.letters:
        if letter.kind == VERTEX:
            continue
        table = rep.maps if letter.kind == EDGE else rep.ghosts
        if letter.id not in table:
            raise RepresentationError(f"no matrix for '{letter}'")
        out = matmul(out, table[letter.id])
    return out

def check_module_relations(g: BiSepGraph, rep: QuiverRep) -> Optional[str]:
    """
    The row and column relations evaluated on ρ; None when they all hold.

    Rows X, X′ ∈ S: Σ_Y ρ(XY)ρ((X′Y)*) = δ I. Columns Y, Y′ ∈ T:
    Σ_X ρ((XY)*)ρ(XY′) = δ I.
    """
    if not rep.ghosts:
        raise RepresentationError("representation carries no ghost maps")
    for X1 in g.S_order:
        for X2 in g.S_order:
            total = zero_matrix(rep.dim(g.s_block(X1)), rep.dim(g.s_block(X2)))
            for Y in g.common_cols(X1, X2):
                total = total + matmul(rep.maps[g.cell[(X1, Y)]], rep.ghosts[g.cell[(X2, Y)]])
            want = identity_matrix(total.shape[0]) if X1 == X2 else zero_matrix(*total.shape)
            if not np.array_equal(total, want):
                return f"row relation ({X1}, {X2}) fails"
    for Y1 in g.T_order:
        for Y2 in g.T_order:
            total = zero_matrix(rep.dim(g.r_block(Y1)), rep.dim(g.r_block(Y2)))
            for X in g.common_rows(Y1, Y2):
                total = total + matmul(rep.ghosts[g.cell[(X, Y1)]], rep.maps[g.cell[(X, Y2)]])
            want = identity_matrix(total.shape[0]) if Y1 == Y2 else zero_matrix(*total.shape)
            if not np.array_equal(total, want):
                return f"column relation ({Y1}, {Y2}) fails"
    return None
