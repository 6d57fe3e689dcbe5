"""Exact rational linear algebra on numpy object arrays of Fraction.

Ranks use fraction-free (Bareiss) elimination on integerized rows; solution
spaces, kernels and inverses use Gauss-Jordan over Fraction. Everything here is
small and dense: the matrices come from hyperedge counts and representation
blocks.

    >>> rank(qmatrix([[1, 2], [2, 4]]))
    1
"""

import itertools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .config import settings
from .errors import GuardExceededError, LinalgError

__all__ = [
    "QMatrix", "Solution", "qmatrix", "zero_matrix", "identity_matrix",
    "rank", "rref", "kernel", "solve", "inverse", "integer_echelon",
    "nonneg_int_solutions", "kernel_sign_decision", "nonneg_kernel_vector",
    "integral_vector", "is_zero_vector", "matmul",
]

log = logging.getLogger(__name__)

QMatrix = np.ndarray


class Solution(NamedTuple):
    particular: np.ndarray
    kernel: List[np.ndarray]


# ---------- Construction ----------
def qmatrix(rows: Iterable[Sequence], cols: Optional[int] = None) -> QMatrix:
    """Build an exact matrix; cols is needed only when rows is empty."""
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    out = np.empty((len(rows), cols), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != cols:
            raise LinalgError(f"ragged matrix: row {i} has {len(r)} entries, expected {cols}")
        for j, x in enumerate(r):
            out[i, j] = Fraction(x)
    return out

def zero_matrix(rows: int, cols: int) -> QMatrix:
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    return out

def identity_matrix(n: int) -> QMatrix:
    return np.array([[Fraction(i == j) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)

def matmul(a, b) -> QMatrix:
    """Exact product; an empty inner dimension gives a zero matrix of Fractions."""
    a, b = _as_q(a), _as_q(b)
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    if a.shape[1] == 0:
        return zero_matrix(a.shape[0], b.shape[1])
    return a.dot(b)

def _as_q(m) -> QMatrix:
    if isinstance(m, np.ndarray) and m.dtype == object and m.ndim == 2:
        return m
    if isinstance(m, np.ndarray) and m.ndim == 2:
        return qmatrix(m.tolist(), m.shape[1])
    return qmatrix(m)

def is_zero_vector(v: Iterable) -> bool:
    return all(x == 0 for x in v)

def integral_vector(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


# ---------- Fraction-free elimination ----------
def _integer_rows(m: QMatrix) -> List[List[int]]:
    rows = []
    for r in m:
        den = 1
        for x in r:
            den = lcm(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in r])
    return rows

def _bareiss(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    a = [row[:] for row in rows]
    nrows = len(a)
    r, prev = 0, 1
    pivots: List[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # exact: every entry is a minor of the input
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        pivots.append(c)
        r += 1
    return a, pivots

def rank(m) -> int:
    m = _as_q(m)
    if m.size == 0:
        return 0
    _, pivots = _bareiss(_integer_rows(m), m.shape[1])
    return len(pivots)

def integer_echelon(m) -> Tuple[List[List[int]], List[int]]:
    """
    Reduced row echelon form over the integers, without normalizing pivots.

    Rows are cleared above and below each pivot by cross-multiplication and then
    divided by their content, so every entry stays an integer.

    Returns:
        (rows, pivot columns); zero rows come last
    """
    m = _as_q(m)
    a = _integer_rows(m)
    nrows, ncols = m.shape
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i == r or a[i][c] == 0:
                continue
            f, g_ = a[r][c], a[i][c]
            a[i] = [f * x - g_ * y for x, y in zip(a[i], a[r])]
            content = 0
            for x in a[i]:
                content = gcd(content, x)
            if content > 1:
                a[i] = [x // content for x in a[i]]
        pivots.append(c)
        r += 1
    return a, pivots


# ---------- Gauss-Jordan over Fraction ----------
def rref(m) -> Tuple[QMatrix, List[int]]:
    a = _as_q(m).copy()
    nrows, ncols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots

def _kernel_from_rref(red: QMatrix, pivots: List[int], ncols: int) -> List[np.ndarray]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.array([Fraction(0)] * ncols, dtype=object)
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(v)
    return basis

def kernel(m) -> List[np.ndarray]:
    """Basis of {x : m·x = 0}, one vector per free column."""
    m = _as_q(m)
    red, pivots = rref(m)
    return _kernel_from_rref(red, pivots, m.shape[1])

def solve(m, b: Sequence) -> Optional[Solution]:
    """
    Describe {x : m·x = b}.

    Returns:
        Solution(particular, kernel basis), or None when the system is inconsistent
    """
    m = _as_q(m)
    nrows, ncols = m.shape
    if len(b) != nrows:
        raise LinalgError(f"right-hand side has {len(b)} entries, matrix has {nrows} rows")
    aug = np.hstack([m, qmatrix([[x] for x in b], 1)]) if nrows else zero_matrix(0, ncols + 1)
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = np.array([Fraction(0)] * ncols, dtype=object)
    for i, p in enumerate(pivots):
        x[p] = red[i, ncols]
    return Solution(x, _kernel_from_rref(red, pivots, ncols))

def inverse(m) -> QMatrix:
    m = _as_q(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise LinalgError(f"cannot invert a {m.shape[0]}x{m.shape[1]} matrix")
    red, pivots = rref(np.hstack([m, identity_matrix(n)]))
    if pivots[:n] != list(range(n)):
        raise LinalgError("matrix is not invertible.")
    return red[:, n:]


# ---------- Nonnegative solutions ----------
def _annihilates(rows: List[List[Fraction]], d: Sequence[int]) -> bool:
    return all(sum((x * y for x, y in zip(row, d)), Fraction(0)) == 0 for row in rows)

def nonneg_int_solutions(m, bound: int) -> List[Tuple[int, ...]]:
    """
    All integer d with m·d = 0, d >= 0 and 0 < max(d) <= bound.

    An empty result only means "none inside the box"; see kernel_sign_decision and
    nonneg_kernel_vector for exact answers.
    """
    if bound < 1:
        raise LinalgError("bound must be at least 1")
    m = _as_q(m)
    n = m.shape[1]
    if (bound + 1) ** n > settings.MAX_SUBSETS:
        raise GuardExceededError(f"box [0,{bound}]^{n} exceeds BSA_MAX_SUBSETS={settings.MAX_SUBSETS}")
    rows = [list(r) for r in m]
    found = [d for d in itertools.product(range(bound + 1), repeat=n) if any(d) and _annihilates(rows, d)]
    log.debug("nonneg_int_solutions: %d solutions in box %d^%d", len(found), bound + 1, n)
    return found

def kernel_sign_decision(m) -> Optional[bool]:
    """
    Decide whether a nonzero nonnegative kernel vector exists, when cheap.

    Returns:
        False for a trivial kernel, the sign test for a 1-dimensional kernel, None otherwise
    """
    basis = kernel(m)
    if not basis:
        return False
    if len(basis) > 1:
        return None
    v = basis[0]
    return all(x >= 0 for x in v) or all(x <= 0 for x in v)

def nonneg_kernel_vector(m) -> Optional[Tuple[int, ...]]:
    """
    Exact search for a nonzero nonnegative integer kernel vector.

    The cone {d >= 0, m·d = 0} is pointed, so it is nonzero iff it has an extreme
    ray; an extreme ray is supported on a column set J where the kernel of m[:, J]
    is one-dimensional and spanned by a strictly positive vector.
    """
    m = _as_q(m)
    n = m.shape[1]
    if 2 ** n > settings.MAX_SUBSETS:
        raise GuardExceededError(f"2^{n} supports exceed BSA_MAX_SUBSETS={settings.MAX_SUBSETS}")
    for size in range(1, n + 1):
        for cols in itertools.combinations(range(n), size):
            basis = kernel(m[:, list(cols)])
            if len(basis) != 1:
                continue
            v = basis[0]
            if all(x < 0 for x in v):
                v = -v
            if not all(x > 0 for x in v):
                continue
            ray = integral_vector(v)
            full = [0] * n
            for c, x in zip(cols, ray):
                full[c] = x
            return tuple(full)
    return None
