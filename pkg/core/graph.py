"""Finite bi-separated graphs, B-hypergraphs and their bisaturation combinatorics.

A bi-separated graph is a finite directed graph E together with
  - C: row blocks, each owned by a vertex v and partitioning s^-1(v),
  - D: column blocks, each owned by a vertex w and partitioning r^-1(w),
  - S ⊆ C and T ⊆ D, the blocks that carry the row/column relations,
such that every row block meets every column block in at most one edge.

A B-hypergraph groups the blocks into hyperedges λ = (𝒳_λ, 𝒴_λ) with a class tag
(TS, FinS, TFin; InfS/TInf exist only for infinite graphs and are rejected).
Block order and λ order are input order; everything downstream that has to
"choose" something chooses the first one in that order.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from .errors import ConstructionError, InvalidTripleError
from .utils import check_subset_guard

log = logging.getLogger(__name__)

# ---------- λ classes ----------
TS = "TS"
FIN_S = "FinS"
INF_S = "InfS"
T_FIN = "TFin"
T_INF = "TInf"
LAMBDA_CLASSES = (TS, FIN_S, INF_S, T_FIN, T_INF)
ROW_CLASSES = (TS, FIN_S, INF_S)   # Λ^S
COL_CLASSES = (TS, T_FIN, T_INF)   # Λ_T


class Edge(NamedTuple):
    id: str
    src: str
    tgt: str


class Block(NamedTuple):
    id: str
    owner: str
    edges: Tuple[str, ...]


class Lambda(NamedTuple):
    id: str
    X: Tuple[str, ...]
    Y: Tuple[str, ...]
    cls: str


class Violation(NamedTuple):
    kind: str
    message: str
    ids: Tuple[str, ...] = ()


class LambdaPartition(NamedTuple):
    classes: List[Tuple[Tuple[str, ...], Tuple[str, ...]]]  # (𝒳_λ over S1, 𝒴_λ over T1)
    S2: Tuple[str, ...]
    T2: Tuple[str, ...]
    tame: bool


# ---------- Graphs ----------
@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        out: Dict[str, Edge] = {}
        for e in self.edges:
            out.setdefault(e.id, e)
        return out

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_edges(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.src, []).append(e.id)
        return out

    @cached_property
    def in_edges(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.tgt, []).append(e.id)
        return out

    def s(self, e: str) -> str:
        return self.edge_map[e].src

    def r(self, e: str) -> str:
        return self.edge_map[e].tgt

    def is_sink(self, v: str) -> bool:
        return not self.out_edges.get(v)

    def is_source(self, v: str) -> bool:
        return not self.in_edges.get(v)

    def is_simple(self) -> bool:
        pairs = [(e.src, e.tgt) for e in self.edges]
        return len(pairs) == len(set(pairs))


def make_graph(vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> Graph:
    """Build a Graph from vertex ids and (id, src, tgt) triples."""
    return Graph(tuple(vertices), tuple(Edge(*e) for e in edges))


@dataclass(frozen=True)
class BiSepGraph:
    graph: Graph
    C: Tuple[Block, ...]
    D: Tuple[Block, ...]
    S: FrozenSet[str] = field(default_factory=frozenset)
    T: FrozenSet[str] = field(default_factory=frozenset)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.graph.vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self.graph.edges

    @cached_property
    def row_map(self) -> Dict[str, Block]:
        return {X.id: X for X in self.C}

    @cached_property
    def col_map(self) -> Dict[str, Block]:
        return {Y.id: Y for Y in self.D}

    @cached_property
    def row_of(self) -> Dict[str, str]:
        out: Dict[str, str] = {}
        for X in self.C:
            for e in X.edges:
                out.setdefault(e, X.id)
        return out

    @cached_property
    def col_of(self) -> Dict[str, str]:
        out: Dict[str, str] = {}
        for Y in self.D:
            for e in Y.edges:
                out.setdefault(e, Y.id)
        return out

    @cached_property
    def cell(self) -> Dict[Tuple[str, str], str]:
        """(X, Y) -> the edge X∩Y, for every meeting pair."""
        out: Dict[Tuple[str, str], str] = {}
        for e in self.graph.edge_map:
            X, Y = self.row_of.get(e), self.col_of.get(e)
            if X is not None and Y is not None:
                out.setdefault((X, Y), e)
        return out

    @cached_property
    def cols_meeting(self) -> Dict[str, List[str]]:
        """Row block -> column blocks it meets, in D order."""
        out: Dict[str, List[str]] = {X.id: [] for X in self.C}
        for Y in self.D:
            for e in Y.edges:
                X = self.row_of.get(e)
                if X is not None and Y.id not in out[X]:
                    out[X].append(Y.id)
        return out

    @cached_property
    def rows_meeting(self) -> Dict[str, List[str]]:
        """Column block -> row blocks it meets, in C order."""
        out: Dict[str, List[str]] = {Y.id: [] for Y in self.D}
        for X in self.C:
            for e in X.edges:
                Y = self.col_of.get(e)
                if Y is not None and X.id not in out[Y]:
                    out[Y].append(X.id)
        return out

    @cached_property
    def S_order(self) -> Tuple[str, ...]:
        return tuple(X.id for X in self.C if X.id in self.S)

    @cached_property
    def T_order(self) -> Tuple[str, ...]:
        return tuple(Y.id for Y in self.D if Y.id in self.T)

    def meet(self, X: str, Y: str) -> Optional[str]:
        return self.cell.get((X, Y))

    def common_cols(self, X1: str, X2: str) -> List[str]:
        other = set(self.cols_meeting[X2])
        return [Y for Y in self.cols_meeting[X1] if Y in other]

    def common_rows(self, Y1: str, Y2: str) -> List[str]:
        other = set(self.rows_meeting[Y2])
        return [X for X in self.rows_meeting[Y1] if X in other]

    def s_block(self, X: str) -> str:
        return self.row_map[X].owner

    def r_block(self, Y: str) -> str:
        return self.col_map[Y].owner


# ---------- Validation ----------
def _duplicates(ids: Iterable[str]) -> List[str]:
    seen: Set[str] = set()
    dup: List[str] = []
    for i in ids:
        if i in seen and i not in dup:
            dup.append(i)
        seen.add(i)
    return dup

def _check_side(g: BiSepGraph, blocks: Tuple[Block, ...], side: str) -> List[Violation]:
    graph = g.graph
    kind = "row" if side == "C" else "column"
    end = graph.s if side == "C" else graph.r
    incident = graph.out_edges if side == "C" else graph.in_edges
    out: List[Violation] = []
    for d in _duplicates(b.id for b in blocks):
        out.append(Violation("duplicate-block", f"duplicate {kind} block id '{d}'", (d,)))
    owned: Dict[str, List[str]] = {}
    for b in blocks:
        if b.owner not in graph.vertex_index:
            out.append(Violation("dangling", f"{kind} block '{b.id}' owned by unknown vertex '{b.owner}'", (b.id, b.owner)))
            continue
        if not b.edges:
            out.append(Violation("empty-block", f"{kind} block '{b.id}' is empty", (b.id,)))
        for e in b.edges:
            if e not in graph.edge_map:
                out.append(Violation("dangling", f"{kind} block '{b.id}' lists unknown edge '{e}'", (b.id, e)))
            elif end(e) != b.owner:
                out.append(Violation("wrong-owner", f"edge '{e}' in {kind} block '{b.id}' does not end at '{b.owner}'", (b.id, e)))
        owned.setdefault(b.owner, []).extend(b.edges)
    for v in graph.vertices:
        listed = owned.get(v, [])
        for e in _duplicates(listed):
            out.append(Violation("not-partition", f"edge '{e}' lies in two {kind} blocks of '{v}'", (v, e)))
        missing = [e for e in incident.get(v, []) if e not in listed]
        for e in missing:
            out.append(Violation("not-partition", f"edge '{e}' is in no {kind} block of '{v}'", (v, e)))
    return out

def validate(g: BiSepGraph) -> List[Violation]:
    """Every violated bi-separated-graph invariant; the empty list means ok."""
    graph = g.graph
    out: List[Violation] = []
    for v in _duplicates(graph.vertices):
        out.append(Violation("duplicate-vertex", f"duplicate vertex id '{v}'", (v,)))
    for e in _duplicates(x.id for x in graph.edges):
        out.append(Violation("duplicate-edge", f"duplicate edge id '{e}'", (e,)))
    for e in graph.edges:
        for end in (e.src, e.tgt):
            if end not in graph.vertex_index:
                out.append(Violation("dangling", f"edge '{e.id}' references unknown vertex '{end}'", (e.id, end)))
    if out:
        return out
    out.extend(_check_side(g, g.C, "C"))
    out.extend(_check_side(g, g.D, "D"))
    col_sets = [(Y.id, set(Y.edges)) for Y in g.D]
    for X in g.C:
        xs = set(X.edges)
        for yid, ys in col_sets:
            n = len(xs & ys)
            if n > 1:
                out.append(Violation("intersection", f"|{X.id}∩{yid}|={n}", (X.id, yid)))
    for X in sorted(g.S - set(g.row_map)):
        out.append(Violation("dangling", f"S names unknown row block '{X}'", (X,)))
    for Y in sorted(g.T - set(g.col_map)):
        out.append(Violation("dangling", f"T names unknown column block '{Y}'", (Y,)))
    return out


# ---------- Constructors ----------
def _rows_full(E: Graph) -> Tuple[Block, ...]:
    return tuple(Block(f"X_{v}", v, tuple(E.out_edges[v])) for v in E.vertices if E.out_edges[v])

def _cols_full(E: Graph) -> Tuple[Block, ...]:
    return tuple(Block(f"Y_{v}", v, tuple(E.in_edges[v])) for v in E.vertices if E.in_edges[v])

def _rows_discrete(E: Graph) -> Tuple[Block, ...]:
    return tuple(Block(f"X_{e.id}", e.src, (e.id,)) for e in E.edges)

def _cols_discrete(E: Graph) -> Tuple[Block, ...]:
    return tuple(Block(f"Y_{e.id}", e.tgt, (e.id,)) for e in E.edges)

def ck_bisep(E: Graph, S: Iterable[str]) -> BiSepGraph:
    """Full rows, discrete columns, S = rows of the given vertices, T = D."""
    S = list(S)
    for v in S:
        if v not in E.vertex_index:
            raise ConstructionError(f"unknown vertex '{v}' in S")
        if E.is_sink(v):
            raise ConstructionError(f"vertex '{v}' is not row-regular (it is a sink)")
    C = _rows_full(E)
    D = _cols_discrete(E)
    return BiSepGraph(E, C, D, frozenset(f"X_{v}" for v in S), frozenset(Y.id for Y in D))

def row_regular(E: Graph) -> List[str]:
    return [v for v in E.vertices if E.out_edges[v]]

def standard_bisep(E: Graph) -> BiSepGraph:
    if not E.is_simple():
        raise ConstructionError("standard bi-separation needs a graph without parallel edges")
    C, D = _rows_full(E), _cols_full(E)
    return BiSepGraph(E, C, D, frozenset(X.id for X in C), frozenset(Y.id for Y in D))

def trivial_bisep(E: Graph) -> BiSepGraph:
    C, D = _rows_discrete(E), _cols_discrete(E)
    return BiSepGraph(E, C, D, frozenset(X.id for X in C), frozenset(Y.id for Y in D))

def separated_bisep(E: Graph, C: Mapping[str, Sequence[str]], S: Optional[Iterable[str]] = None) -> BiSepGraph:
    """
    Separated graph (E, C): the given row partition, discrete columns, T = D.

    Args:
        C: row block id -> edge ids; every block must sit inside one s^-1(v)
        S: row block ids carrying relations (default: all of C)
    """
    blocks: List[Block] = []
    for bid, edges in C.items():
        edges = tuple(edges)
        if not edges:
            raise ConstructionError(f"row block '{bid}' is empty")
        for e in edges:
            if e not in E.edge_map:
                raise ConstructionError(f"row block '{bid}' lists unknown edge '{e}'")
        owners = {E.s(e) for e in edges}
        if len(owners) != 1:
            raise ConstructionError(f"row block '{bid}' mixes sources {sorted(owners)}")
        blocks.append(Block(bid, owners.pop(), edges))
    listed = [e for b in blocks for e in b.edges]
    if sorted(listed) != sorted(e.id for e in E.edges):
        raise ConstructionError("C is not a partition of the edge set")
    S = set(C) if S is None else set(S)
    if not S <= set(C):
        raise ConstructionError(f"S names unknown row blocks {sorted(S - set(C))}")
    D = _cols_discrete(E)
    return BiSepGraph(E, tuple(blocks), D, frozenset(S), frozenset(Y.id for Y in D))

def _weight_of(w: Mapping[str, int], e: str) -> int:
    if e not in w:
        raise ConstructionError(f"edge '{e}' has no weight")
    k = w[e]
    if not isinstance(k, int) or k <= 0:
        raise ConstructionError(f"weight of '{e}' must be a positive integer, got {k!r}")
    return k

def weighted_bisep(E: Graph, w: Mapping[str, int]) -> BiSepGraph:
    """
    Weighted bi-separation on E_w: e has copies e_1..e_w(e); for a non-sink v with
    w(v) = max weight leaving v, X_v^i = {e_i : e ∈ s^-1(v), i <= w(e)} for
    i <= w(v), and Y^e = {e_1, .., e_w(e)}. S = C and T = D.
    """
    weights = {e.id: _weight_of(w, e.id) for e in E.edges}
    Ew = make_graph(
        E.vertices,
        [(f"{e.id}_{i}", e.src, e.tgt) for e in E.edges for i in range(1, weights[e.id] + 1)],
    )
    C: List[Block] = []
    for v in E.vertices:
        out = E.out_edges[v]
        if not out:
            continue
        for i in range(1, max(weights[e] for e in out) + 1):
            C.append(Block(f"X_{v}_{i}", v, tuple(f"{e}_{i}" for e in out if weights[e] >= i)))
    D = [Block(f"Y_{e.id}", e.tgt, tuple(f"{e.id}_{i}" for i in range(1, weights[e.id] + 1))) for e in E.edges]
    # Y blocks are owned by r(e); order them by owner so D_v reads contiguously
    D.sort(key=lambda Y: Ew.vertex_index[Y.owner])
    return BiSepGraph(Ew, tuple(C), tuple(D), frozenset(X.id for X in C), frozenset(Y.id for Y in D))

def weighted_separated_bisep(E: Graph, C: Mapping[str, Sequence[str]], w: Mapping[str, int]) -> BiSepGraph:
    """Weighted Cohn-Leavitt bi-separation of a finitely separated graph (E_w, C)."""
    base = separated_bisep(E, C)
    weights = {e.id: _weight_of(w, e.id) for e in E.edges}
    Ew = make_graph(
        E.vertices,
        [(f"{e.id}_{i}", e.src, e.tgt) for e in E.edges for i in range(1, weights[e.id] + 1)],
    )
    rows: List[Block] = []
    for X in base.C:
        for i in range(1, max(weights[e] for e in X.edges) + 1):
            rows.append(Block(f"{X.id}_{i}", X.owner, tuple(f"{e}_{i}" for e in X.edges if weights[e] >= i)))
    cols = [Block(f"Y_{e.id}", e.tgt, tuple(f"{e.id}_{i}" for i in range(1, weights[e.id] + 1))) for e in E.edges]
    cols.sort(key=lambda Y: Ew.vertex_index[Y.owner])
    return BiSepGraph(Ew, tuple(rows), tuple(cols), frozenset(X.id for X in rows), frozenset(Y.id for Y in cols))


class Hyperedge(NamedTuple):
    id: str
    sources: Tuple[str, ...]
    ranges: Tuple[str, ...]
    cls: str = TS


def hypergraph_bisep(vertices: Iterable[str], hyperedges: Iterable[Hyperedge]) -> "BHypergraph":
    """
    The B-hypergraph of a hypergraph: edges h_i_j from s(h)_i to r(h)_j,
    rows X_h_i = {h_i_j : j}, columns Y_h_j = {h_i_j : i}, one λ per hyperedge.
    """
    vertices = tuple(vertices)
    index = set(vertices)
    edges: List[Tuple[str, str, str]] = []
    C: List[Block] = []
    D: List[Block] = []
    lambdas: List[Lambda] = []
    S: Set[str] = set()
    T: Set[str] = set()
    for h in hyperedges:
        h = Hyperedge(*h)
        if not h.sources or not h.ranges:
            raise ConstructionError(f"hyperedge '{h.id}' has an empty source or range family")
        if h.cls not in (TS, FIN_S, T_FIN):
            raise ConstructionError(f"hyperedge '{h.id}' has unsupported class '{h.cls}'")
        for v in h.sources + h.ranges:
            if v not in index:
                raise ConstructionError(f"hyperedge '{h.id}' references unknown vertex '{v}'")
        I, J = range(1, len(h.sources) + 1), range(1, len(h.ranges) + 1)
        for i in I:
            for j in J:
                edges.append((f"{h.id}_{i}_{j}", h.sources[i - 1], h.ranges[j - 1]))
        xs = [Block(f"X_{h.id}_{i}", h.sources[i - 1], tuple(f"{h.id}_{i}_{j}" for j in J)) for i in I]
        ys = [Block(f"Y_{h.id}_{j}", h.ranges[j - 1], tuple(f"{h.id}_{i}_{j}" for i in I)) for j in J]
        C.extend(xs)
        D.extend(ys)
        if h.cls in ROW_CLASSES:
            S.update(X.id for X in xs)
        if h.cls in COL_CLASSES:
            T.update(Y.id for Y in ys)
        lambdas.append(Lambda(h.id, tuple(X.id for X in xs), tuple(Y.id for Y in ys), h.cls))
    g = BiSepGraph(make_graph(vertices, edges), tuple(C), tuple(D), frozenset(S), frozenset(T))
    return BHypergraph(g, tuple(lambdas))


# ---------- Components and Λ-partition ----------
def _union_find(items: Iterable[str]) -> Dict[str, str]:
    return {i: i for i in items}

def _find(parent: Dict[str, str], x: str) -> str:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x

def _union(parent: Dict[str, str], a: str, b: str) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[rb] = ra

def induced(g: BiSepGraph, W: Iterable[str]) -> BiSepGraph:
    """Bi-separated graph induced on a vertex set closed under incidence (a union of components)."""
    W = set(W)
    E = make_graph([v for v in g.vertices if v in W], [e for e in g.edges if e.src in W])
    C = tuple(X for X in g.C if X.owner in W)
    D = tuple(Y for Y in g.D if Y.owner in W)
    return BiSepGraph(E, C, D, frozenset(X.id for X in C if X.id in g.S), frozenset(Y.id for Y in D if Y.id in g.T))

def connected_components(g: BiSepGraph) -> List[BiSepGraph]:
    """Components of the double graph Ê, in order of their first vertex."""
    parent = _union_find(g.vertices)
    for e in g.edges:
        _union(parent, e.src, e.tgt)
    groups: Dict[str, List[str]] = {}
    for v in g.vertices:
        groups.setdefault(_find(parent, v), []).append(v)
    return [induced(g, vs) for vs in groups.values()]

def is_connected(g: BiSepGraph) -> bool:
    return len(connected_components(g)) <= 1

def _block_components(g: BiSepGraph, rows: Sequence[str], cols: Sequence[str]) -> List[Tuple[List[str], List[str]]]:
    """Components of the row/column meeting graph restricted to the given blocks."""
    rows_set, cols_set = set(rows), set(cols)
    keys = [("C", X) for X in rows] + [("D", Y) for Y in cols]
    parent = _union_find(f"{k}:{b}" for k, b in keys)
    touched: Set[str] = set()
    for (X, Y) in g.cell:
        if X in rows_set and Y in cols_set:
            _union(parent, f"C:{X}", f"D:{Y}")
            touched.update((f"C:{X}", f"D:{Y}"))
    comps: Dict[str, Tuple[List[str], List[str]]] = {}
    for k, b in keys:
        node = f"{k}:{b}"
        if node not in touched:
            continue
        comp = comps.setdefault(_find(parent, node), ([], []))
        (comp[0] if k == "C" else comp[1]).append(b)
    return list(comps.values())

def lambda_partition(g: BiSepGraph) -> LambdaPartition:
    """
    The ∼_T classes of S1 paired with the ∼_S classes of T1.

    S1 are the S-blocks meeting some T-block (T1 dually); two S1 blocks are ∼_T
    related when an alternating chain of meeting S/T blocks joins them. Each class
    of S1 meets exactly one class of T1, which gives the pairing.
    """
    pairs = _block_components(g, g.S_order, g.T_order)
    classes = [(tuple(xs), tuple(ys)) for xs, ys in pairs]
    s1 = {X for xs, _ in classes for X in xs}
    t1 = {Y for _, ys in classes for Y in ys}
    S2 = tuple(X for X in g.S_order if X not in s1)
    T2 = tuple(Y for Y in g.T_order if Y not in t1)
    # tame: every class finite; always true for finite graphs, computed anyway
    tame = all(len(xs) < float("inf") and len(ys) < float("inf") for xs, ys in classes)
    return LambdaPartition(classes, S2, T2, tame)

def default_lambdas(g: BiSepGraph) -> Tuple[List[Lambda], List[Violation]]:
    """
    Hyperedges read off the block-meeting components of g.

    A component whose rows all lie in S and columns all in T is TS; rows in S and
    no column in T is FinS; no row in S and columns in T is TFin. Anything else
    cannot be part of a B-hypergraph and is reported.
    """
    out: List[Lambda] = []
    bad: List[Violation] = []
    for n, (xs, ys) in enumerate(_block_components(g, [X.id for X in g.C], [Y.id for Y in g.D]), start=1):
        rows_s = [X in g.S for X in xs]
        cols_t = [Y in g.T for Y in ys]
        if all(rows_s) and all(cols_t):
            cls = TS
        elif all(rows_s) and not any(cols_t):
            cls = FIN_S
        elif not any(rows_s) and all(cols_t):
            cls = T_FIN
        else:
            bad.append(Violation(
                "not-hypergraph",
                f"blocks {xs + ys} mix S/non-S rows or T/non-T columns",
                tuple(xs + ys),
            ))
            continue
        out.append(Lambda(f"lam{n}", tuple(xs), tuple(ys), cls))
    return out, bad


# ---------- B-hypergraphs ----------
@dataclass(frozen=True)
class BHypergraph:
    base: BiSepGraph
    lambdas: Tuple[Lambda, ...]

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.base.vertices

    @cached_property
    def lambda_map(self) -> Dict[str, Lambda]:
        return {lam.id: lam for lam in self.lambdas}

    @cached_property
    def lambda_index(self) -> Dict[str, int]:
        return {lam.id: i for i, lam in enumerate(self.lambdas)}

    def of_class(self, *classes: str) -> List[Lambda]:
        return [lam for lam in self.lambdas if lam.cls in classes]

    def s_set(self, lam: Lambda) -> FrozenSet[str]:
        return frozenset(self.base.s_block(X) for X in lam.X)

    def r_set(self, lam: Lambda) -> FrozenSet[str]:
        return frozenset(self.base.r_block(Y) for Y in lam.Y)

    def s_vector(self, lam: Lambda) -> Dict[str, int]:
        """𝐬(λ) = Σ_X s(X) as vertex multiplicities."""
        out: Dict[str, int] = {}
        for X in lam.X:
            v = self.base.s_block(X)
            out[v] = out.get(v, 0) + 1
        return out

    def r_vector(self, lam: Lambda) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for Y in lam.Y:
            v = self.base.r_block(Y)
            out[v] = out.get(v, 0) + 1
        return out

    def x_over(self, lam: Lambda, V: FrozenSet[str]) -> List[str]:
        return [X for X in lam.X if self.base.s_block(X) not in V]

    def y_over(self, lam: Lambda, V: FrozenSet[str]) -> List[str]:
        return [Y for Y in lam.Y if self.base.r_block(Y) not in V]

    def over(self, V: Iterable[str]) -> FrozenSet[str]:
        """Λ/V: TS and FinS need a row outside V, TFin a column outside V."""
        V = frozenset(V)
        out = set()
        for lam in self.lambdas:
            if lam.cls in (TS, FIN_S, INF_S) and self.x_over(lam, V):
                out.add(lam.id)
            elif lam.cls in (T_FIN, T_INF) and self.y_over(lam, V):
                out.add(lam.id)
        return frozenset(out)

    def fin_s_absorbed(self, V: Iterable[str]) -> FrozenSet[str]:
        """FinS λ with r(λ) ⊆ V: p_λ ≤ 𝐫(λ) already lies in the ideal of V."""
        V = frozenset(V)
        return frozenset(lam.id for lam in self.of_class(FIN_S) if self.r_set(lam) <= V)

    def t_fin_absorbed(self, V: Iterable[str]) -> FrozenSet[str]:
        """TFin λ with s(λ) ⊆ V: q_λ ≤ 𝐬(λ) already lies in the ideal of V."""
        V = frozenset(V)
        return frozenset(lam.id for lam in self.of_class(T_FIN) if self.s_set(lam) <= V)

    def fin_s_over(self, V: Iterable[str]) -> FrozenSet[str]:
        over = self.over(V)
        return frozenset(lam.id for lam in self.of_class(FIN_S) if lam.id in over)

    def t_fin_over(self, V: Iterable[str]) -> FrozenSet[str]:
        over = self.over(V)
        return frozenset(lam.id for lam in self.of_class(T_FIN) if lam.id in over)

    def is_regular(self) -> bool:
        return all(lam.cls == TS for lam in self.lambdas)


def as_hypergraph(g: BiSepGraph, lambdas: Optional[Sequence[Lambda]] = None) -> Tuple[BHypergraph, List[Violation]]:
    """Attach λ's (computed when not given) and report every B-hypergraph violation."""
    bad: List[Violation] = []
    if lambdas is None:
        lambdas, bad = default_lambdas(g)
    H = BHypergraph(g, tuple(lambdas))
    # blocks of a mixed component are reported once, not again as uncovered
    mixed = {b for v in bad for b in v.ids}
    rest = [v for v in validate_bhypergraph(H) if not (v.kind == "lambda-cover" and v.ids[0] in mixed)]
    return H, bad + rest

def validate_bhypergraph(H: BHypergraph) -> List[Violation]:
    g = H.base
    out = validate(g)
    if out:
        return out
    for d in _duplicates(lam.id for lam in H.lambdas):
        out.append(Violation("duplicate-lambda", f"duplicate hyperedge id '{d}'", (d,)))
    owner_x: Dict[str, List[str]] = {}
    owner_y: Dict[str, List[str]] = {}
    for lam in H.lambdas:
        if lam.cls not in LAMBDA_CLASSES:
            out.append(Violation("lambda-class", f"hyperedge '{lam.id}' has unknown class '{lam.cls}'", (lam.id,)))
            continue
        if lam.cls in (INF_S, T_INF):
            out.append(Violation("lambda-class", f"hyperedge '{lam.id}': class {lam.cls} needs infinite blocks", (lam.id,)))
        if not lam.X or not lam.Y:
            out.append(Violation("lambda-empty", f"hyperedge '{lam.id}' has an empty block family", (lam.id,)))
        for X in lam.X:
            if X not in g.row_map:
                out.append(Violation("dangling", f"hyperedge '{lam.id}' names unknown row block '{X}'", (lam.id, X)))
                continue
            owner_x.setdefault(X, []).append(lam.id)
            in_s = X in g.S
            if in_s != (lam.cls in ROW_CLASSES):
                out.append(Violation("lambda-class", f"row block '{X}' {'is' if in_s else 'is not'} in S but hyperedge '{lam.id}' is {lam.cls}", (lam.id, X)))
        for Y in lam.Y:
            if Y not in g.col_map:
                out.append(Violation("dangling", f"hyperedge '{lam.id}' names unknown column block '{Y}'", (lam.id, Y)))
                continue
            owner_y.setdefault(Y, []).append(lam.id)
            in_t = Y in g.T
            if in_t != (lam.cls in COL_CLASSES):
                out.append(Violation("lambda-class", f"column block '{Y}' {'is' if in_t else 'is not'} in T but hyperedge '{lam.id}' is {lam.cls}", (lam.id, Y)))
        for X in lam.X:
            for Y in lam.Y:
                if X in g.row_map and Y in g.col_map and g.meet(X, Y) is None:
                    out.append(Violation("lambda-incomplete", f"hyperedge '{lam.id}': {X}∩{Y}=∅", (lam.id, X, Y)))
    for X in g.C:
        owners = owner_x.get(X.id, [])
        if len(owners) != 1:
            out.append(Violation("lambda-cover", f"row block '{X.id}' lies in {len(owners)} hyperedges", (X.id,)))
    for Y in g.D:
        owners = owner_y.get(Y.id, [])
        if len(owners) != 1:
            out.append(Violation("lambda-cover", f"column block '{Y.id}' lies in {len(owners)} hyperedges", (Y.id,)))
    for (X, Y), e in g.cell.items():
        if X not in g.S and Y not in g.T:
            out.append(Violation("out-blocks-meet", f"{X}∉S and {Y}∉T share edge '{e}'", (X, Y)))
        ox, oy = owner_x.get(X, []), owner_y.get(Y, [])
        if len(ox) == 1 and len(oy) == 1 and ox[0] != oy[0]:
            out.append(Violation("lambda-overlap", f"{X} ({ox[0]}) and {Y} ({oy[0]}) share edge '{e}'", (X, Y)))
    return out


# ---------- Bisaturation ----------
def is_bisaturated(H: BHypergraph, V: Iterable[str]) -> bool:
    V = frozenset(V)
    return all((H.s_set(lam) <= V) == (H.r_set(lam) <= V) for lam in H.of_class(TS))

def one_sided_closed(H: BHypergraph, V: Iterable[str]) -> bool:
    """TFin: s(λ) ⊆ V ⇒ r(λ) ⊆ V; FinS: r(λ) ⊆ V ⇒ s(λ) ⊆ V."""
    V = frozenset(V)
    for lam in H.of_class(T_FIN):
        if H.s_set(lam) <= V and not H.r_set(lam) <= V:
            return False
    for lam in H.of_class(FIN_S):
        if H.r_set(lam) <= V and not H.s_set(lam) <= V:
            return False
    return True

def _saturate(H: BHypergraph, V: Iterable[str], forward: Sequence[Lambda], backward: Sequence[Lambda]) -> FrozenSet[str]:
    """Alternate odd steps (s(λ) ⊆ V adds r(λ)) and even steps (r(λ) ⊆ V adds s(λ)) to a fixpoint."""
    cur = set(V)
    steps = 0
    while True:
        before = len(cur)
        frozen = frozenset(cur)
        for lam in forward:
            if H.s_set(lam) <= frozen:
                cur |= H.r_set(lam)
        frozen = frozenset(cur)
        for lam in backward:
            if H.r_set(lam) <= frozen:
                cur |= H.s_set(lam)
        steps += 2
        if len(cur) == before:
            log.debug("saturation settled after %d steps at %d vertices", steps, len(cur))
            return frozenset(cur)

def bisaturated_closure(H: BHypergraph, V: Iterable[str]) -> FrozenSet[str]:
    """Smallest bisaturated superset of V."""
    V = frozenset(V)
    unknown = V - set(H.vertices)
    if unknown:
        raise InvalidTripleError(f"unknown vertices {sorted(unknown)}")
    ts = H.of_class(TS)
    return _saturate(H, V, ts, ts)

def _check_markers(H: BHypergraph, sigma: Iterable[str], theta: Iterable[str]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    sigma, theta = frozenset(sigma), frozenset(theta)
    row_side = {lam.id for lam in H.of_class(*ROW_CLASSES)}
    col_side = {lam.id for lam in H.of_class(*COL_CLASSES)}
    if not sigma <= row_side:
        raise InvalidTripleError(f"Σ may only name row-side hyperedges, got {sorted(sigma - row_side)}")
    if not theta <= col_side:
        raise InvalidTripleError(f"Θ may only name column-side hyperedges, got {sorted(theta - col_side)}")
    return sigma, theta

def sigma_theta_saturation(H: BHypergraph, V: Iterable[str], sigma: Iterable[str] = (), theta: Iterable[str] = ()) -> FrozenSet[str]:
    """
    (Σ,Θ)-bisaturation of V.

    Odd steps fire λ ∈ TS ∪ TFin ∪ Σ (s(λ) ⊆ V adds r(λ)), even steps fire
    λ ∈ TS ∪ FinS ∪ Θ (r(λ) ⊆ V adds s(λ)). The TFin/FinS rules are the ones
    the relations 𝐬 = 𝐫 + q and 𝐫 = 𝐬 + p force on an order-ideal; without any
    FinS/TFin hyperedge firing this is bisaturated_closure.
    """
    V = frozenset(V)
    unknown = V - set(H.vertices)
    if unknown:
        raise InvalidTripleError(f"unknown vertices {sorted(unknown)}")
    sigma, theta = _check_markers(H, sigma, theta)
    forward = [lam for lam in H.lambdas if lam.cls in (TS, T_FIN) or lam.id in sigma]
    backward = [lam for lam in H.lambdas if lam.cls in (TS, FIN_S) or lam.id in theta]
    return _saturate(H, V, forward, backward)

def _subsets(vertices: Sequence[str]) -> Iterable[FrozenSet[str]]:
    for k in range(len(vertices) + 1):
        for combo in itertools.combinations(vertices, k):
            yield frozenset(combo)

def enumerate_bisaturated(H: BHypergraph) -> List[FrozenSet[str]]:
    """All bisaturated vertex sets, by size then input order."""
    check_subset_guard(len(H.vertices), "bisaturated enumeration")
    return [V for V in _subsets(H.vertices) if is_bisaturated(H, V)]


def check_triple_parts(
    H: BHypergraph, V: Iterable[str], sigma: Iterable[str] = (), theta: Iterable[str] = ()
) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
    """Raise InvalidTripleError unless (V, Σ, Θ) is admissible; returns the three as frozensets."""
    V, sigma, theta = frozenset(V), frozenset(sigma), frozenset(theta)
    unknown = V - set(H.vertices)
    if unknown:
        raise InvalidTripleError(f"unknown vertices {sorted(unknown)}")
    unknown = (sigma | theta) - set(H.lambda_map)
    if unknown:
        raise InvalidTripleError(f"unknown hyperedges {sorted(unknown)}")
    if not is_bisaturated(H, V):
        raise InvalidTripleError(f"V={sorted(V)} is not bisaturated")
    if not one_sided_closed(H, V):
        raise InvalidTripleError(f"V={sorted(V)} is not closed under the one-sided hyperedges")
    fin_s, t_fin = H.fin_s_over(V), H.t_fin_over(V)
    if not sigma <= fin_s:
        raise InvalidTripleError(f"Σ must lie in the FinS hyperedges over V, got {sorted(sigma - fin_s)}")
    if not theta <= t_fin:
        raise InvalidTripleError(f"Θ must lie in the TFin hyperedges over V, got {sorted(theta - t_fin)}")
    return V, sigma, theta


# ---------- Sub- and quotient hypergraphs ----------
def full_subhypergraph(H: BHypergraph, W: Iterable[str]) -> BHypergraph:
    """
    Full sub-hypergraph hyper-induced on W: edges with both ends in W, blocks
    cut down to them (empty ones dropped), λ kept when both families survive.
    """
    W = frozenset(W)
    g = H.base
    keep_edges = [e for e in g.edges if e.src in W and e.tgt in W]
    kept = {e.id for e in keep_edges}
    E = make_graph([v for v in g.vertices if v in W], keep_edges)
    C = [Block(X.id, X.owner, tuple(e for e in X.edges if e in kept)) for X in g.C if X.owner in W]
    D = [Block(Y.id, Y.owner, tuple(e for e in Y.edges if e in kept)) for Y in g.D if Y.owner in W]
    C = tuple(X for X in C if X.edges)
    D = tuple(Y for Y in D if Y.edges)
    rows = {X.id for X in C}
    cols = {Y.id for Y in D}
    sub = BiSepGraph(E, C, D, frozenset(X for X in g.S if X in rows), frozenset(Y for Y in g.T if Y in cols))
    lambdas = []
    for lam in H.lambdas:
        xs = tuple(X for X in lam.X if X in rows)
        ys = tuple(Y for Y in lam.Y if Y in cols)
        if xs and ys:
            lambdas.append(Lambda(lam.id, xs, ys, lam.cls))
    return BHypergraph(sub, tuple(lambdas))

def is_cobisaturated(H: BHypergraph, W: Iterable[str]) -> bool:
    """Literal check: for every surviving λ, each block owned inside W keeps an edge inside W."""
    W = frozenset(W)
    g = H.base
    inside = {e.id for e in g.edges if e.src in W and e.tgt in W}
    for lam in H.lambdas:
        if not any(set(g.row_map[X].edges) & inside for X in lam.X):
            continue
        for X in lam.X:
            if g.s_block(X) in W and not set(g.row_map[X].edges) & inside:
                return False
        for Y in lam.Y:
            if g.r_block(Y) in W and not set(g.col_map[Y].edges) & inside:
                return False
    return True

def cobisaturated_subhypergraphs(H: BHypergraph) -> List[BHypergraph]:
    """Full sub-hypergraphs on the complements of the bisaturated sets."""
    everything = frozenset(H.vertices)
    return [full_subhypergraph(H, everything - V) for V in enumerate_bisaturated(H)]

def support_subhypergraph(H: BHypergraph, dims: Mapping[str, int]) -> BHypergraph:
    return full_subhypergraph(H, [v for v in H.vertices if dims.get(v, 0) > 0])

def quotient_bhypergraph(H: BHypergraph, V: Iterable[str], sigma: Iterable[str] = (), theta: Iterable[str] = ()) -> BHypergraph:
    """
    Quotient B-hypergraph by an admissible triple (V, Σ, Θ).

    Vertices outside V survive, with the edges joining them; a row block X with
    s(X) ∉ V keeps its edges ranging outside V, a column block dually. Rows of
    Θ-hyperedges join S̃ and columns of Σ-hyperedges join T̃; λ ∈ Λ/V becomes TS
    when it is TS or marked, and keeps its class otherwise.
    """
    V, sigma, theta = check_triple_parts(H, V, sigma, theta)
    g = H.base
    keep_edges = [e for e in g.edges if e.src not in V and e.tgt not in V]
    kept = {e.id for e in keep_edges}
    E = make_graph([v for v in g.vertices if v not in V], keep_edges)
    C = tuple(b for b in (Block(X.id, X.owner, tuple(e for e in X.edges if e in kept)) for X in g.C if X.owner not in V) if b.edges)
    D = tuple(b for b in (Block(Y.id, Y.owner, tuple(e for e in Y.edges if e in kept)) for Y in g.D if Y.owner not in V) if b.edges)
    rows = {X.id for X in C}
    cols = {Y.id for Y in D}
    over = H.over(V)
    S = {X for X in g.S if X in rows}
    T = {Y for Y in g.T if Y in cols}
    lambdas: List[Lambda] = []
    for lam in H.lambdas:
        if lam.id not in over:
            continue
        xs = tuple(X for X in lam.X if X in rows)
        ys = tuple(Y for Y in lam.Y if Y in cols)
        if lam.id in theta:
            S.update(xs)
        if lam.id in sigma:
            T.update(ys)
        cls = TS if (lam.cls == TS or lam.id in sigma or lam.id in theta) else lam.cls
        lambdas.append(Lambda(lam.id, xs, ys, cls))
    quotient = BiSepGraph(E, C, D, frozenset(S), frozenset(T))
    log.debug("quotient by |V|=%d: %d vertices, %d hyperedges", len(V), len(E.vertices), len(lambdas))
    return BHypergraph(quotient, tuple(lambdas))
