import random
from typing import Callable, Dict, List

import pytest

from core.algebra import VERTEX, AlgElem, GenPath, Letter, algebra_of
from core.graph import (
    BHypergraph, BiSepGraph, Block, Hyperedge, as_hypergraph, ck_bisep, hypergraph_bisep, make_graph, separated_bisep,
    standard_bisep, trivial_bisep, weighted_bisep, weighted_separated_bisep,
)


# ---------- Builders ----------
def rose(n: int, relations: bool = True) -> BiSepGraph:
    """n loops at v with the Cuntz-Krieger bi-separation; S = ∅ when relations is False."""
    E = make_graph(["v"], [(f"e{i}", "v", "v") for i in range(1, n + 1)])
    return ck_bisep(E, ["v"] if relations else [])

def line(n: int) -> BiSepGraph:
    """v1 -> v2 -> ... -> vn with the standard bi-separation."""
    E = make_graph([f"v{i}" for i in range(1, n + 1)], [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)])
    return standard_bisep(E)

def line_ck(n: int) -> BiSepGraph:
    vs = [f"v{i}" for i in range(1, n + 1)]
    E = make_graph(vs, [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)])
    return ck_bisep(E, vs[:-1])

def hmn(m: int, n: int) -> BHypergraph:
    """One vertex, one hyperedge with m sources and n ranges."""
    return hypergraph_bisep(["v"], [Hyperedge("h", ("v",) * m, ("v",) * n)])

def a_differs() -> BiSepGraph:
    """Two parallel edges u -> w in one S row block, discrete columns outside T."""
    E = make_graph(["u", "w"], [("e", "u", "w"), ("f", "u", "w")])
    return BiSepGraph(
        E,
        (Block("X", "u", ("e", "f")),),
        (Block("Y_e", "w", ("e",)), Block("Y_f", "w", ("f",))),
        frozenset({"X"}),
        frozenset(),
    )

def two_points() -> BiSepGraph:
    return ck_bisep(make_graph(["u", "w"], []), [])


def _fixtures() -> Dict[str, Callable[[], BiSepGraph]]:
    cycle = make_graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])
    mixed = make_graph(["v", "w"], [("a", "v", "v"), ("b", "v", "w"), ("c", "w", "v")])
    rose2 = make_graph(["v"], [("e1", "v", "v"), ("e2", "v", "v")])
    rose3 = make_graph(["v"], [("e1", "v", "v"), ("e2", "v", "v"), ("e3", "v", "v")])
    return {
        # Cuntz-Krieger
        "loop_ck": lambda: rose(1),
        "rose2_ck": lambda: rose(2),
        "rose3_ck": lambda: rose(3),
        "rose2_free": lambda: rose(2, relations=False),
        "line3_ck": lambda: line_ck(3),
        "mixed_ck": lambda: ck_bisep(mixed, ["v", "w"]),
        "mixed_ck_half": lambda: ck_bisep(mixed, ["w"]),
        # standard
        "line2": lambda: line(2),
        "line3": lambda: line(3),
        "cycle_standard": lambda: standard_bisep(cycle),
        "mixed_standard": lambda: standard_bisep(mixed),
        # trivial
        "loop_trivial": lambda: trivial_bisep(make_graph(["v"], [("e", "v", "v")])),
        "rose2_trivial": lambda: trivial_bisep(rose2),
        # separated
        "rose2_separated": lambda: separated_bisep(rose2, {"X1": ["e1"], "X2": ["e2"]}),
        "rose3_separated": lambda: separated_bisep(rose3, {"X1": ["e1", "e2"], "X2": ["e3"]}, S=["X1"]),
        "a_differs": a_differs,
        # weighted
        "loop_weighted2": lambda: weighted_bisep(make_graph(["v"], [("e", "v", "v")]), {"e": 2}),
        "rose2_weighted": lambda: weighted_bisep(rose2, {"e1": 1, "e2": 2}),
        "rose2_weighted_separated": lambda: weighted_separated_bisep(rose2, {"X1": ["e1"], "X2": ["e2"]}, {"e1": 2, "e2": 1}),
        # hypergraphs
        "h11": lambda: hmn(1, 1).base,
        "h12": lambda: hmn(1, 2).base,
        "h22": lambda: hmn(2, 2).base,
        "h23": lambda: hmn(2, 3).base,
    }


FIXTURES = _fixtures()


def hypergraph_fixtures() -> Dict[str, BHypergraph]:
    """The fixtures that are B-hypergraphs under their default hyperedges."""
    out = {}
    for name, build in sorted(FIXTURES.items()):
        H, bad = as_hypergraph(build())
        if not bad:
            out[name] = H
    return out


@pytest.fixture(params=sorted(FIXTURES))
def any_graph(request) -> BiSepGraph:
    return FIXTURES[request.param]()


# ---------- Random elements ----------
def random_word(g: BiSepGraph, rng: random.Random, max_len: int) -> GenPath:
    """A composable word in edges and ghosts, not necessarily normal; a vertex when the walk stops at once."""
    alg = algebra_of(g)
    v = rng.choice(g.vertices)
    length = rng.randint(0, max_len)
    letters: List[Letter] = []
    cur = v
    for _ in range(length):
        options = [x for x in alg.letters if alg.ends(x)[0] == cur]
        if not options:
            break
        x = rng.choice(options)
        letters.append(x)
        cur = alg.ends(x)[1]
    if not letters:
        return alg.path([Letter(VERTEX, v)])
    return alg.path(letters)

def random_element(g: BiSepGraph, rng: random.Random, max_len: int = 3, terms: int = 3) -> AlgElem:
    out = AlgElem()
    for _ in range(rng.randint(1, terms)):
        out = out + AlgElem.of(random_word(g, rng, max_len), rng.randint(-3, 3))
    return out


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
