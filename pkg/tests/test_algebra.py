import math

import pytest

from conftest import FIXTURES, hmn, line, random_element, rose
from core.algebra import (
    EDGE, GHOST, AlgElem, CohnLeavittAlgebra, Letter, algebra_of, basis_paths, check_relations,
    degree_components, edge, element, format_elem, forbidden_table, ghost, growth_count, is_normal, mul, nf,
    path_mul, restriction_hom, star, unit, valuation, vertex, vertex_path,
)
from core.config import settings
from core.errors import GuardExceededError
from core.graph import BiSepGraph, Block, Hyperedge, hypergraph_bisep, make_graph


def E(x):
    return Letter(EDGE, x)

def G(x):
    return Letter(GHOST, x)


# ---------- Forbidden words and normal forms ----------
def test_leavitt_forbidden_table():
    table = forbidden_table(rose(2))
    assert table.typeI == {("X_v", "X_v"): "Y_e1"}
    assert table.typeII == {
        ("Y_e1", "Y_e1"): "X_v", ("Y_e1", "Y_e2"): "X_v",
        ("Y_e2", "Y_e1"): "X_v", ("Y_e2", "Y_e2"): "X_v",
    }

def test_leavitt_normal_forms():
    g = rose(2)
    assert format_elem(nf(g, element(g, E("e1"), G("e1"))), g) == "v - e2*e2^*"
    assert nf(g, element(g, G("e1"), E("e1"))) == vertex("v")
    assert nf(g, element(g, G("e2"), E("e2"))) == vertex("v")
    assert nf(g, element(g, G("e1"), E("e2"))).is_zero()
    assert mul(g, ghost(g, "e1"), edge(g, "e2")).is_zero()

def test_non_composable_letters_give_zero():
    g = line(3)
    assert element(g, E("e2"), E("e1")).is_zero()
    assert mul(g, edge(g, "e2"), edge(g, "e1")).is_zero()
    assert mul(g, vertex("v1"), vertex("v2")).is_zero()

def test_path_concatenation():
    g = line(3)
    alg = algebra_of(g)
    e1, e2 = alg.path([E("e1")]), alg.path([E("e2")])
    assert path_mul(g, e1, e2) == alg.path([E("e1"), E("e2")])
    assert path_mul(g, e2, e1) is None
    assert path_mul(g, vertex_path("v1"), e1) == e1
    assert path_mul(g, e1, vertex_path("v2")) == e1
    assert path_mul(g, e1, vertex_path("v1")) is None

def test_unit_acts_as_identity(any_graph, rng):
    g = any_graph
    for _ in range(20):
        a = nf(g, random_element(g, rng))
        assert mul(g, unit(g), a) == a
        assert mul(g, a, unit(g)) == a

def test_rewrite_guard(monkeypatch):
    g = rose(2)
    monkeypatch.setattr(settings, "MAX_REWRITES", 1)
    alg = CohnLeavittAlgebra(g)
    with pytest.raises(GuardExceededError):
        alg.nf(element(g, E("e1"), G("e1"), E("e1")))


# ---------- Relations and confluence ----------
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_relations_reduce_to_zero(name):
    assert check_relations(FIXTURES[name]()) is None

@pytest.mark.parametrize("name", ["rose2_ck", "h22", "mixed_ck", "rose2_weighted"])
def test_normal_form_is_associative(name, rng):
    g = FIXTURES[name]()
    for _ in range(1000):
        a, b, c = (random_element(g, rng) for _ in range(3))
        assert mul(g, mul(g, a, b), c) == mul(g, a, mul(g, b, c))

def test_normal_form_is_idempotent(any_graph, rng):
    g = any_graph
    for _ in range(50):
        a = nf(g, random_element(g, rng, max_len=4))
        assert nf(g, a) == a
        assert all(is_normal(g, p) for p in a.paths())


# ---------- Basis and growth ----------
@pytest.mark.parametrize("n", [2, 3, 4])
def test_line_graph_basis_is_matrix_units(n):
    assert len(basis_paths(line(n), 10)) == n * n

def test_line_basis_listing():
    assert [str(p) for p in basis_paths(line(2), 3)] == ["v1", "v2", "e1", "e1^*"]

def test_basis_paths_are_normal(any_graph):
    g = any_graph
    paths = basis_paths(g, 3)
    assert all(is_normal(g, p) for p in paths)
    assert len(paths) == growth_count(g, 3)

def test_loop_growth_is_linear():
    g = rose(1)
    assert [growth_count(g, n) for n in range(13)] == [2 * n + 1 for n in range(13)]

def test_rose_growth_is_exponential():
    g = rose(2)
    assert growth_count(g, 12) / growth_count(g, 6) > 2

def test_negative_length_rejected():
    with pytest.raises(ValueError):
        basis_paths(rose(1), -1)


# ---------- Involution, grading, valuation ----------
def test_star_is_an_anti_involution(any_graph, rng):
    g = any_graph
    for _ in range(30):
        a, b = random_element(g, rng), random_element(g, rng)
        assert star(star(a)) == a
        assert nf(g, star(mul(g, a, b))) == mul(g, star(b), star(a))

def test_degree_components():
    g = rose(2)
    a = element(g, E("e1"), E("e2")) + element(g, G("e1")) + vertex("v")
    parts = degree_components(a)
    assert sorted(parts) == [-1, 0, 2]
    assert format_elem(parts[2], g) == "e1*e2"

def test_valuation_basics():
    H = hmn(2, 2)
    g = H.base
    assert valuation(g, AlgElem()) == -math.inf
    assert valuation(g, vertex("v")) == 0
    assert valuation(g, element(g, E("h_1_1"), G("h_1_1"))) == 2

def _free_rose() -> BiSepGraph:
    Eg = make_graph(["v"], [("e1", "v", "v"), ("e2", "v", "v")])
    return BiSepGraph(Eg, (Block("X", "v", ("e1", "e2")),), (Block("Y1", "v", ("e1",)), Block("Y2", "v", ("e2",))))

@pytest.mark.parametrize("g", [hmn(2, 2).base, hmn(2, 3).base, _free_rose()], ids=["h22", "h23", "free"])
def test_valuation_is_additive_on_lv_graphs(g, rng):
    paths = basis_paths(g, 3)
    for _ in range(500):
        a = AlgElem({p: rng.choice([-3, -2, -1, 1, 2, 3]) for p in rng.sample(paths, 2)})
        b = AlgElem({p: rng.choice([-3, -2, -1, 1, 2, 3]) for p in rng.sample(paths, 2)})
        assert valuation(g, mul(g, a, b)) == valuation(g, a) + valuation(g, b)

def test_valuation_fails_without_lv():
    g = rose(2)
    a, b = ghost(g, "e1"), edge(g, "e2")
    assert valuation(g, mul(g, a, b)) < valuation(g, a) + valuation(g, b)


# ---------- Restriction ----------
def test_restriction_kills_outside_vertices():
    H = hypergraph_bisep(["u", "w"], [Hyperedge("h", ("u",), ("w",)), Hyperedge("k", ("w",), ("w",))])
    g = H.base
    a = vertex("u") + element(g, E("k_1_1"), G("k_1_1")) + edge(g, "h_1_1")
    sub, image = restriction_hom(H, {"w"}, a)
    assert sub.vertices == ("w",)
    assert image == vertex("w")
    assert algebra_of(sub.base).is_normal(next(iter(image.paths())))
