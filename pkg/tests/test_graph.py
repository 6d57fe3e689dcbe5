import pytest

from conftest import FIXTURES, a_differs, hmn, hypergraph_fixtures, line, rose, two_points
from core.config import settings
from core.errors import ConstructionError, GuardExceededError, InvalidTripleError
from core.graph import (
    FIN_S, T_FIN, TS, BHypergraph, BiSepGraph, Block, Hyperedge, Lambda, as_hypergraph, bisaturated_closure, ck_bisep,
    cobisaturated_subhypergraphs, connected_components, default_lambdas, enumerate_bisaturated,
    full_subhypergraph, hypergraph_bisep, is_bisaturated, is_cobisaturated, is_connected, lambda_partition,
    make_graph, one_sided_closed, quotient_bhypergraph, sigma_theta_saturation, standard_bisep, validate,
    weighted_bisep,
)


HYPERGRAPHS = hypergraph_fixtures()


def kinds(violations):
    return {v.kind for v in violations}

def random_vertex_set(H, rng):
    return frozenset(v for v in H.vertices if rng.random() < 0.4)


# ---------- Validation ----------
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_corpus_is_valid(name):
    assert validate(FIXTURES[name]()) == []

def test_fixture_corpus_size():
    assert len(FIXTURES) >= 20

def test_double_intersection_is_reported():
    E = make_graph(["u", "w"], [("e", "u", "w"), ("f", "u", "w")])
    g = BiSepGraph(E, (Block("X", "u", ("e", "f")),), (Block("Y", "w", ("e", "f")),))
    bad = validate(g)
    assert kinds(bad) == {"intersection"}
    assert bad[0].message == "|X∩Y|=2"

def test_missing_edge_breaks_partition():
    E = make_graph(["v"], [("e1", "v", "v"), ("e2", "v", "v")])
    g = BiSepGraph(E, (Block("X", "v", ("e1",)),), (Block("Y1", "v", ("e1",)), Block("Y2", "v", ("e2",))))
    bad = validate(g)
    assert kinds(bad) == {"not-partition"}
    assert "e2" in bad[0].message

def test_wrong_owner_and_dangling():
    E = make_graph(["u", "w"], [("e", "u", "w")])
    g = BiSepGraph(E, (Block("X", "w", ("e",)),), (Block("Y", "w", ("e", "ghost")),), frozenset({"Z"}))
    assert {"wrong-owner", "dangling"} <= kinds(validate(g))

def test_edge_with_unknown_vertex():
    E = make_graph(["v"], [("e", "v", "nowhere")])
    assert kinds(validate(BiSepGraph(E, (), ()))) == {"dangling"}


# ---------- Constructors ----------
def test_ck_rejects_sink_in_s():
    E = make_graph(["u", "w"], [("e", "u", "w")])
    with pytest.raises(ConstructionError, match="sink"):
        ck_bisep(E, ["w"])

def test_standard_needs_simple_graph():
    E = make_graph(["u", "w"], [("e", "u", "w"), ("f", "u", "w")])
    with pytest.raises(ConstructionError):
        standard_bisep(E)

def test_ck_blocks():
    g = rose(2)
    assert [X.id for X in g.C] == ["X_v"]
    assert [Y.id for Y in g.D] == ["Y_e1", "Y_e2"]
    assert g.S == {"X_v"}
    assert g.T == {"Y_e1", "Y_e2"}

def test_weighted_copies_edges():
    g = weighted_bisep(make_graph(["v"], [("e", "v", "v")]), {"e": 2})
    assert [e.id for e in g.edges] == ["e_1", "e_2"]
    assert [(X.id, X.edges) for X in g.C] == [("X_v_1", ("e_1",)), ("X_v_2", ("e_2",))]
    assert [(Y.id, Y.edges) for Y in g.D] == [("Y_e", ("e_1", "e_2"))]

@pytest.mark.parametrize("w", [0, -1, 1.5])
def test_weighted_rejects_bad_weight(w):
    with pytest.raises(ConstructionError):
        weighted_bisep(make_graph(["v"], [("e", "v", "v")]), {"e": w})

def test_hypergraph_naming():
    H = hmn(2, 3)
    g = H.base
    assert [X.id for X in g.C] == ["X_h_1", "X_h_2"]
    assert [Y.id for Y in g.D] == ["Y_h_1", "Y_h_2", "Y_h_3"]
    assert g.meet("X_h_2", "Y_h_3") == "h_2_3"
    assert H.lambdas == (Lambda("h", ("X_h_1", "X_h_2"), ("Y_h_1", "Y_h_2", "Y_h_3"), TS),)
    assert as_hypergraph(g, H.lambdas)[1] == []

def test_hypergraph_rejects_empty_family():
    with pytest.raises(ConstructionError):
        hypergraph_bisep(["v"], [Hyperedge("h", (), ("v",))])


# ---------- Components and hyperedges ----------
def test_components():
    assert len(connected_components(two_points())) == 2
    assert not is_connected(two_points())
    assert is_connected(line(3))

def test_lambda_partition_of_leavitt():
    part = lambda_partition(rose(2))
    assert part.classes == [(("X_v",), ("Y_e1", "Y_e2"))]
    assert part.S2 == () and part.T2 == ()
    assert part.tame

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_row_and_column_classes_pair_off(name):
    g = FIXTURES[name]()
    classes = lambda_partition(g).classes

    def meets(xs, ys):
        return any(g.meet(X, Y) is not None for X in xs for Y in ys)

    for i, (xs, _) in enumerate(classes):
        assert {j for j, (_, ys) in enumerate(classes) if meets(xs, ys)} == {i}
    for j, (_, ys) in enumerate(classes):
        assert {i for i, (xs, _) in enumerate(classes) if meets(xs, ys)} == {j}
    rows = [X for xs, _ in classes for X in xs]
    assert len(rows) == len(set(rows))
    assert set(rows) | set(lambda_partition(g).S2) == set(g.S)

def test_default_lambda_classes():
    lams, bad = default_lambdas(rose(2, relations=False))
    assert bad == []
    assert lams == [Lambda("lam1", ("X_v",), ("Y_e1", "Y_e2"), T_FIN)]
    lams, _ = default_lambdas(a_differs())
    assert [lam.cls for lam in lams] == [FIN_S]

def test_mixed_component_is_not_a_hypergraph():
    E = make_graph(["u", "v", "w"], [("e", "u", "w"), ("f", "v", "w")])
    g = BiSepGraph(
        E,
        (Block("X_u", "u", ("e",)), Block("X_v", "v", ("f",))),
        (Block("Y_w", "w", ("e", "f")),),
        frozenset({"X_u"}),
        frozenset({"Y_w"}),
    )
    assert validate(g) == []
    _, bad = as_hypergraph(g)
    assert kinds(bad) == {"not-hypergraph"}


# ---------- Bisaturation ----------
def test_bisaturated_sets_of_single_vertex():
    assert enumerate_bisaturated(hmn(2, 2)) == [frozenset(), frozenset({"v"})]

def test_closure_runs_both_ways():
    H = hypergraph_bisep(["u", "w"], [Hyperedge("h", ("u",), ("w", "w"))])
    assert bisaturated_closure(H, {"u"}) == {"u", "w"}
    assert bisaturated_closure(H, {"w"}) == {"u", "w"}
    assert not is_bisaturated(H, {"u"})

def test_one_sided_hyperedges_only_fire_in_sigma_theta_saturation():
    H, bad = as_hypergraph(a_differs())
    assert bad == []
    assert bisaturated_closure(H, {"w"}) == {"w"}
    assert sigma_theta_saturation(H, {"w"}) == {"u", "w"}
    assert sigma_theta_saturation(H, {"u"}) == {"u"}
    assert sigma_theta_saturation(H, {"u"}, sigma=["lam1"]) == {"u", "w"}
    assert not one_sided_closed(H, {"w"})
    assert one_sided_closed(H, {"u"})

@pytest.mark.parametrize("name", sorted(HYPERGRAPHS))
def test_closure_is_a_closure_operator(name, rng):
    H = HYPERGRAPHS[name]
    for _ in range(30):
        A = random_vertex_set(H, rng)
        B = A | random_vertex_set(H, rng)
        cl = bisaturated_closure(H, A)
        assert A <= cl
        assert cl <= bisaturated_closure(H, B)
        assert bisaturated_closure(H, cl) == cl
        assert is_bisaturated(H, cl)

@pytest.mark.parametrize("name", sorted(HYPERGRAPHS))
def test_closed_sets_meet_in_closed_sets(name, rng):
    H = HYPERGRAPHS[name]
    for _ in range(30):
        A = bisaturated_closure(H, random_vertex_set(H, rng))
        B = bisaturated_closure(H, random_vertex_set(H, rng))
        assert is_bisaturated(H, A & B)

def test_subset_guard(monkeypatch):
    monkeypatch.setattr(settings, "MAX_SUBSETS", 2)
    with pytest.raises(GuardExceededError):
        enumerate_bisaturated(BHypergraph(line(3), ()))


# ---------- Sub- and quotient hypergraphs ----------
def test_cobisaturated_pieces():
    subs = cobisaturated_subhypergraphs(hmn(1, 2))
    assert [sub.vertices for sub in subs] == [("v",), ()]
    assert subs[1].lambdas == ()

def test_full_subhypergraph_cuts_blocks():
    H = hypergraph_bisep(["u", "w"], [Hyperedge("h", ("u", "w"), ("w",))])
    sub = full_subhypergraph(H, {"w"})
    assert [e.id for e in sub.base.edges] == ["h_2_1"]
    assert sub.lambdas == (Lambda("h", ("X_h_2",), ("Y_h_1",), TS),)
    assert is_cobisaturated(H, {"u", "w"})

def test_quotient_marks_theta_rows():
    H, _ = as_hypergraph(rose(2, relations=False))
    Q = quotient_bhypergraph(H, (), theta=["lam1"])
    assert Q.base.S == {"X_v"}
    assert [lam.cls for lam in Q.lambdas] == [TS]
    assert quotient_bhypergraph(H, {"v"}).vertices == ()

@pytest.mark.parametrize("name", sorted(HYPERGRAPHS))
def test_quotient_by_bottom_is_the_same_hypergraph(name):
    H = HYPERGRAPHS[name]
    Q = quotient_bhypergraph(H, ())
    assert Q.vertices == H.vertices
    assert [(e.id, e.src, e.tgt) for e in Q.base.edges] == [(e.id, e.src, e.tgt) for e in H.base.edges]
    assert tuple(Q.base.C) == tuple(H.base.C) and tuple(Q.base.D) == tuple(H.base.D)
    assert Q.base.S == H.base.S and Q.base.T == H.base.T
    assert Q.lambdas == H.lambdas

def test_quotient_rejects_inadmissible_triples():
    H, _ = as_hypergraph(a_differs())
    with pytest.raises(InvalidTripleError, match="unknown hyperedges"):
        quotient_bhypergraph(H, {"w"}, sigma=["nope"], theta=["lam1"])
    with pytest.raises(InvalidTripleError, match="unknown vertices"):
        quotient_bhypergraph(H, {"x"})
    with pytest.raises(InvalidTripleError, match="one-sided"):
        quotient_bhypergraph(H, {"w"})
    with pytest.raises(InvalidTripleError, match="Θ must lie"):
        quotient_bhypergraph(H, (), theta=["lam1"])
    with pytest.raises(InvalidTripleError, match="Σ must lie"):
        quotient_bhypergraph(H, {"u"}, sigma=["lam1"])
    spread = hypergraph_bisep(["u", "w"], [Hyperedge("h", ("u",), ("w", "w"))])
    with pytest.raises(InvalidTripleError, match="not bisaturated"):
        quotient_bhypergraph(spread, {"u"})
