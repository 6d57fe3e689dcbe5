import itertools

import pytest

from conftest import a_differs, hmn, hypergraph_fixtures, line_ck, rose
from core.errors import InvalidTripleError
from core.graph import Hyperedge, as_hypergraph, hypergraph_bisep
from core.hypermonoid import (
    Distinct, Equal, Unknown, at_join, at_leq, at_meet, bottom, check_triple, enumerate_admissible_triples,
    ideal_generators, is_admissible, is_monoid_simple, monoid_equal, order_ideal_contains, pi_hom,
    presentation, probe_confluence, psi, top, triple,
)


def hyper(g):
    H, bad = as_hypergraph(g)
    assert bad == []
    return H

def spread():
    return hypergraph_bisep(["u", "w"], [Hyperedge("h", ("u",), ("w", "w"))])


LATTICES = {
    "rose2_free": lambda: hyper(rose(2, relations=False)),
    "leavitt": lambda: hyper(rose(2)),
    "a_differs": lambda: hyper(a_differs()),
    "h22": lambda: hmn(2, 2),
    "spread": spread,
}
HYPERGRAPHS = hypergraph_fixtures()


# ---------- Presentation and word problem ----------
def test_presentation_with_tfin_hyperedge():
    pres = presentation(hyper(rose(2, relations=False)))
    assert pres.generators == ("v", "q_lam1")
    (rel,) = pres.relations
    assert pres.format(rel.left) == "v"
    assert pres.format(rel.right) == "2v + q_lam1"

def test_presentation_with_fins_hyperedge():
    pres = presentation(hyper(a_differs()))
    assert pres.generators == ("u", "w", "p_lam1")
    (rel,) = pres.relations
    assert (pres.format(rel.left), pres.format(rel.right)) == ("2w", "u + p_lam1")

def test_leavitt_monoid_equalities():
    pres = presentation(hyper(rose(2)))
    v = pres.elt({"v": 1})
    res = monoid_equal(pres, v, pres.elt({"v": 2}))
    assert isinstance(res, Equal)
    assert res.trace == ((1,), (2,))
    res = monoid_equal(pres, pres.elt({"v": 2}), pres.elt({"v": 5}))
    assert isinstance(res, Equal)
    assert res.trace[0] == (2,) and res.trace[-1] == (5,)

def test_nonzero_vertex_class_is_exhausted():
    pres = presentation(hyper(rose(2)))
    res = monoid_equal(pres, pres.elt({"v": 1}), pres.zero())
    assert res == Distinct(None, exhausted=True)

def test_separating_functional():
    pres = presentation(hmn(1, 1))
    res = monoid_equal(pres, pres.elt({"v": 1}), pres.elt({"v": 2}))
    assert isinstance(res, Distinct)
    assert res.certificate == (1,)

def test_shallow_search_is_unknown():
    pres = presentation(hyper(rose(2)))
    assert monoid_equal(pres, pres.elt({"v": 2}), pres.elt({"v": 5}), depth=1) == Unknown(1)
    with pytest.raises(ValueError):
        monoid_equal(pres, pres.zero(), pres.zero(), depth=-1)

def test_critical_pairs_rejoin():
    H = hypergraph_bisep(["v"], [Hyperedge("h", ("v",), ("v", "v")), Hyperedge("k", ("v",), ("v", "v", "v"))])
    pres = presentation(H)
    probes = probe_confluence(pres, pres.elt({"v": 1}))
    assert [(a, b) for a, b, _ in probes] == [("h", "k")]
    assert isinstance(probes[0][2], Equal)


# ---------- Admissible triples ----------
def test_triples_of_tfin_rose():
    H = hyper(rose(2, relations=False))
    assert enumerate_admissible_triples(H) == [
        triple(), triple(Theta=["lam1"]), triple(V=["v"]),
    ]

def test_triples_of_fins_pair():
    H = hyper(a_differs())
    assert enumerate_admissible_triples(H) == [
        triple(), triple(Sigma=["lam1"]), triple(V=["u"]), triple(V=["u", "w"]),
    ]

def test_invalid_triples():
    H = hyper(rose(2, relations=False))
    with pytest.raises(InvalidTripleError):
        check_triple(H, triple(V=["v"], Theta=["lam1"]))
    with pytest.raises(InvalidTripleError):
        check_triple(H, triple(V=["nowhere"]))
    assert not is_admissible(hyper(a_differs()), triple(V=["w"]))

def test_join_uses_one_sided_saturation():
    H = hyper(a_differs())
    assert at_join(H, triple(Sigma=["lam1"]), triple(V=["u"])) == triple(V=["u", "w"])
    assert not at_leq(H, triple(Sigma=["lam1"]), triple(V=["u"]))

def test_absorbed_markers_compare_below():
    H = hyper(rose(2, relations=False))
    assert at_leq(H, triple(Theta=["lam1"]), triple(V=["v"]))
    assert at_meet(H, triple(Theta=["lam1"]), triple(V=["v"])) == triple(Theta=["lam1"])
    assert at_join(H, triple(Theta=["lam1"]), triple(V=["v"])) == triple(V=["v"])

@pytest.mark.parametrize("name", sorted(LATTICES))
def test_lattice_laws(name):
    H = LATTICES[name]()
    ts = enumerate_admissible_triples(H)
    assert len(ts) <= 64
    leq = lambda a, b: at_leq(H, a, b)  # noqa: E731
    for a in ts:
        assert leq(a, a)
        assert leq(bottom(H), a) and leq(a, top(H))
    for a, b in itertools.product(ts, repeat=2):
        if leq(a, b) and leq(b, a):
            assert a == b
        j, m = at_join(H, a, b), at_meet(H, a, b)
        assert is_admissible(H, j) and is_admissible(H, m)
        assert leq(a, j) and leq(b, j)
        assert leq(m, a) and leq(m, b)
        for c in ts:
            if leq(a, c) and leq(b, c):
                assert leq(j, c)
            if leq(c, a) and leq(c, b):
                assert leq(c, m)
            if leq(a, b) and leq(b, c):
                assert leq(a, c)
        assert at_join(H, a, at_meet(H, a, b)) == a
        assert at_meet(H, a, at_join(H, a, b)) == a

@pytest.mark.parametrize("name", sorted(LATTICES))
def test_psi_recovers_every_triple(name):
    H = LATTICES[name]()
    for t in enumerate_admissible_triples(H):
        assert psi(H, t, depth=12) == t


# ---------- π and order-ideals ----------
def test_pi_images():
    H = hyper(a_differs())
    pi = pi_hom(H, triple(V=["u"]))
    assert pi.quotient.vertices == ("w",)
    assert {g: pi.target.format(x) for g, x in pi.images.items()} == {"u": "0", "w": "w", "p_lam1": "2w"}
    assert pi.apply(presentation(H).elt({"u": 1, "p_lam1": 1})) == pi.target.elt({"w": 2})

@pytest.mark.parametrize("name", sorted(HYPERGRAPHS))
def test_pi_respects_every_relation(name):
    H = HYPERGRAPHS[name]
    src = presentation(H)
    for t in enumerate_admissible_triples(H):
        pi = pi_hom(H, t)
        for rel in src.relations:
            res = monoid_equal(pi.target, pi.apply(rel.left), pi.apply(rel.right), depth=8)
            assert isinstance(res, Equal), (t, rel.lam)

def test_order_ideal_membership():
    H = hyper(rose(2, relations=False))
    pres = presentation(H)
    t = triple(Theta=["lam1"])
    assert order_ideal_contains(H, t, pres.elt({"q_lam1": 3}))
    assert order_ideal_contains(H, t, pres.elt({"v": 1})) is False
    assert ideal_generators(H, t) == ["q_lam1"]
    assert ideal_generators(H, triple(V=["v"])) == ["v"]


# ---------- Simplicity ----------
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_leavitt_roses_are_simple(n):
    assert is_monoid_simple(hyper(rose(n)))
    assert not is_monoid_simple(hyper(rose(n, relations=False)))

def test_line_leavitt_is_simple():
    assert is_monoid_simple(hyper(line_ck(2)))

def test_unmarked_columns_are_not_simple():
    assert not is_monoid_simple(hyper(a_differs()))
