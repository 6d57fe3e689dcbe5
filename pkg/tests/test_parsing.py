import json

import pytest

from conftest import a_differs, hmn, line, random_element, rose
from core.algebra import EDGE, GHOST, Letter, element, format_elem, nf, unit
from core.errors import ExprSyntaxError, GraphFormatError, RepresentationError, UnknownIdentifierError
from core.graph import as_hypergraph
from core.hypermonoid import presentation, triple
from core.ibn import build_representation
from core.parsing import (
    graph_to_json, load_graph_file, load_valid_graph, parse_dims, parse_expr, parse_graph, parse_monoid_elt,
    parse_rep, parse_triple, rep_to_json, tokenize,
)


ROSE2 = json.dumps({
    "version": 1,
    "vertices": ["v"],
    "edges": [{"id": "e1", "src": "v", "tgt": "v"}, {"id": "e2", "src": "v", "tgt": "v"}],
})


# ---------- Graph documents ----------
def test_defaults_give_the_standard_blocks():
    doc = parse_graph(ROSE2)
    g = doc.g
    assert [(X.id, X.edges) for X in g.C] == [("X1", ("e1", "e2"))]
    assert [(Y.id, Y.edges) for Y in g.D] == [("Y1", ("e1",)), ("Y2", ("e2",))]
    assert g.S == {"X1"} and g.T == {"Y1", "Y2"}
    assert doc.defaulted == ("C", "D", "S", "T", "lambdas")
    assert doc.violations() == []

def test_given_blocks_leave_sets_empty():
    data = json.loads(ROSE2)
    data["C"] = {"X": ["e1", "e2"]}
    data["D"] = {"Y1": ["e1"], "Y2": ["e2"]}
    g = parse_graph(json.dumps(data)).g
    assert g.S == frozenset() and g.T == frozenset()

def test_dangling_reference_has_position():
    text = '{\n  "version": 1,\n  "vertices": ["v"],\n  "edges": [{"id": "e", "src": "v", "tgt": "w"}]\n}'
    with pytest.raises(GraphFormatError) as err:
        parse_graph(text)
    assert err.value.message == "edge 'e' references unknown vertex 'w'"
    assert err.value.position == (4, 44)

def test_document_errors():
    with pytest.raises(GraphFormatError, match="invalid JSON"):
        parse_graph('{"version": 1,')
    with pytest.raises(GraphFormatError, match="missing 'version'"):
        parse_graph('{"vertices": []}')
    with pytest.raises(GraphFormatError, match="unsupported version"):
        parse_graph('{"version": 2}')
    with pytest.raises(GraphFormatError, match="unknown key 'colours'"):
        parse_graph('{"version": 1, "colours": {}}')
    with pytest.raises(GraphFormatError, match="duplicate vertex id 'v'"):
        parse_graph('{"version": 1, "vertices": ["v", "v"]}')

def test_duplicate_points_at_second_occurrence():
    with pytest.raises(GraphFormatError) as err:
        parse_graph('{"version": 1, "vertices": ["v", "v"]}')
    assert err.value.position == (1, 34)

def test_block_errors():
    data = json.loads(ROSE2)
    data["C"] = {"X": []}
    with pytest.raises(GraphFormatError, match="block 'X' is empty"):
        parse_graph(json.dumps(data))
    data["C"] = {"X": ["e1", "e3"]}
    with pytest.raises(GraphFormatError, match="unknown edge 'e3'"):
        parse_graph(json.dumps(data))

def test_lambda_class_is_checked():
    data = json.loads(ROSE2)
    data["lambdas"] = {"lam": {"X": ["X1"], "Y": ["Y1", "Y2"], "class": "FinSS"}}
    with pytest.raises(GraphFormatError, match="did you mean: FinS"):
        parse_graph(json.dumps(data))

def test_graph_json_reparses():
    H = hmn(2, 3)
    data = graph_to_json(H.base, H.lambdas)
    doc = parse_graph(json.dumps(data))
    assert graph_to_json(doc.g, doc.lambdas) == data
    assert doc.defaulted == ()
    H2, bad = doc.hypergraph()
    assert bad == []
    assert [(lam.id, lam.cls) for lam in H2.lambdas] == [("h", "TS")]

def test_files(tmp_path):
    path = tmp_path / "rose.json"
    path.write_text(ROSE2, encoding="utf-8")
    assert load_graph_file(str(path)).source == str(path)
    with pytest.raises(GraphFormatError, match="file not found"):
        load_graph_file(str(tmp_path / "missing.json"))
    bad = json.loads(ROSE2)
    bad["D"] = {"Y": ["e1", "e2"]}
    path.write_text(json.dumps(bad), encoding="utf-8")
    with pytest.raises(GraphFormatError, match="run 'validate'"):
        load_valid_graph(str(path))


# ---------- Expressions ----------
def test_expression_terms():
    g = rose(2)
    a = parse_expr("2*e1*e2^* - 1/3*v", g)
    assert len(a) == 2
    assert format_elem(a, g) == "-1/3*v + 2*e1*e2^*"

def test_prime_marks_a_ghost():
    g = rose(2)
    assert parse_expr("e1'", g) == element(g, Letter(GHOST, "e1"))
    assert parse_expr("e1 * e1^*", g) == element(g, Letter(EDGE, "e1"), Letter(GHOST, "e1"))

def test_scalars_are_multiples_of_the_unit():
    g = line(3)
    assert parse_expr("0", g).is_zero()
    assert parse_expr("3", g) == 3 * unit(g)
    assert parse_expr("v1 - v1", g).is_zero()

def test_non_composable_product_is_zero():
    assert parse_expr("e2*e1", line(3)).is_zero()

def test_unknown_identifier_suggests():
    with pytest.raises(UnknownIdentifierError) as err:
        parse_expr("v + e11", rose(2))
    assert err.value.suggestions == ["e1"]
    assert err.value.position == (1, 5)
    assert "did you mean: e1?" in str(err.value)

def test_syntax_errors_carry_columns():
    g = rose(2)
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("e1 ** e2", g)
    assert err.value.column == 5
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("e1 $", g)
    assert err.value.column == 4
    with pytest.raises(ExprSyntaxError, match="end of input"):
        parse_expr("e1 +", g)
    with pytest.raises(ExprSyntaxError, match="malformed rational"):
        parse_expr("1/0*v", g)

def test_tokens():
    kinds = [t.kind for t in tokenize("2*e1^* - v")]
    assert kinds == ["num", "op", "ident", "ghost", "op", "ident", "end"]

@pytest.mark.parametrize("g", [rose(2), hmn(2, 3).base, line(3)], ids=["rose2", "h23", "line3"])
def test_printed_normal_forms_parse_back(g, rng):
    for _ in range(40):
        a = nf(g, random_element(g, rng))
        assert parse_expr(format_elem(a, g), g) == a


# ---------- Triples, dims, representations, monoid elements ----------
def test_parse_triple():
    H, _ = as_hypergraph(a_differs())
    assert parse_triple({"V": ["u"]}, H) == triple(V=["u"])
    assert parse_triple({"Sigma": ["lam1"]}, H) == triple(Sigma=["lam1"])
    with pytest.raises(UnknownIdentifierError):
        parse_triple({"Theta": ["lam2"]}, H)
    with pytest.raises(GraphFormatError):
        parse_triple(["u"], H)

def test_parse_dims():
    g = a_differs()
    assert parse_dims({"u": 2}, g) == {"u": 2, "w": 0}
    with pytest.raises(GraphFormatError):
        parse_dims({"u": -1}, g)
    with pytest.raises(GraphFormatError):
        parse_dims({"u": True}, g)
    with pytest.raises(UnknownIdentifierError):
        parse_dims({"x": 1}, g)

def test_parse_rep():
    g = hmn(2, 2).base
    rep = parse_rep({"dims": {"v": 1}, "maps": {"h_1_1": [["1"]]}, "ghosts": {"h_1_1": [["1/2"]]}}, g)
    assert rep.maps["h_1_1"][0, 0] == 1
    assert str(rep.ghosts["h_1_1"][0, 0]) == "1/2"
    with pytest.raises(RepresentationError, match="expected 1 rows"):
        parse_rep({"dims": {"v": 1}, "maps": {"h_1_1": []}}, g)
    with pytest.raises(RepresentationError, match="entries must be rationals"):
        parse_rep({"dims": {"v": 1}, "maps": {"h_1_1": [["x"]]}}, g)
    with pytest.raises(RepresentationError, match="'ghosts' must map edge ids"):
        parse_rep({"dims": {"v": 1}, "ghosts": [["1"]]}, g)

def test_rep_json():
    H = hmn(2, 2)
    data = rep_to_json(build_representation(H, {"v": 1}))
    assert data["maps"]["h_1_2"] == [["0"]]
    assert data["ghosts"]["h_2_2"] == [["1"]]
    rep = parse_rep(data, H.base)
    assert rep.maps["h_2_2"][0, 0] == 1

def test_parse_monoid_elt():
    H, _ = as_hypergraph(rose(2, relations=False))
    pres = presentation(H)
    assert parse_monoid_elt("2v + q_lam1", pres) == (2, 1)
    assert parse_monoid_elt("3*v", pres) == (3, 0)
    assert parse_monoid_elt("0", pres) == (0, 0)
    with pytest.raises(UnknownIdentifierError):
        parse_monoid_elt("v + q_lam2", pres)
    with pytest.raises(ExprSyntaxError):
        parse_monoid_elt("2 3v", pres)
