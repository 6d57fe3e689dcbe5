# core/parsing.py
"""
Text and JSON surfaces: graph documents, algebra expressions, triple, dims and
representation files.

Expression grammar:

    expr     := ['-'] term (('+' | '-') term)*
    term     := rational ['*' factors] | factors
    factors  := factor ('*' factor)*
    factor   := ident ['^*' | "'"]
    rational := int ['/' int]

A lone rational is that multiple of the unit Σv, so `0` is zero.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .algebra import EDGE, GHOST, VERTEX, AlgElem, Letter, element, unit
from .config import GRAPH_SCHEMA_VERSION
from .errors import ExprSyntaxError, GraphFormatError, RepresentationError, UnknownIdentifierError
from .graph import (
    LAMBDA_CLASSES, BHypergraph, BiSepGraph, Block, Lambda, Violation, as_hypergraph, make_graph, validate,
)
from .hypermonoid import AdmissibleTriple, HMonoidPres, MonoidElt, triple
from .ibn import QuiverRep
from .linalg import QMatrix, qmatrix
from .utils import format_rational, parse_rational, require_known, suggest

log = logging.getLogger(__name__)


# ---------- Graph documents ----------
@dataclass
class GraphDocument:
    g: BiSepGraph
    lambdas: Optional[List[Lambda]] = None      # None: computed on demand
    defaulted: Tuple[str, ...] = ()             # top-level keys filled in by default
    source: str = "<string>"

    def violations(self) -> List[Violation]:
        return validate(self.g)

    def hypergraph(self) -> Tuple[BHypergraph, List[Violation]]:
        return as_hypergraph(self.g, self.lambdas)


def _locate(text: str, token: str, nth: int = 1) -> Optional[Tuple[int, int]]:
    """Line and column of the nth quoted occurrence of token."""
    needle = json.dumps(token)
    at = -1
    for _ in range(nth):
        at = text.find(needle, at + 1)
        if at < 0:
            return None
    line = text.count("\n", 0, at) + 1
    col = at - (text.rfind("\n", 0, at) + 1) + 1
    return line, col

def _hint(name: str, known: Iterable[str]) -> str:
    close = suggest(name, known)
    return f" (did you mean: {', '.join(close)}?)" if close else ""


class _Reader:
    """Schema checks against one document; every error carries a position."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, token: Optional[str] = None, nth: int = 1) -> GraphFormatError:
        return GraphFormatError(message, _locate(self.text, token, nth) if token is not None else None)

    def strings(self, value: Any, where: str) -> List[str]:
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            raise self.fail(f"'{where}' must be a list of strings", where)
        return value

    def unique(self, ids: Sequence[str], kind: str) -> None:
        seen = set()
        for i in ids:
            if i in seen:
                raise self.fail(f"duplicate {kind} id '{i}'", i, nth=2)
            seen.add(i)

    def known(self, name: str, pool: Mapping[str, Any], kind: str, context: str) -> None:
        if name not in pool:
            raise self.fail(f"{context} references unknown {kind} '{name}'{_hint(name, pool)}", name)


def parse_graph(text: str, source: str = "<string>") -> GraphDocument:
    """
    Read a graph document.

    C missing: one full row block per non-sink, named X1, X2, ... (S = all of
    them unless S is given). D missing: one column block per edge, named Y1, Y2,
    ... (T = all of them unless T is given). A missing S or T next to a given C
    or D is empty.

    Raises:
        GraphFormatError: malformed JSON, schema violation, dangling reference or duplicate id
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"invalid JSON: {e.msg}", (e.lineno, e.colno))
    rd = _Reader(text)
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object", (1, 1))
    if "version" not in doc:
        raise GraphFormatError("missing 'version'", (1, 1))
    if doc["version"] != GRAPH_SCHEMA_VERSION:
        raise rd.fail(f"unsupported version {doc['version']!r}, expected {GRAPH_SCHEMA_VERSION}", "version")
    unknown_keys = set(doc) - {"version", "vertices", "edges", "C", "D", "S", "T", "lambdas"}
    if unknown_keys:
        key = sorted(unknown_keys)[0]
        raise rd.fail(f"unknown key '{key}'", key)

    vertices = rd.strings(doc.get("vertices", []), "vertices")
    rd.unique(vertices, "vertex")
    vset = {v: None for v in vertices}

    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise rd.fail("'edges' must be a list", "edges")
    edges: List[Tuple[str, str, str]] = []
    for n, e in enumerate(raw_edges):
        if not isinstance(e, dict) or not all(isinstance(e.get(k), str) for k in ("id", "src", "tgt")):
            raise rd.fail(f"edge #{n + 1} needs string fields id, src, tgt", "edges")
        rd.known(e["src"], vset, "vertex", f"edge '{e['id']}'")
        rd.known(e["tgt"], vset, "vertex", f"edge '{e['id']}'")
        edges.append((e["id"], e["src"], e["tgt"]))
    rd.unique([e[0] for e in edges], "edge")
    E = make_graph(vertices, edges)

    defaulted: List[str] = []
    C = _read_blocks(rd, doc, "C", E)
    if C is None:
        C = tuple(Block(f"X{i}", v, tuple(E.out_edges[v])) for i, v in enumerate([v for v in E.vertices if E.out_edges[v]], start=1))
        defaulted.append("C")
    D = _read_blocks(rd, doc, "D", E)
    if D is None:
        D = tuple(Block(f"Y{i}", e.tgt, (e.id,)) for i, e in enumerate(E.edges, start=1))
        defaulted.append("D")
    rows = {X.id: X for X in C}
    cols = {Y.id: Y for Y in D}
    if "S" in doc:
        S = rd.strings(doc["S"], "S")
        for X in S:
            rd.known(X, rows, "row block", "S")
    else:
        S = list(rows) if "C" in defaulted else []
        defaulted.append("S")
    if "T" in doc:
        T = rd.strings(doc["T"], "T")
        for Y in T:
            rd.known(Y, cols, "column block", "T")
    else:
        T = list(cols) if "D" in defaulted else []
        defaulted.append("T")
    g = BiSepGraph(E, C, D, frozenset(S), frozenset(T))

    lambdas = None
    if "lambdas" in doc:
        lambdas = _read_lambdas(rd, doc["lambdas"], rows, cols)
    else:
        defaulted.append("lambdas")
    log.debug("parse_graph %s: %d vertices, %d edges, defaults %s", source, len(vertices), len(edges), defaulted)
    return GraphDocument(g, lambdas, tuple(defaulted), source)

def _read_blocks(rd: _Reader, doc: Dict[str, Any], key: str, E) -> Optional[Tuple[Block, ...]]:
    if key not in doc:
        return None
    raw = doc[key]
    if not isinstance(raw, dict):
        raise rd.fail(f"'{key}' must map block ids to edge lists", key)
    end = E.s if key == "C" else E.r
    out: List[Block] = []
    for bid, members in raw.items():
        members = rd.strings(members, bid)
        if not members:
            raise rd.fail(f"block '{bid}' is empty", bid)
        for e in members:
            rd.known(e, E.edge_map, "edge", f"block '{bid}'")
        out.append(Block(bid, end(members[0]), tuple(members)))
    return tuple(out)

def _read_lambdas(rd: _Reader, raw: Any, rows: Mapping[str, Block], cols: Mapping[str, Block]) -> List[Lambda]:
    if not isinstance(raw, dict):
        raise rd.fail("'lambdas' must map ids to {X, Y, class}", "lambdas")
    out: List[Lambda] = []
    for lid, body in raw.items():
        if not isinstance(body, dict):
            raise rd.fail(f"hyperedge '{lid}' must be an object", lid)
        xs = rd.strings(body.get("X", []), "X")
        ys = rd.strings(body.get("Y", []), "Y")
        for X in xs:
            rd.known(X, rows, "row block", f"hyperedge '{lid}'")
        for Y in ys:
            rd.known(Y, cols, "column block", f"hyperedge '{lid}'")
        cls = body.get("class", "TS")
        if cls not in LAMBDA_CLASSES:
            raise rd.fail(f"hyperedge '{lid}' has unknown class '{cls}'{_hint(str(cls), LAMBDA_CLASSES)}", lid)
        out.append(Lambda(lid, tuple(xs), tuple(ys), cls))
    return out

def load_graph_file(path: str) -> GraphDocument:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise GraphFormatError(f"file not found: {path}")
    return parse_graph(text, source=path)

def graph_to_json(g: BiSepGraph, lambdas: Optional[Sequence[Lambda]] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "version": GRAPH_SCHEMA_VERSION,
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in g.edges],
        "C": {X.id: list(X.edges) for X in g.C},
        "D": {Y.id: list(Y.edges) for Y in g.D},
        "S": list(g.S_order),
        "T": list(g.T_order),
    }
    if lambdas is not None:
        out["lambdas"] = {lam.id: {"X": list(lam.X), "Y": list(lam.Y), "class": lam.cls} for lam in lambdas}
    return out


# ---------- Expressions ----------
TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<ghost>\^\*|')"
    r"|(?P<op>[-+*/])"
)


class Token(NamedTuple):
    kind: str
    text: str
    column: int     # 1-based


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    out.append(Token("end", "", len(text) + 1))
    return out


class _ExprParser:
    def __init__(self, text: str, g: BiSepGraph):
        self.tokens = tokenize(text)
        self.i = 0
        self.g = g
        self.known = list(g.vertices) + [e.id for e in g.edges]

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text else kind
            got = repr(t.text) if t.text else "end of input"
            raise ExprSyntaxError(f"expected {want}, found {got}", t.column)
        self.i += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def expr(self) -> AlgElem:
        sign = 1
        if self.at("op", "-"):
            self.i += 1
            sign = -1
        total = sign * self.term()
        while self.at("op", "+") or self.at("op", "-"):
            op = self.take("op").text
            t = self.term()
            total = total + t if op == "+" else total - t
        self.take("end")
        return total

    def rational(self) -> Fraction:
        start = self.take("num")
        text = start.text
        if self.at("op", "/"):
            self.i += 1
            den = self.take("num")
            text = f"{text}/{den.text}"
        q = parse_rational(text)
        if q is None:
            raise ExprSyntaxError(f"malformed rational '{text}'", start.column)
        return q

    def term(self) -> AlgElem:
        if self.at("num"):
            q = self.rational()
            if not self.at("op", "*"):
                return q * unit(self.g)
            self.i += 1
            return q * self.factors()
        return self.factors()

    def factors(self) -> AlgElem:
        letters = [self.factor()]
        while self.at("op", "*"):
            self.i += 1
            letters.append(self.factor())
        return element(self.g, *letters)

    def factor(self) -> Letter:
        t = self.take("ident")
        starred = False
        if self.at("ghost"):
            self.i += 1
            starred = True
        if t.text in self.g.graph.vertex_index:
            return Letter(VERTEX, t.text)
        if t.text in self.g.graph.edge_map:
            return Letter(GHOST if starred else EDGE, t.text)
        try:
            require_known(t.text, self.known, "identifier")
        except UnknownIdentifierError as e:
            e.position = (1, t.column)
            raise
        raise AssertionError("unreachable")


def parse_expr(text: str, g: BiSepGraph) -> AlgElem:
    """
    Parse an algebra element; products of factors that do not compose are 0.

    Raises:
        ExprSyntaxError: with the 1-based column of the offending token
        UnknownIdentifierError: with "did you mean" suggestions
    """
    return _ExprParser(text, g).expr()


# ---------- Triples, dims and representations ----------
def _id_list(data: Mapping[str, Any], key: str, known: Sequence[str], kind: str) -> List[str]:
    raw = data.get(key, [])
    if not isinstance(raw, list):
        raise GraphFormatError(f"'{key}' must be a list")
    return [require_known(str(x), known, kind) for x in raw]

def parse_triple(data: Any, H: BHypergraph) -> AdmissibleTriple:
    """{"V": [...], "Sigma": [...], "Theta": [...]}; admissibility is checked by the caller."""
    if not isinstance(data, dict):
        raise GraphFormatError("triple file must be a JSON object")
    lam_ids = [lam.id for lam in H.lambdas]
    return triple(
        _id_list(data, "V", H.vertices, "vertex"),
        _id_list(data, "Sigma", lam_ids, "hyperedge"),
        _id_list(data, "Theta", lam_ids, "hyperedge"),
    )

def parse_dims(data: Any, g: BiSepGraph) -> Dict[str, int]:
    """{"v1": 2, ...}; missing vertices get 0."""
    if not isinstance(data, dict):
        raise GraphFormatError("dims file must be a JSON object")
    out = {v: 0 for v in g.vertices}
    for v, k in data.items():
        require_known(v, g.vertices, "vertex")
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise GraphFormatError(f"dimension of '{v}' must be a nonnegative integer, got {k!r}")
        out[v] = k
    return out

def _matrix(raw: Any, shape: Tuple[int, int], what: str) -> QMatrix:
    rows, cols = shape
    if not isinstance(raw, list) or len(raw) != rows:
        raise RepresentationError(f"{what}: expected {rows} rows")
    parsed = []
    for row in raw:
        if not isinstance(row, list) or len(row) != cols:
            raise RepresentationError(f"{what}: expected rows of length {cols}")
        vals = [parse_rational(x) if isinstance(x, (str, int)) else None for x in row]
        if any(v is None for v in vals):
            raise RepresentationError(f"{what}: entries must be rationals like \"3/2\"")
        parsed.append(vals)
    return qmatrix(parsed, cols)

def parse_rep(data: Any, g: BiSepGraph) -> QuiverRep:
    """{"dims": {...}, "maps": {edge: matrix}, "ghosts": {edge: matrix}}; matrices are lists of rational strings."""
    if not isinstance(data, dict):
        raise RepresentationError("representation file must be a JSON object")
    dims = parse_dims(data.get("dims", {}), g)
    edge_ids = [e.id for e in g.edges]
    rep = QuiverRep(dims, {}, {})
    for key, table, flip in (("maps", rep.maps, False), ("ghosts", rep.ghosts, True)):
        entries = data.get(key, {})
        if not isinstance(entries, dict):
            raise RepresentationError(f"'{key}' must map edge ids to matrices")
        for e, raw in entries.items():
            require_known(e, edge_ids, "edge")
            edge = g.graph.edge_map[e]
            shape = (dims[edge.src], dims[edge.tgt])
            table[e] = _matrix(raw, shape[::-1] if flip else shape, f"{key}['{e}']")
    return rep

def matrix_to_json(m: QMatrix) -> List[List[str]]:
    return [[format_rational(x) for x in row] for row in m]

def rep_to_json(rep: QuiverRep) -> Dict[str, Any]:
    return {
        "dims": dict(rep.dims),
        "maps": {e: matrix_to_json(m) for e, m in rep.maps.items()},
        "ghosts": {e: matrix_to_json(m) for e, m in rep.ghosts.items()},
    }


# ---------- Monoid elements ----------
MONOID_TERM_RE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_.]*)\s*$")

def parse_monoid_elt(text: str, pres: HMonoidPres) -> MonoidElt:
    """`2v + w + q_lam1`; `0` is the neutral element."""
    if text.strip() == "0":
        return pres.zero()
    counts: Dict[str, int] = {}
    for part in text.split("+"):
        m = MONOID_TERM_RE.match(part)
        if m is None:
            raise ExprSyntaxError(f"malformed monoid term {part.strip()!r}", text.find(part) + 1)
        gen = require_known(m.group(2), pres.generators, "generator")
        counts[gen] = counts.get(gen, 0) + int(m.group(1) or 1)
    return pres.elt(counts)


# ---------- Command-line loading ----------
def load_valid_graph(path: str) -> GraphDocument:
    """Load a document and refuse graphs that violate the bi-separation invariants."""
    doc = load_graph_file(path)
    bad = doc.violations()
    if bad:
        raise GraphFormatError(f"{path}: {bad[0].message} ({len(bad)} violation(s); run 'validate')")
    return doc

def require_hypergraph(doc: GraphDocument) -> BHypergraph:
    H, bad = doc.hypergraph()
    if bad:
        raise GraphFormatError(f"{doc.source}: not a B-hypergraph: {bad[0].message}")
    return H
