# commands/algebra.py
import argparse
import logging
from typing import Any, Dict, List

from core.algebra import AlgElem, algebra_of, basis_paths, degree_components, format_elem, mul, nf
from core.config import DEFAULT_MAX_LEN
from core.graph import BiSepGraph
from core.parsing import load_valid_graph, parse_expr
from core.utils import emit, format_rational

log = logging.getLogger(__name__)


def _terms(a: AlgElem, g: BiSepGraph) -> List[List[str]]:
    key = algebra_of(g).sort_key
    return [[format_rational(a.terms[p]), str(p)] for p in sorted(a.terms, key=key)]

def _describe(a: AlgElem, g: BiSepGraph, graded: bool) -> Dict[str, Any]:
    out: Dict[str, Any] = {"nf": format_elem(a, g), "terms": _terms(a, g)}
    if graded:
        out["components"] = {str(d): format_elem(c, g) for d, c in degree_components(a).items()}
    return out

def _lines(label: str, data: Dict[str, Any]) -> List[str]:
    lines = [f"{label}{data['nf']}"]
    for d, text in data.get("components", {}).items():
        lines.append(f"   degree {d}: {text}")
    return lines


class AlgebraCommands:
    """Normal forms, products and the normal-path basis."""

    def nf(self, args: argparse.Namespace) -> int:
        g = load_valid_graph(args.graph).g
        a = nf(g, parse_expr(args.expr, g))
        data = {"input": args.expr, **_describe(a, g, args.graded)}
        emit(data, args.json, _lines("", data))
        return 0

    def mul(self, args: argparse.Namespace) -> int:
        g = load_valid_graph(args.graph).g
        a, b = parse_expr(args.left, g), parse_expr(args.right, g)
        data = {"left": args.left, "right": args.right, **_describe(mul(g, a, b), g, args.graded)}
        emit(data, args.json, _lines("", data))
        return 0

    def basis(self, args: argparse.Namespace) -> int:
        g = load_valid_graph(args.graph).g
        paths = basis_paths(g, args.max_len)
        data = {"max_len": args.max_len, "count": len(paths), "paths": [str(p) for p in paths]}
        lines = [f"📐 {len(paths)} normal paths of length <= {args.max_len}"]
        lines.extend(f"   {p}" for p in data["paths"])
        emit(data, args.json, lines)
        return 0


def setup(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    cmd = AlgebraCommands()

    p = subparsers.add_parser("nf", parents=[parent], help="normal form of an expression")
    p.add_argument("expr")
    p.add_argument("--graded", action="store_true", help="also print the degree components")
    p.set_defaults(func=cmd.nf)

    p = subparsers.add_parser("mul", parents=[parent], help="normal form of a product")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--graded", action="store_true", help="also print the degree components")
    p.set_defaults(func=cmd.mul)

    p = subparsers.add_parser("basis", parents=[parent], help="normal paths up to a length")
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.set_defaults(func=cmd.basis)
