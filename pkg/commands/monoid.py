# commands/monoid.py
import argparse
import logging
from typing import Any, Dict, List

from core.hypermonoid import (
    Distinct, Equal, EqResult, HMonoidPres, at_leq, check_triple, enumerate_admissible_triples,
    is_monoid_simple, monoid_equal, pi_hom, presentation, probe_confluence,
)
from core.parsing import graph_to_json, load_valid_graph, parse_monoid_elt, parse_triple, require_hypergraph
from core.utils import emit, load_json, status

log = logging.getLogger(__name__)


def _result_json(pres: HMonoidPres, res: EqResult) -> Dict[str, Any]:
    if isinstance(res, Equal):
        return {"result": "equal", "trace": [pres.format(x) for x in res.trace]}
    if isinstance(res, Distinct):
        out: Dict[str, Any] = {"result": "distinct", "exhausted": res.exhausted}
        if res.certificate is not None:
            out["certificate"] = dict(zip(pres.generators, res.certificate))
        return out
    return {"result": "unknown", "depth": res.depth}

def _result_line(res: EqResult, x: str, y: str) -> str:
    if isinstance(res, Equal):
        return status(True, f"{x} = {y} ({len(res.trace) - 1} steps)")
    if isinstance(res, Distinct):
        why = "class exhausted" if res.exhausted else "separating functional"
        return status(False, f"{x} ≠ {y} ({why})")
    return status(None, f"{x} ? {y}: undecided within depth {res.depth}")


class MonoidCommands:
    """The H-monoid, its order-ideal lattice and quotients."""

    def monoid(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        pres = presentation(H)
        data: Dict[str, Any] = {
            "generators": list(pres.generators),
            "relations": [{"lambda": r.lam, "left": pres.format(r.left), "right": pres.format(r.right)} for r in pres.relations],
        }
        lines = [f"🧮 generators: {', '.join(pres.generators)}"]
        lines.extend(f"   {r.lam}: {pres.format(r.left)} = {pres.format(r.right)}" for r in pres.relations)
        code = 0
        if args.equal:
            x, y = (parse_monoid_elt(s, pres) for s in args.equal)
            res = monoid_equal(pres, x, y, args.depth)
            data["equal"] = _result_json(pres, res)
            lines.append(_result_line(res, *args.equal))
            if isinstance(res, Distinct):
                code = 1
        if args.probe:
            x = parse_monoid_elt(args.probe, pres)
            probes = probe_confluence(pres, x, args.depth or 4)
            data["probe"] = [{"first": a, "second": b, **_result_json(pres, r)} for a, b, r in probes]
            bad = [p for p in probes if not isinstance(p[2], Equal)]
            lines.append(status(not bad if probes else None, f"{len(probes)} critical pair(s) at {args.probe}, {len(bad)} not rejoined"))
        emit(data, args.json, lines)
        return code

    def at_lattice(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        triples = enumerate_admissible_triples(H)
        index = {t: i for i, t in enumerate(triples)}
        covers: List[List[int]] = []
        for a in triples:
            for b in triples:
                if a == b or not at_leq(H, a, b):
                    continue
                if any(c not in (a, b) and at_leq(H, a, c) and at_leq(H, c, b) for c in triples):
                    continue
                covers.append([index[a], index[b]])
        data = {"triples": [t.to_json(H) for t in triples], "covers": covers}
        lines = [f"🪜 {len(triples)} admissible triple(s)"]
        for i, t in enumerate(triples):
            j = t.to_json(H)
            lines.append(f"   #{i}: V={j['V']} Σ={j['Sigma']} Θ={j['Theta']}")
        lines.append("   covers: " + (", ".join(f"#{a}<#{b}" for a, b in covers) or "none"))
        emit(data, args.json, lines)
        return 0

    def simple(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        ok = is_monoid_simple(H)
        emit({"simple": ok}, args.json, [status(ok, "H-monoid is simple" if ok else "H-monoid is not simple")])
        return 0 if ok else 1

    def quotient(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        t = parse_triple(load_json(args.triple), H)
        check_triple(H, t)
        pi = pi_hom(H, t)
        Q = pi.quotient
        data = {
            "triple": t.to_json(H),
            "quotient": graph_to_json(Q.base, Q.lambdas),
            "pi": {gen: pi.target.format(img) for gen, img in pi.images.items()},
        }
        lines = [status(True, f"quotient: {len(Q.vertices)} vertices, {len(Q.base.edges)} edges, {len(Q.lambdas)} hyperedges")]
        lines.extend(f"   π({gen}) = {img}" for gen, img in data["pi"].items())
        emit(data, args.json, lines)
        return 0


def setup(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    cmd = MonoidCommands()

    p = subparsers.add_parser("monoid", parents=[parent], help="H-monoid presentation and word problem")
    p.add_argument("--equal", nargs=2, metavar=("X", "Y"), help="decide X = Y, e.g. '2v' 'v + w'")
    p.add_argument("--probe", metavar="X", help="check that one-step reductions of X rejoin")
    p.add_argument("--depth", type=int, default=None, help="search depth (BSA_BFS_DEPTH by default)")
    p.set_defaults(func=cmd.monoid)

    p = subparsers.add_parser("at-lattice", parents=[parent], help="admissible triples and their order")
    p.set_defaults(func=cmd.at_lattice)

    p = subparsers.add_parser("simple", parents=[parent], help="simplicity of the H-monoid")
    p.set_defaults(func=cmd.simple)

    p = subparsers.add_parser("quotient", parents=[parent], help="quotient by an admissible triple")
    p.add_argument("--triple", required=True, help='JSON file {"V": [...], "Sigma": [...], "Theta": [...]}')
    p.set_defaults(func=cmd.quotient)
