# commands/validate.py
import argparse
import logging

from core.parsing import load_graph_file
from core.utils import emit, status

log = logging.getLogger(__name__)


class Validate:
    """Check a graph document against the bi-separated graph and B-hypergraph invariants."""

    def run(self, args: argparse.Namespace) -> int:
        doc = load_graph_file(args.graph)
        bad = doc.violations()
        lines = []
        data = {
            "graph": args.graph,
            "defaulted": list(doc.defaulted),
            "violations": [v._asdict() for v in bad],
        }
        if bad:
            lines.append(status(False, f"{args.graph}: {len(bad)} violation(s)"))
            lines.extend(f"   [{v.kind}] {v.message}" for v in bad)
        else:
            g = doc.g
            lines.append(status(True, f"{args.graph}: {len(g.vertices)} vertices, {len(g.edges)} edges, "
                                      f"{len(g.C)} row / {len(g.D)} column blocks"))
            H, hyper_bad = doc.hypergraph()
            data["hypergraph"] = {
                "lambdas": {lam.id: {"X": list(lam.X), "Y": list(lam.Y), "class": lam.cls} for lam in H.lambdas},
                "violations": [v._asdict() for v in hyper_bad],
            }
            if hyper_bad:
                lines.append(status(None, f"not a B-hypergraph: {hyper_bad[0].message}"))
            else:
                classes = ", ".join(f"{lam.id}:{lam.cls}" for lam in H.lambdas) or "none"
                lines.append(status(True, f"B-hypergraph, hyperedges {classes}"))
        if doc.defaulted:
            lines.append(f"   defaults used for: {', '.join(doc.defaulted)}")
        data["ok"] = not bad
        emit(data, args.json, lines)
        return 1 if bad else 0


def setup(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    cmd = Validate()
    p = subparsers.add_parser("validate", parents=[parent], help="check graph invariants")
    p.set_defaults(func=cmd.run)
