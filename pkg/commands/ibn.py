# commands/ibn.py
import argparse
import logging
from typing import Any, Dict, List

from core.config import DEFAULT_DIM_BOUND
from core.ibn import (
    build_representation, check_condition_h, check_inverses, check_module_relations, dimension_functions,
    has_ibn, has_nonzero_findim_rep, ibn_witness, k0_span_ibn,
)
from core.parsing import load_valid_graph, parse_dims, parse_rep, rep_to_json, require_hypergraph
from core.utils import emit, load_json, status

log = logging.getLogger(__name__)


class IbnCommands:
    """IBN, dimension functions and representation checks."""

    def ibn(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        data: Dict[str, Any] = {}
        lines: List[str] = []
        verdict = None
        if H.is_regular() or not args.k0_span:
            res = has_ibn(H)
            verdict = res.has_ibn
            data.update(ibn=res.has_ibn, rank=res.rank_matrix, rank_augmented=res.rank_augmented,
                        confluence_assumed=res.confluence_assumed)
            lines.append(status(res.has_ibn, f"IBN: {'yes' if res.has_ibn else 'no'} "
                                             f"(rank {res.rank_matrix} vs {res.rank_augmented}, confluence assumed)"))
            if args.witness and not res.has_ibn:
                w = ibn_witness(H)
                if w is not None:
                    data["witness"] = w.to_json()
                    big, small = w.lifted
                    lines.append(f"   witness: m={w.m}, p={w.p}, multipliers {list(w.multipliers)}")
                    lines.append(status(w.confirmed or None, f"{big}·Σv = {small}·Σv in the H-monoid"))
        if args.k0_span:
            k0 = k0_span_ibn(H)
            if verdict is None:
                verdict = k0.has_ibn
            data["k0_span"] = {"ibn": k0.has_ibn, "rank": k0.rank_matrix, "rank_augmented": k0.rank_augmented, "advisory": True}
            lines.append(status(None, f"K0 span test (advisory): IBN {'yes' if k0.has_ibn else 'no'}"))
        emit(data, args.json, lines)
        if args.expect is not None and verdict != (args.expect == "ibn"):
            return 1
        return 0

    def dimfun(self, args: argparse.Namespace) -> int:
        H = require_hypergraph(load_valid_graph(args.graph))
        dims = dimension_functions(H, args.bound, exact=args.exact)
        nonzero = has_nonzero_findim_rep(H)
        data = {**dims.to_json(), "bound": args.bound, "nonzero_findim_rep": nonzero}
        lines = [f"📏 {len(dims.samples)} nonzero dimension function(s) with values <= {args.bound}"]
        lines.extend("   " + ", ".join(f"{v}={k}" for v, k in d.items()) for d in dims.samples[:20])
        if len(dims.samples) > 20:
            lines.append(f"   ... {len(dims.samples) - 20} more")
        lines.append(status(dims.exists, "nonzero dimension function on the whole graph"))
        lines.append(status(nonzero, "nonzero finite-dimensional representation"))
        emit(data, args.json, lines)
        return 0

    def rep_check(self, args: argparse.Namespace) -> int:
        doc = load_valid_graph(args.graph)
        H = require_hypergraph(doc)
        if args.rep:
            rep = parse_rep(load_json(args.rep), doc.g)
        else:
            if args.dims:
                d = parse_dims(load_json(args.dims), doc.g)
            else:
                samples = dimension_functions(H, DEFAULT_DIM_BOUND).samples
                if not samples:
                    emit({"built": False}, args.json, [status(False, f"no nonzero dimension function with values <= {DEFAULT_DIM_BOUND}")])
                    return 1
                d = samples[0]
            rep = build_representation(H, d)
        check = check_condition_h(H, rep)
        data: Dict[str, Any] = {"condition_h": check.ok, "lambdas": check.details, "rep": rep_to_json(rep)}
        lines = [status(check.ok, "condition (H)")]
        lines.extend(f"   {lam}: {what}" for lam, what in check.details.items())
        ok = check.ok
        if args.inverse:
            inv = check_inverses(H, rep)
            relations = check_module_relations(doc.g, rep)
            data["inverse"] = {"ok": inv.ok, "lambdas": inv.details, "relations": relations}
            lines.append(status(inv.ok, "[ρ(λ)]·[λ]* = I"))
            lines.append(status(relations is None, relations or "row and column relations hold"))
            ok = ok and inv.ok and relations is None
        emit(data, args.json, lines)
        return 0 if ok else 1


def setup(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    cmd = IbnCommands()

    p = subparsers.add_parser("ibn", parents=[parent], help="invariant basis number")
    p.add_argument("--witness", action="store_true", help="construct m·Σv = p·Σv when IBN fails")
    p.add_argument("--k0-span", action="store_true", help="advisory test for general B-hypergraphs")
    p.add_argument("--expect", choices=("ibn", "no-ibn"), help="exit 1 unless the verdict matches")
    p.set_defaults(func=cmd.ibn)

    p = subparsers.add_parser("dimfun", parents=[parent], help="dimension functions")
    p.add_argument("--bound", type=int, default=DEFAULT_DIM_BOUND)
    p.add_argument("--exact", action="store_true", help="decide existence by extreme-ray search")
    p.set_defaults(func=cmd.dimfun)

    p = subparsers.add_parser("rep-check", parents=[parent], help="condition (H) for a representation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dims", help='JSON file {"v": 2, ...}; the representation is built from it')
    src.add_argument("--rep", help="JSON representation file")
    src.add_argument("--build", action="store_true", help="build from the first sampled dimension function")
    p.add_argument("--inverse", action="store_true", help="also check ghost maps against [ρ(λ)]")
    p.set_defaults(func=cmd.rep_check)
