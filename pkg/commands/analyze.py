# commands/analyze.py
import argparse
import logging

from core.algebra import growth_count
from core.analysis import FAILS, HOLDS, growth_class, property_report
from core.config import DEFAULT_CONN_LEN, DEFAULT_MAX_LEN, DEFAULT_ZD_MAX_LEN
from core.parsing import load_valid_graph
from core.utils import emit, status

log = logging.getLogger(__name__)


class AnalyzeCommands:
    """Structural flags, the ring-theoretic facts they imply, and growth."""

    def analyze(self, args: argparse.Namespace) -> int:
        g = load_valid_graph(args.graph).g
        report = property_report(g, args.max_len)
        lines = ["🔎 Flags"]
        lines.extend(status(f.value, f"{name}: {f.evidence}") for name, f in report.flags.items())
        lines.append("📚 Facts")
        for name, fact in report.facts.items():
            ok = True if fact.status == HOLDS else False if fact.status == FAILS else None
            extra = f" [{fact.witness}]" if fact.witness else ""
            lines.append(status(ok, f"{name}: {fact.status} ({fact.theorem}){extra}"))
        emit(report.to_json(), args.json, lines)
        return 0

    def growth(self, args: argparse.Namespace) -> int:
        g = load_valid_graph(args.graph).g
        gc = growth_class(g, args.max_len, args.conn_len)
        counts = {n: growth_count(g, n) for n in range(args.counts + 1)}
        data = {"class": gc.label, "exponential": gc.exponential, "counts": {str(n): c for n, c in counts.items()}}
        lines = [status(True if gc.exponential else None, f"growth: {gc.label}")]
        if gc.witness is not None:
            qc = gc.witness
            data["witness"] = {"p": str(qc.path), "o": str(qc.connector)}
            lines.append(f"   quasi-cycle p = {qc.path}, connector o = {qc.connector}")
        lines.append("   counts: " + ", ".join(f"{n}:{c}" for n, c in counts.items()))
        emit(data, args.json, lines)
        return 0


def setup(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    cmd = AnalyzeCommands()

    p = subparsers.add_parser("analyze", parents=[parent], help="LV, domain, Condition (A)/(A') and consequences")
    p.add_argument("--max-len", type=int, default=DEFAULT_ZD_MAX_LEN, help="zero-divisor search length")
    p.set_defaults(func=cmd.analyze)

    p = subparsers.add_parser("growth", parents=[parent], help="self-connected quasi-cycle search")
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--conn-len", type=int, default=DEFAULT_CONN_LEN)
    p.add_argument("--counts", type=int, default=6, help="print growth_count(n) for n up to this")
    p.set_defaults(func=cmd.growth)
