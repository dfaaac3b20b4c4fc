"""``grover-pst`` command line.

Exit codes: 0 on success, 1 on unparseable input or bad arguments, 2 when a
graph exceeds the vertex or arc cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import CapacityError, GroverPstError
from .graph_core import Graph, parse_edge_list, parse_family_spec
from .pst_engine import DEFAULT_TAU_MAX, analyze_pst
from .report import analysis_report, classification_table, format_analysis, format_table
from .sim_oracle import fidelity_trace, oracle_horizon, verify_certificates
from .walk_operators import build_walk

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAPACITY = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for capacity refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[int]:
    """``"3"`` or ``"1..6"`` (inclusive) to a list of ints."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(a, b + 1))


def thread_count() -> int:
    raw = os.environ.get("GROVER_PST_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise GroverPstError(f"GROVER_PST_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise GroverPstError("GROVER_PST_THREADS must be >= 1")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1)")
    return x


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--tau-max", type=int, default=DEFAULT_TAU_MAX, help="PST search horizon for aperiodic walks")
    p.add_argument(
        "--tolerance", type=_positive_float, default=1e-8, help="oracle accepts fidelity >= 1 - tolerance"
    )
    p.add_argument("--out", type=Path, help="directory for output files")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="name:p1,p2,... e.g. johnson:4,2,1")
    src.add_argument("--edges", type=Path, help="edge-list file: n, then one 'u v' per line")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grover-pst", description="Perfect state transfer for Grover walks on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="full pipeline on one graph")
    _add_graph_source(a)
    _add_common(a)
    a.add_argument("--timing", action="store_true", help="include stage timings")

    c = sub.add_parser("classify", help="classification table for a family")
    c.add_argument("family", choices=["hamming", "johnson", "cycle", "complete"])
    c.add_argument("--d", type=parse_range, default=parse_range("1..6"))
    c.add_argument("--q", type=parse_range, default=parse_range("2..3"))
    c.add_argument("--n", type=parse_range, default=parse_range("3..12"))
    c.add_argument("--n-max", type=int, default=8)
    c.add_argument("--no-check", action="store_true", help="skip construction and the oracle")
    _add_common(c)

    s = sub.add_parser("simulate", help="fidelity traces and certificate verification")
    _add_graph_source(s)
    _add_common(s)
    s.add_argument("--source", type=int, action="append", help="source vertex (repeatable; default all)")
    s.add_argument("--horizon", type=int, help="trace length (default: period or --tau-max)")

    m = sub.add_parser("dump-matrices", help="write S, N, K, U, P as CSV")
    _add_graph_source(m)
    m.add_argument("--out", type=Path, required=True)
    return parser


def load_graph(args) -> Graph:
    if args.family:
        return parse_family_spec(args.family)
    try:
        text = args.edges.read_text()
    except OSError as exc:
        raise GroverPstError(f"cannot read {args.edges}: {exc}") from exc
    return parse_edge_list(text)


def _emit(text: str, out: Path | None, filename: str) -> None:
    print(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text + "\n")


def cmd_analyze(args) -> int:
    rep = analysis_report(load_graph(args), args.tau_max, 1 - args.tolerance, args.timing)
    if args.json:
        _emit(json.dumps(rep, indent=2, sort_keys=True), args.out, "report.json")
    else:
        _emit(format_analysis(rep), args.out, "report.txt")
    return EXIT_OK


def cmd_classify(args) -> int:
    ranges = {"d": args.d, "q": args.q, "n": args.n, "n_max": args.n_max}
    table = classification_table(
        args.family, ranges, args.tau_max, 1 - args.tolerance, thread_count(), not args.no_check
    )
    if args.json:
        _emit(json.dumps(table, indent=2, sort_keys=True), args.out, f"classify_{args.family}.json")
    else:
        _emit(format_table(table), args.out, f"classify_{args.family}.txt")
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = load_graph(args)
    w = build_walk(g)
    verdict = analyze_pst(g, args.tau_max, w)
    horizon = args.horizon or oracle_horizon(verdict.period, args.tau_max)
    sources = args.source if args.source else range(g.vertex_count)
    report = verify_certificates(list(verdict.certificates), w, horizon, threshold=1 - args.tolerance)
    summary = []
    for u in sources:
        trace = fidelity_trace(w, u, horizon)
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            trace.write_csv(args.out / f"trace_{u}.csv")
        f = trace.fidelities.copy()
        f[:, u] = 0.0
        f[0] = 0.0
        t, v = divmod(int(f.argmax()), f.shape[1])
        summary.append({"source": u, "best_target": v, "best_time": t, "best_fidelity": float(f[t, v])})
    out = {"verification": report.to_dict(), "sources": summary}
    if args.json:
        _emit(json.dumps(out, indent=2, sort_keys=True), args.out, "verification.json")
    else:
        lines = [f"{'source':>6} {'target':>6} {'t':>4}  fidelity"]
        lines += [
            f"{r['source']:>6} {r['best_target']:>6} {r['best_time']:>4}  {r['best_fidelity']:.12f}" for r in summary
        ]
        lines.append(f"certificates {'agree' if report.agrees else 'DISAGREE'} with simulation (horizon {horizon})")
        _emit("\n".join(lines), args.out, "verification.txt")
        if args.out is not None:
            (args.out / "verification.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_dump(args) -> int:
    w = build_walk(load_graph(args))
    for p in w.dump_csv(args.out):
        print(p)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "dump-matrices": cmd_dump,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"grover-pst: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GroverPstError, ValueError) as exc:
        print(f"grover-pst: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
