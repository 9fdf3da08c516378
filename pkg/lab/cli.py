"""
Command line for the lab:

  python -m lab gen <family> [key=value ...] [--seed S] -o graph.txt
  python -m lab run --alg c2k --k 2 --graph graph.txt [--trace] [--json]
  python -m lab sweep --spec sweeps/k2_oracle.json [--output report.csv]
  python -m lab verify --k 2 --ell 1 --v 0 --graph graph.txt
  python -m lab oracle --twok 4 --graph graph.txt

Exit codes: 0 ok, 1 mismatch or fault, 2 bad input.
"""

import argparse
import json
import logging
import sys

from evencycle.config import MAX_ROUNDS, configure_logging
from evencycle.density import density_certificate
from evencycle.detect import c2k_program, c4_program
from evencycle.errors import CapExceeded, EvenCycleError, GraphError, PreconditionError, SimulationFault, VerdictTimeout
from evencycle.graph import find_cycle_bruteforce, format_edge_list, read_edge_list, write_edge_list
from evencycle.sim import format_trace, global_verdict, report_to_dict, run
from lab.generators import GENERATORS, generate
from lab.report import FORMATS, emit_report
from lab.sweep import load_spec, report_format, run_sweep, summarize

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2


def _fmt_nodes(nodes):
    return " ".join(str(x) for x in nodes)


def _parse_params(pairs):
    params = {}
    for item in pairs:
        key, sep, val = item.partition("=")
        if not sep:
            raise PreconditionError(f"expected key=value, got {item!r}")
        try:
            params[key] = int(val)
        except ValueError:
            raise PreconditionError(f"parameter {key} must be an integer, got {val!r}") from None
    return params


def cmd_gen(args):
    g = generate(args.family, _parse_params(args.params), args.seed)
    if args.output == "-":
        sys.stdout.write(format_edge_list(g))
    else:
        write_edge_list(g, args.output)
    log.info("%s: n=%d m=%d", args.family, g.n, g.m)
    return EXIT_OK


def cmd_run(args):
    g = read_edge_list(args.graph)
    prog = c4_program(g.n) if args.alg == "c4" else c2k_program(g.n, args.k)
    report = run(g, prog, args.max_rounds, trace=args.trace)
    try:
        verdict = global_verdict(report)
        problem = None
    except (SimulationFault, VerdictTimeout) as exc:
        verdict, problem = None, exc
    if args.json:
        print(json.dumps({"verdict": verdict, **report_to_dict(report)}, indent=2))
        return EXIT_FAIL if problem else EXIT_OK
    if args.trace:
        for line in format_trace(report):
            print(line)
    if problem:
        print(f"fault: {problem}")
        return EXIT_FAIL
    print(f"verdict={verdict}")
    print(f"rounds_used={report.rounds_used}")
    print(f"light_rounds={report.phase_rounds('light')}")
    print(f"heavy_rounds={report.phase_rounds('heavy')}")
    print(f"words_sent={sum(report.words_sent)}")
    print(f"peak_outbox={report.peak_outbox}")
    print(f"threshold_fired={str(report.threshold_fired).lower()}")
    witness = report.first_witness()
    if witness is not None:
        print(f"witness={_fmt_nodes(witness)}")
    return EXIT_OK


def cmd_sweep(args):
    spec = load_spec(args.spec)
    rows = run_sweep(spec, workers=args.workers)
    summary = summarize(rows)
    fmt = report_format(spec, args.format)
    output = args.output or spec.output or "-"
    emit_report(rows, output, fmt, summary)
    log.warning(
        "sweep done: %d instances, %d mismatches, %d faults, %d threshold firings, exponent=%s",
        summary["instances"],
        summary["mismatches"],
        summary["faults"],
        summary["threshold_fired"],
        "n/a" if summary["exponent"] is None else f"{summary['exponent']:.3f}",
    )
    return EXIT_FAIL if summary["mismatches"] or summary["faults"] else EXIT_OK


def cmd_verify(args):
    g = read_edge_list(args.graph)
    try:
        cert = density_certificate(g, args.k, args.ell, args.v)
    except PreconditionError as exc:
        print(f"precondition not met: {exc}")
        return EXIT_BAD_INPUT
    print(f"cycle: {_fmt_nodes(cert.witness)}")
    print(f"level={cert.level} node={cert.node} H={cert.h.source_kind} |E_H|={len(cert.h.edges)}")
    return EXIT_OK


def cmd_oracle(args):
    g = read_edge_list(args.graph)
    found = find_cycle_bruteforce(g, args.twok)
    print(f"cycle: {_fmt_nodes(found)}" if found else "none")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="lab", description="Even-cycle detection lab: generators, simulations, sweeps.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="Write a generated graph as an edge list")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*", help="Generator parameters as key=value (e.g. n=20 m=30)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-", help="Output edge-list path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="Simulate a detection program on a graph")
    p.add_argument("--alg", choices=("c2k", "c4"), default="c2k")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--graph", required=True)
    p.add_argument("--max-rounds", type=int, default=MAX_ROUNDS)
    p.add_argument("--trace", action="store_true", help="Print round=<t> node=<v> word=<hex> lines")
    p.add_argument("--json", action="store_true", help="Print the run report as a JSON object")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="Run an ExperimentSpec and emit a report")
    p.add_argument("--spec", required=True)
    p.add_argument("--output", default=None, help="Report path (default: spec output, else stdout)")
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="Extract a 2k-cycle from a density violation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="Brute-force search for a cycle of the given length")
    p.add_argument("--twok", type=int, required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(("WARNING", "INFO", "DEBUG")[min(args.verbose, 2)] if args.verbose else None)
    try:
        return args.func(args)
    except (GraphError, PreconditionError, CapExceeded, OSError) as exc:
        print(f"[lab] error: {exc}", file=sys.stderr, flush=True)
        return EXIT_BAD_INPUT
    except EvenCycleError as exc:
        print(f"[lab] {type(exc).__name__}: {exc}", file=sys.stderr, flush=True)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
