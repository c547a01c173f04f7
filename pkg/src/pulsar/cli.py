"""Command-line entry point: ``pulsar run | scan | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import ENGINES, GRAPH_KINDS, RunConfig, run, scan

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_run(args) -> int:
    m = args.m if args.m is not None else 1
    cfg = RunConfig(graph=args.graph, n=args.n, k=args.k, m=m, n2=args.n2,
                    t_max=args.tmax, engine=args.engine, theory_column=args.with_theory)
    result = run(cfg)
    if args.out:
        _write(args.out, result.to_csv())
    _write(args.summary, _dump(result.report.to_dict()))
    return EXIT_OK


def cmd_scan(args) -> int:
    report = scan(args.k, args.m, args.n)
    if args.out:
        _write(args.out, report.to_csv())
    _write(args.summary, _dump(report.to_dict()))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import verify

    results = verify(args.criterion or None)
    for r in results:
        print(json.dumps(r.to_dict(), sort_keys=True, default=float))
    for r in results:
        print(r.line(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pulsar", description="Grover-walk pulsation on wedge graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="simulate one configuration")
    r.add_argument("--graph", choices=GRAPH_KINDS, default="johnson-star")
    r.add_argument("--n", type=int, required=True, help="Johnson n, hypercube dimension, or first K_n size")
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--m", type=int, default=None, help="star leaves (default 1)")
    r.add_argument("--n2", type=int, default=None, help="size of the second complete graph")
    r.add_argument("--tmax", type=int, default=200)
    r.add_argument("--engine", choices=ENGINES, default="full")
    r.add_argument("--with-theory", action="store_true", help="add the sin^2(t theta) column")
    r.add_argument("--out", help="CSV path ('-' for stdout)")
    r.add_argument("--summary", help="JSON summary path (default stdout)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("scan", help="log-log slope of the optimal time against N")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--n", type=int, nargs="+", required=True)
    s.add_argument("--out", help="CSV path ('-' for stdout)")
    s.add_argument("--summary", help="JSON summary path (default stdout)")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="run the acceptance battery")
    v.add_argument("--criterion", type=int, action="append", choices=range(1, 8))
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"pulsar: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
