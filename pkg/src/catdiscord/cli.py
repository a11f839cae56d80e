"""Command-line front end: ``compute``, ``sweep`` and ``validate``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import sweep
from .errors import CatDiscordError, SingularNormalization
from .states import Parity

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SINGULAR = 0, 1, 2, 3


def _int_set(text: str) -> list[int]:
    try:
        return sweep.parse_int_set(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _add_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, help="output file (default: stdout)")
    sub.add_argument("--tol", type=_positive_float, default=sweep.DEFAULT_TOL,
                     help="cross-method agreement tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catdiscord", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    c = subs.add_parser("compute", help="evaluate a single (n, k, p, parity) point")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--parity", choices=("even", "odd"), default="even")
    c.add_argument("--method", choices=(*sweep.METHODS, "all"), default="all")
    _add_output(c)

    s = subs.add_parser("sweep", help="sweep p over a grid of (n, k, parity)")
    s.add_argument("--n", type=_int_set, required=True, help="e.g. 6 or 2,4 or 3-8")
    s.add_argument("--k", type=_int_set, required=True)
    s.add_argument("--p-start", type=float, default=0.0)
    s.add_argument("--p-end", type=float, default=1.0)
    s.add_argument("--p-steps", type=int, default=101)
    s.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    s.add_argument("--method", choices=(*sweep.METHODS, "all"), default="all")
    s.add_argument("--jobs", type=int, default=1)
    _add_output(s)

    v = subs.add_parser("validate", help="run the invariant suite")
    v.add_argument("--max-n", type=int, default=8)
    v.add_argument("--tol", type=_positive_float, default=1e-12, help="entrywise tolerance")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json-out", default=None)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def cmd_compute(args) -> int:
    methods = sweep.resolve_methods(args.method)
    try:
        row = sweep.compute_row(args.n, args.k, args.p, Parity.parse(args.parity), methods, args.tol)
    except SingularNormalization as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (CatDiscordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = sweep.rows_to_csv([row]) if args.format == "csv" else sweep.rows_to_json([row])
    _write(text, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    parities = (Parity.EVEN, Parity.ODD) if args.parity == "both" else (Parity.parse(args.parity),)
    try:
        config = sweep.SweepConfig(
            n_values=args.n,
            k_values=args.k,
            p_start=args.p_start,
            p_end=args.p_end,
            p_steps=args.p_steps,
            parities=parities,
            methods=sweep.resolve_methods(args.method),
            tol=args.tol,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = sweep.run_sweep(config, jobs=max(args.jobs, 1))
    text = sweep.rows_to_csv(rows) if args.format == "csv" else sweep.rows_to_json(rows)
    _write(text, args.out)
    failed = [r for r in rows if any(f.startswith("error:") for f in r.flags)]
    if failed:
        print(f"{len(failed)} of {len(rows)} points failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validate import Validator

    if not 2 <= args.max_n <= 10:
        print("error: --max-n must lie in 2..10", file=sys.stderr)
        return EXIT_USAGE
    report = Validator(max_n=args.max_n, tol=args.tol, seed=args.seed, inject_fault=args.inject_fault).run()
    print(report.summary())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json() + "\n", encoding="utf-8")
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"compute": cmd_compute, "sweep": cmd_sweep, "validate": cmd_validate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
