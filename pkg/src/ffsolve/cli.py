"""Command-line entry point ``ffsolve``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from ffsolve import harness
from ffsolve.euler_solver import SCHEMES


def _floats(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _steps(text: str) -> tuple[float, ...]:
    # accept "1/10" as well as "0.1"
    out = []
    for item in text.split(","):
        item = item.strip()
        if "/" in item:
            num, den = item.split("/", 1)
            out.append(float(num) / float(den))
        elif item:
            out.append(float(item))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffsolve", description="Fuzzy fractional Euler experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a built-in example and write CSV files")
    run.add_argument("--example", type=int, required=True, choices=(1, 2, 3, 4))
    run.add_argument("--alpha", type=_floats, required=True, help="comma separated orders")
    run.add_argument("--h", type=_steps, required=True, help="comma separated step sizes, 1/N allowed")
    run.add_argument("--levels", type=int, default=11)
    run.add_argument("--out", type=Path, default=Path("out"))
    run.add_argument("--scheme", choices=SCHEMES, default=None)
    run.add_argument("--plan", choices=harness.PLANS, default="declared")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--jobs", type=int, default=1)

    suite = sub.add_parser("suite", help="run a check suite")
    suite.add_argument("--which", choices=harness.SUITES, required=True)

    sw = sub.add_parser("switching", help="print switching points")
    sw.add_argument("--example", type=int, required=True, choices=(3, 4))
    sw.add_argument("--alpha", type=_floats, required=True)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "run":
        try:
            cfg = harness.ExperimentConfig(
                example=args.example,
                alphas=args.alpha,
                hs=args.h,
                levels=args.levels,
                out=args.out,
                scheme=args.scheme,
                plan=args.plan,
                seed=args.seed,
                jobs=args.jobs,
            )
            summary = harness.run_example(cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

        for r in summary.results:
            status = "ok" if r.error is None else f"FAILED: {r.error}"
            err = "" if r.max_error is None else f" max_error={r.max_error:.6e}"
            print(f"alpha={r.alpha:g} h={r.h:g}{err} {status}")
        for path in summary.files:
            print(path)
        return 0 if summary.ok else 1

    if args.command == "suite":
        checks = harness.run_suite(args.which)
        print(harness.report(checks))
        return 0 if all(c.passed for c in checks) else 1

    for alpha, t in harness.switching_points(args.example, args.alpha):
        print(f"{alpha:g} {t:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
