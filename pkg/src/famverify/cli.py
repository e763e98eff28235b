"""Command-line driver: ``famverify verify FILE`` and ``famverify plan FILE``.

Exit codes: 0 verified, 1 falsified, 2 precondition failure, 3 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .checker import DEFAULT_TOLERANCE, FALSIFIED, VERIFIED, run_plan
from .contract import DEFAULT_MAX_DIM
from .diagram import SHORT_NAME, separation_report
from .errors import DimensionCapExceeded, FamVerifyError, NotSeparated, ParseError, PreconditionError
from .fileformat import format_value, parse_equation_file, report_to_json, serialize
from .planner import Settings, build_plan

EXIT_VERIFIED, EXIT_FALSIFIED, EXIT_PRECONDITION, EXIT_INPUT = 0, 1, 2, 3

__all__ = ["main", "cmd_verify", "cmd_plan", "parse_equation_file", "serialize"]


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors are input errors, not precondition failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="famverify",
                                description="Verify parameterised ZX/ZH/ZW equations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    common = _ArgumentParser(add_help=False)
    common.add_argument("file")
    common.add_argument("--mode", choices=("copy", "child"),
                        help="!-box instantiation mode (default: as in the file, else copy)")
    grid = common.add_mutually_exclusive_group()
    grid.add_argument("--uniform-grid", dest="grid", action="store_const", const="uniform")
    grid.add_argument("--per-equation-grid", dest="grid", action="store_const",
                      const="per-equation")
    common.set_defaults(grid="uniform")
    common.add_argument("--quotient", type=int, metavar="G",
                        help="treat ZX phase variables modulo Y^G = 1")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                        help="largest tensor size allowed during contraction")

    v = sub.add_parser("verify", parents=[common], help="build and check the verifying set")
    v.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--report", metavar="PATH", help="write a JSON report")
    v.add_argument("--up-to-scalar", action="store_true",
                   help="accept matrices that differ by a global scalar")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plan", parents=[common], help="print bounds and plan size only")
    pl.set_defaults(func=cmd_plan)
    return p


def _load(args, out):
    """Parse the file and build the plan; returns (family, plan) or an exit code."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_INPUT
    try:
        eq = parse_equation_file(text)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=out)
        return EXIT_INPUT
    if args.mode:
        eq = replace(eq, mode=args.mode)
    try:
        plan = build_plan(eq, Settings(args.grid, args.max_dim, args.quotient))
    except NotSeparated as exc:
        print(f"precondition failed: {exc}", file=out)
        side = eq.lhs if exc.side == "lhs" else eq.rhs
        for a, b, joins in separation_report(side):
            desc = ", ".join(f"{_short(x)}-{_short(y)} ({'separable' if ok else 'not separable'})"
                             for x, y, ok in joins)
            print(f"  ({a}, {b}) joined by {desc}", file=out)
        return EXIT_PRECONDITION
    except (PreconditionError, DimensionCapExceeded) as exc:
        print(f"precondition failed: {exc}", file=out)
        return EXIT_PRECONDITION
    except (FamVerifyError, ValueError) as exc:
        print(f"error: {exc}", file=out)
        return EXIT_INPUT
    return eq, plan


def _short(kind) -> str:
    return SHORT_NAME.get(kind, "slot") if kind else "slot"


def _print_bounds(plan, out):
    lang = plan.family.language
    if plan.removal_order:
        print("removal order: " + ", ".join(plan.removal_order), file=out)
    for label, n in sorted(plan.bounds.items()):
        print(f"N({label})={n}", file=out)
    for var, pts in plan.grids.items():
        print(f"|A({var})|={len(pts)}: " + ", ".join(format_value(lang, p) for p in pts),
              file=out)
    for w in plan.warnings:
        print(f"warning: {w}", file=out)


def _format_assignment(lang, a) -> str:
    parts = [f"{k}={n}" for k, n in a.boxes] + [f"{k}={format_value(lang, v)}"
                                                  for k, v in a.phases]
    return ", ".join(parts) if parts else "(no parameters)"


def cmd_plan(args, out=None) -> int:
    out = out or sys.stdout
    loaded = _load(args, out)
    if isinstance(loaded, int):
        return loaded
    _, plan = loaded
    _print_bounds(plan, out)
    print(f"plan size {len(plan)}", file=out)
    return EXIT_VERIFIED


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    loaded = _load(args, out)
    if isinstance(loaded, int):
        return loaded
    eq, plan = loaded
    _print_bounds(plan, out)
    report = run_plan(plan, args.tolerance, max(1, args.jobs), args.max_dim, args.up_to_scalar)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(report))
    lang = eq.language
    print(f"{report.checked} equations checked in {report.seconds:.2f}s", file=out)
    if report.verdict == VERIFIED:
        print("verified", file=out)
        return EXIT_VERIFIED
    if report.verdict == FALSIFIED:
        bad = next(r for r in report.records if not r.passed)
        print(f"falsified at {_format_assignment(lang, report.counterexample)} "
              f"(deviation {bad.deviation:.3g})", file=out)
        return EXIT_FALSIFIED
    print(f"precondition failed: {report.error}", file=out)
    return EXIT_PRECONDITION


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
