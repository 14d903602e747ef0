"""Command line front end.

Three subcommands: ``analyze`` emits a JSON report of moments, the
optimal posted price, and both lower bounds for one distribution;
``curve`` dumps the revenue curve as CSV for plotting; ``verify`` runs
the randomized mixture suite and prints a slack table.

Exit codes: 0 all good, 1 usage or parse problems, 2 a numerical bound
check failed.  Identical invocations produce byte-identical stdout: all
randomness hangs off ``--seed`` and the reported runtime stays at 0
unless ``--timings`` is passed.  Output is plain text with no ANSI
color, so ``NO_COLOR`` is honored by construction.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__, bounds, moments, revenue
from .dsl import parse_spec
from .errors import (
    BoundViolationError,
    EmpiricalFileError,
    InfiniteExpectationError,
    InternalConsistencyError,
    SpecError,
)
from .report import ReportEnvelope, canonical_json, format_sig

__all__ = ["main"]

_SLACK_TOL = 1e-6  # bound checks allow slack down to -tol * max(1, scale)


def _fail_usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 1


def _build_distribution(spec_text: str):
    spec = parse_spec(spec_text)
    return spec.build()


def _cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    try:
        d = _build_distribution(args.spec)
    except (SpecError, EmpiricalFileError) as exc:
        return _fail_usage(str(exc))

    code = 0
    try:
        mom = moments.moments_report(d, n=args.mc_n, seed=args.seed)
        opt = revenue.optimal_revenue(d, grid_size=args.grid_size)
        rep1 = bounds.theorem1_report(d, opt=opt, g=mom.geometric_expectation)
        reports = {"moments": mom, "optimal_revenue": opt, "theorem1": rep1}
        if rep1.thm1_slack < -_SLACK_TOL * max(1.0, rep1.G):
            code = 2
        try:
            rep2 = bounds.theorem2_report(d, opt=opt, g=mom.geometric_expectation)
            reports["theorem2"] = rep2
            if rep2.thm2_slack < -_SLACK_TOL * max(1.0, rep2.expectation):
                code = 2
        except InfiniteExpectationError as exc:
            reports["theorem2"] = {"skipped": str(exc)}
    except (InternalConsistencyError, BoundViolationError) as exc:
        print(f"bound check failed: {exc}", file=sys.stderr)
        return 2

    runtime_ms = int(round((time.perf_counter() - t0) * 1000)) if args.timings else 0
    env = ReportEnvelope(args.spec, args.seed, reports, __version__, runtime_ms)
    sys.stdout.write(canonical_json(env))
    if code:
        print("bound check failed: negative slack beyond tolerance", file=sys.stderr)
    return code


def _cmd_curve(args) -> int:
    try:
        d = _build_distribution(args.spec)
    except (SpecError, EmpiricalFileError) as exc:
        return _fail_usage(str(exc))
    try:
        prices, right, left = revenue.revenue_curve(
            d, args.pmin, args.pmax, args.points, log=args.log
        )
    except ValueError as exc:
        return _fail_usage(str(exc))
    out = ["price,revenue_right,revenue_left"]
    for p, r, l in zip(prices, right, left):
        out.append(f"{format_sig(p)},{format_sig(r)},{format_sig(l)}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _fmt_slack(x) -> str:
    if x is None:
        return "-"
    return format_sig(x)


def _cmd_verify(args) -> int:
    families = None
    if args.families:
        families = [f.strip() for f in args.families.split(",") if f.strip()]
        known = {"pointmass", "uniform", "pareto", "lognormal", "equalrev", "exponential"}
        bad = sorted(set(families) - known)
        if bad:
            return _fail_usage(f"unknown families: {', '.join(bad)}")
    try:
        res = bounds.verify_suite(args.n, seed=args.seed, families=families)
    except (InternalConsistencyError, BoundViolationError) as exc:
        print(f"bound check failed: {exc}", file=sys.stderr)
        return 2

    if args.json:
        env = ReportEnvelope(
            f"<random suite n={args.n}>", args.seed, {"verify": res}, __version__, 0
        )
        sys.stdout.write(canonical_json(env))
    else:
        lines = [f"# verify seed={args.seed} n={res.n_total}"]
        lines.append("idx   status  eq  thm1_slack        thm2_slack        spec")
        for i, c in enumerate(res.checks):
            status = "ok  " if (c.thm1_ok and c.thm2_ok) else "FAIL"
            eq = "eq" if c.equality_flag else "--"
            lines.append(
                f"{i:<5d} {status}    {eq}  {_fmt_slack(c.thm1_slack):<17s} "
                f"{_fmt_slack(c.thm2_slack):<17s} {c.spec_text}"
            )
        lines.append(f"worst thm1 slack: {_fmt_slack(res.worst_thm1_slack)}")
        lines.append(f"worst thm2 slack: {_fmt_slack(res.worst_thm2_slack)}")
        lines.append(f"result: {res.n_pass}/{res.n_total} pass")
        sys.stdout.write("\n".join(lines) + "\n")
    return 0 if res.passed else 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pricebound",
        description="Optimal posted-price revenue and its lower bounds "
        "for positive valuation distributions.",
    )
    ap.add_argument("--version", action="version", version=f"pricebound {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full JSON report for one distribution")
    a.add_argument("spec", help='distribution expression, e.g. \'equalrev(c=1)\'')
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--grid-size", type=int, default=4096)
    a.add_argument("--mc-n", type=int, default=10**5, help="Monte Carlo cross-check draws")
    a.add_argument("--timings", action="store_true", help="report real runtime_ms")
    a.set_defaults(fn=_cmd_analyze)

    c = sub.add_parser("curve", help="revenue curve CSV over a price range")
    c.add_argument("spec")
    c.add_argument("--pmin", type=float, required=True)
    c.add_argument("--pmax", type=float, required=True)
    c.add_argument("--points", type=int, default=200)
    c.add_argument("--log", action="store_true", help="log-spaced price grid")
    c.set_defaults(fn=_cmd_curve)

    v = sub.add_parser("verify", help="randomized bound suite over mixture laws")
    v.add_argument("--n", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--families", help="comma-separated component families")
    v.add_argument("--json", action="store_true", help="JSON envelope instead of a table")
    v.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; remap to the 0/1/2 contract
        code = exc.code if isinstance(exc.code, int) else 0
        return 1 if code not in (0,) else 0
    try:
        return args.fn(args)
    except ValueError as exc:
        return _fail_usage(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
