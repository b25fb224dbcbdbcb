"""``essmin`` command line: bounds, density thresholds and table reproduction.

Exit codes: 0 success, 1 inconsistent results (a lower bound above an upper
bound, or a failed reproduction row), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction

from essmin import __version__
from essmin.density import DensityResult, PreconditionError, density_threshold, gamma
from essmin.exact import prime_support
from essmin.report import (
    TABLES,
    Config,
    UsageError,
    analyze,
    parse_input,
    report_to_json,
    report_to_text,
    reproduce,
    rows_to_json,
    rows_to_text,
)

EXIT_OK, EXIT_INCONSISTENT, EXIT_USAGE = 0, 1, 2


def _real(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="essmin",
        description="Bounds on the essential minimum of h(alpha) + h(a*alpha + b).",
    )
    parser.add_argument("--version", action="version", version=f"essmin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=_real, default=None, help="quadrature tolerance (default 1e-12, env ESSMIN_TOL)")
        p.add_argument("--format", choices=("text", "json"), default="text")

    b = sub.add_parser("bounds", help="lower, upper and density bounds for one (a, b)")
    b.add_argument("--a", required=True, help="rational n/d or Gaussian rational like 1/2+i")
    b.add_argument("--b", required=True)
    b.add_argument("--t", type=_real, default=None, help="also evaluate Omega at this t")
    b.add_argument("--grid", type=int, default=None, help="grid size for circle minima (default 4096)")
    b.add_argument("--series-cap", type=int, default=None, help="max series terms (default 200)")
    common(b)

    d = sub.add_parser("density", help="density threshold Gamma for rational (a, b)")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.add_argument("--x", type=_real, default=None, help="evaluate at this x instead of minimizing")
    d.add_argument("--radii", default=None, help="comma separated positive rationals, one per prime of S")
    common(d)

    r = sub.add_parser("reproduce", help="recompute a reference table")
    r.add_argument("--table", required=True, help="one of " + ", ".join(TABLES))
    r.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _usage(err: UsageError) -> int:
    print(f"essmin: error: {err.problem}: {err.token!r}", file=sys.stderr)
    print(f"hint: {err.hint}", file=sys.stderr)
    return EXIT_USAGE


def _cmd_bounds(args) -> int:
    config = Config.from_env(tol=args.tol, grid_size=args.grid, series_cap=args.series_cap)
    report = analyze(args.a, args.b, config, t=args.t)
    out = report_to_json(report) if args.format == "json" else report_to_text(report)
    sys.stdout.write(out)
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def _cmd_density(args) -> int:
    import json

    config = Config.from_env(tol=args.tol)
    a, b = parse_input(args.a, "a"), parse_input(args.b, "b")
    if not isinstance(a, Fraction) or not isinstance(b, Fraction):
        raise UsageError(f"{args.a} {args.b}", "density needs rational a and b", "drop the imaginary parts")
    if a == 0:
        raise UsageError(args.a, "a must be nonzero", "pick a != 0")
    primes = prime_support(a, b)
    radii = None
    if args.radii is not None:
        try:
            radii = [Fraction(x) for x in args.radii.split(",") if x.strip()]
        except (ValueError, ZeroDivisionError):
            raise UsageError(args.radii, "cannot parse --radii", "e.g. --radii 1,1/2") from None
        if len(radii) != len(primes) or any(r <= 0 for r in radii):
            raise UsageError(args.radii, f"need {len(primes)} positive radii for primes {primes}",
                             "give one positive rational per prime, comma separated")
    if args.x is None and radii is None:
        res = density_threshold(a, b, config.tol)
    else:
        x = 0.0 if args.x is None else args.x
        value = gamma(a, b, x, radii, config.tol)
        radii = tuple(radii) if radii else tuple(Fraction(1) for _ in primes)
        res = DensityResult(value, x, radii, tuple(primes))
    if args.format == "json":
        payload = {
            "a": str(a), "b": str(b),
            "threshold": {"value": repr(res.threshold.value), "abs_error": repr(res.threshold.abs_error)},
            "x_star": repr(res.x_star),
            "radii": [str(r) for r in res.radii],
            "primes": list(res.primes),
            "interval_note": res.interval_note,
            "version": __version__,
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(
            f"Gamma({a}, {b}) = {res.threshold.value:.15f} +/- {res.threshold.abs_error:.1e} "
            f"at x = {res.x_star!r}, radii {[str(r) for r in res.radii]} over primes {list(res.primes)}\n"
            f"{res.interval_note}\n"
        )
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    rows = reproduce(args.table)
    out = rows_to_json(args.table, rows) if args.format == "json" else rows_to_text(args.table, rows)
    sys.stdout.write(out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_INCONSISTENT


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"bounds": _cmd_bounds, "density": _cmd_density, "reproduce": _cmd_reproduce}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return handlers[args.command](args)
    except UsageError as err:
        return _usage(err)
    except PreconditionError as err:
        print(f"essmin: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
