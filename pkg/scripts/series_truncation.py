"""Certified value of 2 phi(-r/2) from the centre series as a function of N.

For each ratio the table lists the partial sum, the rigorous tail bound and
their sum, plus the first N whose certified total drops below a given
threshold (if one is supplied).
"""

import argparse
from fractions import Fraction

from essmin.circle import series_omega_center


def main():
    parser = argparse.ArgumentParser(description="truncation study for the centre series")
    parser.add_argument("--ratio", default="3", help="b/a as a rational, in (0, 4)")
    parser.add_argument("--max-n", type=int, default=30)
    parser.add_argument("--threshold", type=float, default=None,
                        help="report the first N whose certified total is below this")
    args = parser.parse_args()
    r = Fraction(args.ratio)
    first = None
    print(f"{'N':>4} {'partial':>18} {'tail':>12} {'total':>18}")
    for n in range(1, args.max_n + 1):
        s = series_omega_center(1, r, N=n)
        print(f"{n:4d} {s.partial_sum:18.13f} {s.tail_bound:12.3e} {s.upper:18.13f}")
        if args.threshold is not None and first is None and s.upper <= args.threshold:
            first = n
    if args.threshold is not None:
        print(f"first N with total <= {args.threshold}: {first}")


if __name__ == "__main__":
    main()
