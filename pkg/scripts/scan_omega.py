"""Scan phi(t) + phi(t + r) over t for several ratios r = b/a.

Below r = 4 the minimum sits at the centre t = -r/2; from r = 4 on the centre
turns into a local maximum and the minimum moves to t = 0 (or t = -r), with
value log r. The scan prints the sampled minimizer, the centre value and
log r side by side.
"""

import argparse
import math

import numpy as np

from essmin.circle import phi


def scan(r, points):
    ts = np.linspace(-(1 + r), 1.0, points)
    vals = np.array([phi(t).value + phi(t + r).value for t in ts])
    i = int(np.argmin(vals))
    return ts[i], vals[i], phi(-r / 2).value * 2


def main():
    parser = argparse.ArgumentParser(description="scan the archimedean part of Omega")
    parser.add_argument("--ratios", default="0.5,1,2,3,3.5,3.9,4,4.5,6")
    parser.add_argument("--points", type=int, default=401)
    args = parser.parse_args()
    print(f"{'r':>6} {'argmin t':>10} {'min':>14} {'centre':>14} {'log r':>10}")
    for r in (float(x) for x in args.ratios.split(",")):
        t, v, c = scan(r, args.points)
        lr = math.log(r) if r > 0 else float("nan")
        print(f"{r:6.2f} {t:10.4f} {v:14.10f} {c:14.10f} {lr:10.6f}")


if __name__ == "__main__":
    main()
