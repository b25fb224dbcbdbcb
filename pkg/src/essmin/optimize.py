import math
from typing import Callable, Sequence, Tuple

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_min(f: Callable[[float], float], lo: float, hi: float,
                       xtol: float = 1e-10) -> Tuple[float, float]:
    """Golden-section search for a minimum of a unimodal ``f`` on [lo, hi].

    Returns ``(x, f(x))`` for the best point evaluated, endpoints included.
    """
    if lo > hi:
        lo, hi = hi, lo
    best = min(((lo, f(lo)), (hi, f(hi))), key=lambda p: p[1])
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    for p in ((c, fc), (d, fd)):
        if p[1] < best[1]:
            best = p
    return best


def golden_section_max(f, lo, hi, xtol=1e-10):
    x, v = golden_section_min(lambda y: -f(y), lo, hi, xtol)
    return x, -v


def bracketed_min(f: Callable[[float], float], lo: float, hi: float,
                  candidates: Sequence[float] = (), grid: int = 32,
                  xtol: float = 1e-10) -> Tuple[float, float]:
    """Global-ish minimum on [lo, hi]: coarse grid plus candidates, then a
    golden-section refinement around the best sample.

    Ties go to the earliest candidate, so exact special points listed first
    win against search noise.
    """
    pts = list(candidates) + [lo + (hi - lo) * k / grid for k in range(grid + 1)]
    vals = [f(x) for x in pts]
    i = min(range(len(pts)), key=lambda k: (vals[k], k))
    x0 = pts[i]
    step = (hi - lo) / grid
    x1, v1 = golden_section_min(f, max(lo, x0 - step), min(hi, x0 + step), xtol)
    # keep the sampled point unless refinement beats it beyond rounding noise
    if v1 < vals[i] - 8 * 2.0**-52 * max(1.0, abs(vals[i])):
        return x1, v1
    return x0, vals[i]
