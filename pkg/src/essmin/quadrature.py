"""Adaptive Gauss-Legendre quadrature on panels with recursive bisection."""

from __future__ import annotations

from typing import Callable, Tuple

import numpy as np

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)

MAX_DEPTH = 40


def _panel(f, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return half * float(np.dot(_WEIGHTS, f(mid + half * _NODES)))


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float
) -> Tuple[float, float]:
    """Integrate a vectorized ``f`` over ``[a, b]``.

    Each panel is accepted when its 15-point rule agrees with the sum of the
    rules on its two halves to within the panel's share of ``tol``. Returns
    ``(integral, error_estimate)``; the estimate is the sum of the accepted
    panel discrepancies, not a rigorous bound.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0, 0.0
    total_len = abs(b - a)
    whole = _panel(f, a, b)
    stack = [(a, b, whole, 0)]
    result = 0.0
    err = 0.0
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid)
        right = _panel(f, mid, hi)
        fine = left + right
        diff = abs(fine - coarse)
        share = tol * abs(hi - lo) / total_len
        if diff <= share or depth >= MAX_DEPTH:
            result += fine
            err += diff
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return result, err
