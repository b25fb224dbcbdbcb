"""Density thresholds: above Gamma_{a,b}(x, r) the values of
h(alpha) + h(a alpha + b) are dense.

Gamma combines p-adic balls of radius r_i at the primes of S_{a,b} with an
archimedean circle of radius 1/(r_1 ... r_s) centred at -x:

    Gamma = sum_i [log+ r_i + log+ max(|a|_p r_i, |b|_p)]
            + avg log+ |e^{i theta}/R + x| + avg log+ |a e^{i theta}/R + b + a x|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from essmin.circle import DEFAULT_TOL, circle_logplus
from essmin.exact import LOG_TERM_ERROR, as_fraction, delta, padic_abs, prime_support
from essmin.optimize import bracketed_min
from essmin.values import ValueWithError

DENSE_NOTE = "image dense in [threshold, oo)"


class PreconditionError(ValueError):
    """An input lies outside the hypotheses of a closed-form statement."""


@dataclass(frozen=True)
class DensityResult:
    threshold: ValueWithError
    x_star: float
    radii: Tuple[Fraction, ...]
    primes: Tuple[int, ...]
    interval_note: str = DENSE_NOTE

    def __post_init__(self):
        if len(self.radii) != len(self.primes):
            raise ValueError("one radius per prime of S_{a,b}")
        if self.threshold.value < 0:
            raise ValueError("threshold must be non-negative")


def _check_radii(radii, primes) -> Tuple[Fraction, ...]:
    if radii is None:
        return tuple(Fraction(1) for _ in primes)
    radii = tuple(Fraction(r) for r in radii)
    if len(radii) != len(primes):
        raise ValueError(
            f"expected {len(primes)} radii (one per prime in {list(primes)}), got {len(radii)}"
        )
    for r in radii:
        if r <= 0:
            raise ValueError(f"radius {r} is not positive")
    return radii


def gamma(a, b, x: float, radii: Optional[Sequence] = None, tol: float = DEFAULT_TOL,
          variant: str = "ax") -> ValueWithError:
    """Gamma_{a,b}(x, r_1, ..., r_s), radii ordered like ``prime_support(a, b)``.

    ``variant="x"`` uses the shift b + x in the second integrand instead of
    b + a x; the two agree when |a| = 1.
    """
    if variant not in ("ax", "x"):
        raise ValueError("variant must be 'ax' or 'x'")
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    primes = prime_support(a, b)
    radii = _check_radii(radii, primes)

    finite, terms = 0.0, 0
    for p, r in zip(primes, radii):
        if r > 1:
            finite += math.log(r)
            terms += 1
        worst = max(padic_abs(a, p) * r, padic_abs(b, p))
        if worst > 1:
            finite += math.log(worst)
            terms += 1

    R = math.prod(float(r) for r in radii)
    x = float(x)
    shift = float(b) + (float(a) * x if variant == "ax" else x)
    arch = circle_logplus(1.0 / R, x, tol) + circle_logplus(float(a) / R, shift, tol)
    return ValueWithError(finite, terms * LOG_TERM_ERROR) + arch


def density_threshold(a, b, tol: float = DEFAULT_TOL) -> DensityResult:
    """Minimize Gamma over x with all radii equal to 1."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    primes = tuple(prime_support(a, b))
    r = float(b / a)

    def f(x):
        return gamma(a, b, x, None, tol).value

    lo, hi = min(0.0, -r) - 1.0, max(0.0, -r) + 1.0
    x_star, _ = bracketed_min(f, lo, hi, candidates=(-r / 2, 0.0, -(1 + r) / 2))
    x_star = x_star + 0.0  # no negative zero in reports
    value = gamma(a, b, x_star, None, tol)
    return DensityResult(value, x_star, tuple(Fraction(1) for _ in primes), primes)


def interval_thm43(a, b) -> Tuple[float, float]:
    """(log((|b| - 1)/|a|), log(|b|/|a|)) for |a| >= 1, |b| - |a| > 1, |b/a| >= 4.

    The upper end is Omega at t = 0 without the correction Delta(a, b); it is
    a valid bound only when Delta(a, b) = 0, and a warning is issued
    otherwise.
    """
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise PreconditionError("a must be nonzero")
    A, B = abs(a), abs(b)
    if A < 1:
        raise PreconditionError(f"|a| >= 1 fails: |a| = {A}")
    if not B - A > 1:
        raise PreconditionError(f"|b| - |a| > 1 fails: |b| - |a| = {B - A}")
    if B / A < 4:
        raise PreconditionError(f"|b/a| >= 4 fails: |b/a| = {B / A}")
    d = delta(a, b).value
    if d > 0:
        warnings.warn(
            f"Delta({a}, {b}) = {d:.6g} > 0: log(|b|/|a|) understates Omega(0) = "
            f"Delta + log(|b|/|a|) and is not a proven upper bound",
            stacklevel=2,
        )
    return math.log((B - 1) / A), math.log(B / A)
