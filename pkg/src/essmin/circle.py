"""Archimedean integrals over the unit circle.

``phi(t)`` and ``psi(c, t)`` are averages of ``log+ |e^{i theta} + w|`` over
the circle. The only non-smooth points of the integrand are the angles where
``|e^{i theta} + w| = 1``; these are solved in closed form and the quadrature
runs only over the arc where the integrand is positive.

The value ``2 phi(-b/2a)`` also has a power series expansion (centre
``e^{i(pi + alpha)/2}``) whose remainder is bounded rigorously; see
:func:`series_omega_center`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import mpmath
import numpy as np

from essmin.quadrature import adaptive_gauss_legendre
from essmin.values import ValueWithError

DEFAULT_TOL = 1e-12
SERIES_TARGET = 1e-12
SERIES_CAP = 200

# Slack for rounding the extended-precision partial sum to a double.
ROUNDING_SLACK = 1e-15

_TWO_PI = 2.0 * math.pi
_EPS = 2.0**-52


class SeriesDivergenceError(ArithmeticError):
    """The convergence ratio of the centre series is not below 1."""


def _check_finite(*xs) -> None:
    for x in xs:
        if isinstance(x, complex):
            ok = math.isfinite(x.real) and math.isfinite(x.imag)
        else:
            ok = math.isfinite(x)
        if not ok:
            raise ValueError(f"non-finite argument {x!r}")


def circle_logplus(scale: complex, shift: complex, tol: float = DEFAULT_TOL) -> ValueWithError:
    """(1/2pi) * integral over [0, 2pi] of log+ |scale e^{i theta} + shift|.

    With s = |scale| and w = |shift|, the integrand is
    ``0.5 * log(s^2 + w^2 + 2 s w cos(theta - theta0))`` where
    ``theta0 = arg(shift) - arg(scale)``; it is positive exactly where
    ``cos(theta - theta0) > kappa = (1 - s^2 - w^2) / (2 s w)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale, shift = complex(scale), complex(shift)
    _check_finite(scale, shift)
    s, w = abs(scale), abs(shift)
    if s == 0.0:
        return ValueWithError(math.log(w) if w > 1 else 0.0, 0.0)
    if w == 0.0:
        return ValueWithError(math.log(s) if s > 1 else 0.0, 0.0)
    if s + w <= 1.0:
        # |scale e^{i theta} + shift| <= s + w <= 1 everywhere
        return ValueWithError(0.0, 0.0)
    theta0 = cmath.phase(shift) - cmath.phase(scale)
    kappa = (1.0 - s * s - w * w) / (2.0 * s * w)
    if kappa >= 1.0:
        return ValueWithError(0.0, 0.0)
    c0 = s * s + w * w
    c1 = 2.0 * s * w

    def integrand(theta):
        val = 0.5 * np.log(c0 + c1 * np.cos(theta - theta0))
        return np.maximum(val, 0.0)

    hi = theta0 + (math.pi if kappa <= -1.0 else math.acos(kappa))
    # symmetric about theta0: integrate one half and double it
    half, err = adaptive_gauss_legendre(integrand, theta0, hi, tol * math.pi)
    value = 2.0 * half / _TWO_PI
    err = 2.0 * err / _TWO_PI + 4 * _EPS * abs(value)
    return ValueWithError(float(value), float(err))


def phi(t: float, tol: float = DEFAULT_TOL) -> ValueWithError:
    """Average of log+ |e^{i theta} + t| over the unit circle."""
    _check_finite(t)
    return circle_logplus(1.0, float(t), tol)


def psi(c: complex, t: float, tol: float = DEFAULT_TOL) -> ValueWithError:
    """Average of log+ |e^{i theta} + c + t| over the unit circle."""
    _check_finite(complex(c), t)
    return circle_logplus(1.0, complex(c) + float(t), tol)


# ---------------------------------------------------------------------------
# Series at the centre t = -b/2a
# ---------------------------------------------------------------------------


def _epsilon_mp(c, n: int, t):
    """Closed form of epsilon_c(n, t) in the current mpmath precision."""
    j = mpmath.mpc(0, 1)
    pi = mpmath.pi
    total = (-1) ** n * (pi - c) * mpmath.expj(t * n)
    for k in range(n):
        m = n - k
        coeff = comb(n, k) * (-1) ** k
        total += coeff * (mpmath.expj(pi * m + t * k) - mpmath.expj(c * m + t * k)) / (j * m)
    return total


def _guard_bits(n: int) -> int:
    # |sum of binomial terms| <= 2^(n+1); keep 64 bits beyond the cancellation
    return 64 + n + 8


def epsilon_closed(c: float, n: int, t: float) -> complex:
    """epsilon_c(n, t) = integral over [c, pi] of (e^{i theta} - e^{i t})^n.

    Evaluates the binomial expansion with exact integer binomials. The
    expansion cancels catastrophically (terms up to 2^n times the result), so
    it is summed in extended precision and rounded once.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not (0.0 <= c <= math.pi):
        raise ValueError("c must lie in [0, pi]")
    with mpmath.workprec(_guard_bits(n)):
        val = _epsilon_mp(mpmath.mpf(c), n, mpmath.mpf(t))
        return complex(val)


def alpha_angle(a, b) -> float:
    """Angle of the first-quadrant intersection of the unit circle with the
    unit circle centred at b/2a: ``arccos(b / 4a)``."""
    ratio = Fraction(b) / Fraction(a)
    if not (0 < ratio < 4) or Fraction(a) <= 0:
        raise ValueError(f"b/a = {ratio} outside (0, 4)")
    return math.acos(float(ratio / 4))


def alpha_angle_arctan(a, b) -> float:
    """The same angle written as arctan(sqrt(16a^2 - b^2) / b)."""
    a, b = Fraction(a), Fraction(b)
    return math.atan(math.sqrt(float(16 * a * a - b * b)) / float(b))


def tail_bound(q: float, N: int, prefactor: float = 1.0) -> float:
    """prefactor * sum over n > N of q^n / n, i.e. the remainder of
    -log(1 - q) after N terms.

    The remainder is summed directly (no subtraction from -log(1 - q)), and
    the part beyond the last summed term is bounded by a geometric series.
    """
    if not (0.0 <= q < 1.0):
        raise ValueError(f"ratio {q} outside [0, 1): series not certified")
    if N < 0:
        raise ValueError("N must be non-negative")
    if q == 0.0:
        return 0.0
    terms = []
    n = N + 1
    term = q**n / n
    while term > 1e-19 * (terms[0] if terms else term) and n < N + 100000:
        terms.append(term)
        n += 1
        term = q**n / n
    rest = q**n / (n * (1.0 - q))
    total = math.fsum(terms) + rest
    return prefactor * total * (1.0 + 1e-14)


@dataclass(frozen=True)
class SeriesEvaluation:
    partial_sum: float
    tail_bound: float
    ratio: float
    terms: int
    alpha: float

    @property
    def certified(self) -> ValueWithError:
        """Enclosure of 2 phi(-b/2a)."""
        return ValueWithError(self.partial_sum, self.tail_bound + ROUNDING_SLACK)

    @property
    def upper(self) -> float:
        return self.partial_sum + self.tail_bound + ROUNDING_SLACK


def _series_setup(a: Fraction, b: Fraction):
    alpha = alpha_angle(a, b)
    beta = 0.5 * (math.pi + alpha)
    z0 = cmath.exp(1j * beta)
    q = float(2 * a) * abs(1 + z0) / abs(float(b) - float(2 * a) * z0)
    return alpha, beta, q


def series_omega_center(a, b, N: Optional[int] = None, target: float = SERIES_TARGET,
                        cap: int = SERIES_CAP) -> SeriesEvaluation:
    """Truncated centre series for 2 phi(-b/2a), valid for 0 < b/a < 4.

    ``N=None`` picks the smallest N (at most ``cap``) whose tail bound is
    below ``target``.
    """
    a, b = Fraction(a), Fraction(b)
    alpha, beta, q = _series_setup(a, b)
    if not q < 1.0:
        raise SeriesDivergenceError(f"convergence ratio {q} >= 1 for b/a = {b / a}")
    prefactor = 2.0 * (math.pi - alpha) / math.pi
    if N is None:
        N = 1
        while tail_bound(q, N, prefactor) >= target and N < cap:
            N += 1
    if N < 1:
        raise ValueError("N must be at least 1")

    with mpmath.workprec(_guard_bits(N)):
        pi = mpmath.pi
        a_mp = mpmath.mpf(a.numerator) / a.denominator
        b_mp = mpmath.mpf(b.numerator) / b.denominator
        al = mpmath.acos(b_mp / (4 * a_mp))
        be = (pi + al) / 2
        z0 = mpmath.expj(be)
        centre = b_mp / (2 * a_mp) - z0
        # main branch, no crossing: the centre lies in the lower half plane
        assert centre.imag < 0
        two_a = 2 * a_mp
        denom = b_mp - two_a * z0
        total = mpmath.log(centre) * (pi - al)
        ratio = two_a / denom
        power = mpmath.mpc(1)
        for n in range(1, N + 1):
            power *= ratio
            total -= power / n * _epsilon_mp(al, n, be)
        partial = float(2 / pi * total.real)

    return SeriesEvaluation(
        partial_sum=partial,
        tail_bound=tail_bound(q, N, prefactor),
        ratio=q,
        terms=N,
        alpha=alpha,
    )
