"""Upper bounds: the functional Omega_{a,b}(t) and its minimization over t.

Every value of Omega_{a,b}(t) bounds the essential minimum of
h(alpha) + h(a alpha + b) from above; for rational parameters

    Omega_{a,b}(t) = Delta(a, b) + phi(t) + phi(t + b/a).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from essmin.circle import (
    DEFAULT_TOL,
    SERIES_CAP,
    SERIES_TARGET,
    phi,
    psi,
    series_omega_center,
)
from essmin.exact import GaussianRational, as_fraction, delta, weil_height, LOG_TERM_ERROR
from essmin.optimize import bracketed_min
from essmin.values import ValueWithError


class UpperMethod(str, enum.Enum):
    CLOSED_FORM_B0 = "closed_form_b0"
    CLOSED_FORM_LARGE_RATIO = "closed_form_large_ratio"
    SERIES_CENTER = "series_center"
    QUADRATURE_MIN = "quadrature_min"


CERTIFIED_METHODS = {
    UpperMethod.CLOSED_FORM_B0,
    UpperMethod.CLOSED_FORM_LARGE_RATIO,
    UpperMethod.SERIES_CENTER,
}


@dataclass(frozen=True)
class UpperBoundResult:
    value: ValueWithError
    t_star: float
    method: UpperMethod
    certified: bool
    series_terms: Optional[int] = None

    def __post_init__(self):
        if self.certified and self.method not in CERTIFIED_METHODS:
            raise ValueError(f"method {self.method.value} cannot be certified")

    @property
    def upper(self) -> float:
        """The reported bound: value plus its error radius."""
        return self.value.upper


def normalize_problem(a, b) -> Tuple[Fraction, Fraction]:
    """(|a|, |b|); the essential minimum is invariant under both sign flips."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a = 0 gives the degenerate family h(alpha) + h(b)")
    return abs(a), abs(b)


def omega(a, b, t: float, tol: float = DEFAULT_TOL) -> ValueWithError:
    """Delta(a, b) + phi(t) + phi(t + b/a) for rational a != 0, b."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    return delta(a, b) + phi(t, tol) + phi(t + float(b / a), tol)


def omega_general(a, b, t: float, tol: float = DEFAULT_TOL) -> ValueWithError:
    """Delta(a, b) + phi(t) + sum over sigma of Psi^sigma(t), with sigma
    running over {id} for rational input and {id, conj} otherwise."""
    ga, gb = GaussianRational.of(a), GaussianRational.of(b)
    if ga.is_zero():
        raise ValueError("a must be nonzero")
    sigmas = [lambda z: z] if ga.is_real() and gb.is_real() else [lambda z: z, GaussianRational.conj]
    total = delta(a, b) + phi(t, tol)
    for sigma in sigmas:
        total = total + psi(complex(sigma(gb) / sigma(ga)), t, tol)
    return total


def omega_min(a, b, tol: float = DEFAULT_TOL, series_target: float = SERIES_TARGET,
              series_cap: int = SERIES_CAP) -> UpperBoundResult:
    """Best upper bound over t for rational a != 0, b (signs normalized).

    b = 0 and b/a >= 4 have closed forms at t = 0. Otherwise t is searched
    on [-(1 + b/a), 1]; when the centre t = -b/2a is (to within 2 tol) the
    minimizer, the certified centre series replaces the quadrature value.
    """
    a, b = normalize_problem(a, b)
    d = delta(a, b)
    if b == 0:
        h = weil_height(a)
        assert abs(h - d.value) <= 1e-12 * max(1.0, h)
        return UpperBoundResult(d, 0.0, UpperMethod.CLOSED_FORM_B0, True)
    ratio = b / a
    if ratio >= 4:
        val = d + ValueWithError(math.log(ratio), LOG_TERM_ERROR)
        return UpperBoundResult(val, 0.0, UpperMethod.CLOSED_FORM_LARGE_RATIO, True)

    r = float(ratio)
    centre = -r / 2

    def f(t):
        return phi(t, tol).value + phi(t + r, tol).value

    t_best, v_best = bracketed_min(f, -(1 + r), 1.0, candidates=(centre, 0.0))
    v_centre = f(centre)
    if v_best >= v_centre - 2 * tol:
        s = series_omega_center(a, b, target=series_target, cap=series_cap)
        return UpperBoundResult(
            d + s.certified, centre, UpperMethod.SERIES_CENTER, True, series_terms=s.terms
        )
    val = omega(a, b, t_best, tol)
    return UpperBoundResult(val, t_best, UpperMethod.QUADRATURE_MIN, False)


def upper_bound_gaussian(a, b, tol: float = DEFAULT_TOL) -> UpperBoundResult:
    """Delta(a, b) + phi(Re(b/a)) + 2 phi(Im(b/a)) for a, b in Q(i).

    This is Omega_{a,b}(t) at t = -Re(b/a), using that the conjugate term
    integrates to the same value and that the averages are rotation
    invariant.
    """
    ga, gb = GaussianRational.of(a), GaussianRational.of(b)
    if ga.is_zero():
        raise ValueError("a must be nonzero")
    if ga.is_real() and gb.is_real():
        raise ValueError("a and b are both rational; use omega_min for the rational case")
    w = gb / ga
    # phi is even; evaluating at |.| makes conjugate inputs give identical floats
    val = delta(ga, gb) + phi(abs(float(w.re)), tol) + phi(abs(float(w.im)), tol).scale(2.0)
    return UpperBoundResult(val, -float(w.re), UpperMethod.QUADRATURE_MIN, False)
