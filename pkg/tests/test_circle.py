import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmin.circle import (
    alpha_angle,
    alpha_angle_arctan,
    circle_logplus,
    epsilon_closed,
    phi,
    psi,
    series_omega_center,
    tail_bound,
)
from essmin.quadrature import adaptive_gauss_legendre

reals = st.floats(min_value=-6.0, max_value=6.0, allow_nan=False)


def mp_circle_logplus(scale, shift):
    """Oracle: mpmath quadrature of log+|scale e^{i theta} + shift| split at
    the points where the integrand crosses zero."""
    scale, shift = complex(scale), complex(shift)
    s, w = abs(scale), abs(shift)
    mpmath.mp.dps = 30

    def f(th):
        return max(mpmath.mpf(0), mpmath.log(abs(scale * mpmath.expj(th) + shift)))

    if s + w <= 1:
        return 0.0
    pts = [0]
    if s > 0 and w > 0:
        kappa = (1 - s * s - w * w) / (2 * s * w)
        theta0 = cmath.phase(shift) - cmath.phase(scale)
        if -1 < kappa < 1:
            d = math.acos(kappa)
            pts += sorted(((theta0 + d) % (2 * math.pi), (theta0 - d) % (2 * math.pi)))
    pts.append(2 * math.pi)
    return float(mpmath.quad(f, pts) / (2 * mpmath.pi))


@settings(max_examples=100, deadline=None)
@given(reals)
def test_phi_symmetric(t):
    assert phi(t).value == pytest.approx(phi(-t).value, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=2.0, max_value=1e6))
def test_phi_is_log_outside_disc(t):
    assert phi(t).value == pytest.approx(math.log(t), abs=1e-10)
    assert phi(-t).value == pytest.approx(math.log(t), abs=1e-10)


def test_phi_zero_and_known_values():
    assert phi(0.0).value == 0.0
    # Mahler measure of x + 1 is 0 by Jensen: the average of log|e^{it} + 1| vanishes,
    # so phi(1) is the mean of the positive part only
    assert phi(1.0).value == pytest.approx(mp_circle_logplus(1, 1), abs=1e-12)
    assert 2 * phi(-0.5).value == pytest.approx(0.3194342924687605, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(reals)
def test_phi_matches_mpmath(t):
    assert phi(t).value == pytest.approx(mp_circle_logplus(1, t), abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False))
def test_circle_logplus_matches_mpmath(scale, shift):
    got = circle_logplus(scale, shift)
    assert got.value == pytest.approx(mp_circle_logplus(scale, shift), abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False), reals)
def test_psi_depends_only_on_modulus(c, t):
    assert psi(c, t).value == pytest.approx(phi(abs(c + t)).value, abs=1e-12)


def test_circle_logplus_degenerate():
    assert circle_logplus(0, 3).value == pytest.approx(math.log(3))
    assert circle_logplus(0.5, 0).value == 0
    assert circle_logplus(0.2, 0.3).value == 0  # disc never leaves the unit disc
    with pytest.raises(ValueError):
        circle_logplus(1, float("nan"))


def mp_epsilon(c, n, t):
    mpmath.mp.dps = 30
    f = lambda th: (mpmath.expj(th) - mpmath.expj(t)) ** n
    return complex(mpmath.quad(f, [c, mpmath.pi]))


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=math.pi), st.integers(min_value=1, max_value=10),
       st.floats(min_value=-4.0, max_value=4.0))
def test_epsilon_closed_form_vs_quadrature(c, n, t):
    got = epsilon_closed(c, n, t)
    assert abs(got - mp_epsilon(c, n, t)) <= 1e-9


def test_epsilon_large_n_does_not_cancel_away():
    # the binomial sum has terms near 2^40 times the result
    c, n, t = 1.2, 40, 2.0
    assert abs(epsilon_closed(c, n, t) - mp_epsilon(c, n, t)) <= 1e-9 * max(1, abs(mp_epsilon(c, n, t)))


def test_epsilon_argument_checks():
    with pytest.raises(ValueError):
        epsilon_closed(1.0, 0, 0.0)
    with pytest.raises(ValueError):
        epsilon_closed(4.0, 2, 0.0)


@settings(max_examples=50)
@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(399, 100)))
def test_alpha_angle_two_forms(r):
    assert alpha_angle(1, r) == pytest.approx(alpha_angle_arctan(1, r), abs=1e-13)


def test_alpha_angle_domain():
    with pytest.raises(ValueError):
        alpha_angle(1, 4)
    with pytest.raises(ValueError):
        alpha_angle(1, 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.95), st.integers(min_value=0, max_value=60))
def test_tail_bound_vs_log_oracle(q, N):
    mpmath.mp.dps = 40
    qm = mpmath.mpf(q)
    # q <= 0.95: terms beyond N + 2000 are below 1e-44 of the first
    exact = mpmath.fsum(qm**n / n for n in range(N + 1, N + 2000))
    got = tail_bound(q, N)
    assert got >= float(exact) * (1 - 1e-13)
    assert got <= float(exact) * (1 + 1e-12) + 1e-300


def test_tail_bound_rejects_divergent_ratio():
    with pytest.raises(ValueError):
        tail_bound(1.0, 5)


def test_series_reference_partial_sum_and_tail():
    s = series_omega_center(1, 1, N=20)
    assert s.partial_sum == pytest.approx(0.3194345111561, rel=1e-13)
    assert s.tail_bound <= 0.0000145758


def mp_two_phi_centre(r):
    mpmath.mp.dps = 30
    t = -mpmath.mpf(float(r)) / 2
    f = lambda th: max(mpmath.mpf(0), mpmath.log(abs(mpmath.expj(th) + t)))
    kappa = (1 - 1 - t * t) / (2 * abs(t))
    d = mpmath.acos(kappa)
    return float(2 * mpmath.quad(f, [0, mpmath.pi - d, mpmath.pi + d, 2 * mpmath.pi]) / (2 * mpmath.pi))


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10), max_value=Fraction(39, 10), max_denominator=20))
def test_series_enclosure_contains_true_value(r):
    s = series_omega_center(1, r)
    truth = mp_two_phi_centre(r)
    assert s.certified.lower - 1e-13 <= truth <= s.certified.upper
    assert s.certified.contains(truth) or abs(s.partial_sum - truth) < 1e-13


@pytest.mark.parametrize("N", [3, 7, 15])
def test_series_truncated_is_upper_bound(N):
    for r in (1, 2, 3):
        assert series_omega_center(1, r, N=N).upper >= 2 * phi(-r / 2).value - 1e-13


def test_adaptive_quadrature_polynomial_and_singularity():
    val, err = adaptive_gauss_legendre(lambda x: x**5 - 2 * x, 0.0, 2.0, 1e-13)
    assert val == pytest.approx(64 / 6 - 4, abs=1e-12)
    val, _ = adaptive_gauss_legendre(np.sqrt, 0.0, 1.0, 1e-11)
    assert val == pytest.approx(2 / 3, abs=1e-10)
