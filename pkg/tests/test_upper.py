import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmin.circle import phi
from essmin.exact import GaussianRational, delta, weil_height
from essmin.upper import (
    UpperBoundResult,
    UpperMethod,
    omega,
    omega_general,
    omega_min,
    upper_bound_gaussian,
)
from essmin.values import ValueWithError

small_nonzero = st.builds(
    Fraction, st.integers(min_value=-12, max_value=12).filter(bool), st.integers(min_value=1, max_value=6)
)
small = st.builds(Fraction, st.integers(min_value=-12, max_value=12), st.integers(min_value=1, max_value=6))


@pytest.mark.parametrize(
    "a, b, truth",
    [
        (1, 1, 0.3194342924687605),
        (1, 2, 0.646131894438901),
        (1, 3, 0.9908871057620952),
    ],
)
def test_centre_series_brackets_true_value(a, b, truth):
    res = omega_min(a, b)
    assert res.method is UpperMethod.SERIES_CENTER and res.certified
    assert res.t_star == -b / (2 * a)
    assert res.value.lower - 1e-13 <= truth <= res.upper


@pytest.mark.parametrize("a, b", [(1, 4), (1, 5), (2, 9), (Fraction(7, 15), Fraction(125, 18))])
def test_large_ratio_closed_form_matches_quadrature(a, b):
    res = omega_min(a, b)
    assert res.method is UpperMethod.CLOSED_FORM_LARGE_RATIO
    quad = omega(a, b, 0.0)
    assert res.value.value == pytest.approx(quad.value, abs=1e-10)


@pytest.mark.parametrize("a", [2, Fraction(3, 2), Fraction(7, 15), -5])
def test_b_zero_gives_height(a):
    res = omega_min(a, 0)
    assert res.method is UpperMethod.CLOSED_FORM_B0
    assert res.value.value == pytest.approx(weil_height(a), abs=1e-13)


def test_normalization_rejects_zero_a():
    with pytest.raises(ValueError):
        omega_min(0, 1)


@settings(max_examples=25, deadline=None)
@given(small_nonzero, small)
def test_sign_invariance(a, b):
    ref = omega_min(a, b).value.value
    for sa, sb in ((-a, b), (a, -b), (-a, -b)):
        assert omega_min(sa, sb).value.value == ref


@settings(max_examples=25, deadline=None)
@given(small_nonzero, small, st.floats(min_value=-5, max_value=5))
def test_minimum_not_above_any_sample(a, b, t):
    # the minimizer is searched after normalizing to a, b >= 0
    res = omega_min(a, b)
    sample = omega(abs(a), abs(b), t)
    assert res.value.value <= sample.value + 1e-10


@settings(max_examples=25, deadline=None)
@given(small_nonzero, small, st.floats(min_value=-3, max_value=3))
def test_omega_general_agrees_on_rationals(a, b, t):
    assert omega_general(a, b, t).value == pytest.approx(omega(a, b, t).value, abs=1e-12)


def test_bimodal_regime_not_fooled():
    # for b/a just below 4 the centre is still the minimizer; the archimedean
    # part approaches the closed form log 4 from below
    a, b = 1, Fraction(399, 100)
    below = omega_min(a, b).value.value - delta(a, b).value
    assert below < math.log(4)
    assert math.log(4) - below < 1e-2


def test_gaussian_examples():
    i = GaussianRational(0, 1)
    assert upper_bound_gaussian(i, 2 * i).value.value == pytest.approx(math.log(2), abs=1e-10)
    res = upper_bound_gaussian(GaussianRational(1, 1), GaussianRational(2, 2))
    assert res.value.value == pytest.approx(2 * math.log(2), abs=1e-10)
    assert not res.certified


gauss = st.builds(
    GaussianRational,
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
)


@settings(max_examples=30, deadline=None)
@given(gauss.filter(lambda z: not z.is_zero()), gauss)
def test_gaussian_conjugate_symmetry_exact(a, b):
    if a.is_real() and b.is_real():
        return
    one = upper_bound_gaussian(a, b)
    two = upper_bound_gaussian(a.conj(), b.conj())
    assert one.value == two.value


@settings(max_examples=20, deadline=None)
@given(gauss.filter(lambda z: not z.is_zero()), gauss)
def test_gaussian_formula_is_general_omega(a, b):
    if a.is_real() and b.is_real():
        return
    res = upper_bound_gaussian(a, b)
    assert res.value.value == pytest.approx(omega_general(a, b, res.t_star).value, abs=1e-11)


def test_gaussian_rejects_rational_pair():
    with pytest.raises(ValueError):
        upper_bound_gaussian(1, 2)


def test_result_certification_guard():
    with pytest.raises(ValueError):
        UpperBoundResult(ValueWithError(1.0), 0.0, UpperMethod.QUADRATURE_MIN, True)


def test_delta_enters_additively():
    a, b = Fraction(1, 3), Fraction(1, 3)
    res = omega_min(a, b)
    assert res.value.value == pytest.approx(delta(a, b).value + 2 * phi(-0.5).value, abs=1e-11)
