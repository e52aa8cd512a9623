import math

import pytest
import numpy as np
from pytest import approx
from scipy import special
from hypothesis import given, settings, strategies as st

from special_fn.types import EvalResult, Method, FoxWrightParams, SeriesConfig
from special_fn.gamma import gamma_ln, lower_incomplete_gamma, scaled_lower_gamma
from special_fn.mittag_leffler import (mittag_leffler, mittag_leffler_batch, mittag_leffler_asymptotic,
                                       method_seam_gaps)
from special_fn.fox_wright import fox_wright_2psi2
from utils.errors import DomainError, ConvergenceError
from utils.summation import neumaier_sum
from reference import mittag_leffler_series, debye_series


def test_neumaier_sum_recovers_small_addends():
    assert neumaier_sum([1.0, 1e100, 1.0, -1e100]) == 2.0


def test_neumaier_sum_along_axis():
    values = np.array([[0.1] * 10, [1.0] * 10])
    np.testing.assert_allclose(neumaier_sum(values, axis=1), [1.0, 10.0], rtol=1e-15)


@pytest.mark.parametrize("x", np.geomspace(1e-3, 1e4, 15))
def test_gamma_ln(x):
    assert gamma_ln(x) == approx(special.gammaln(x), rel=1e-13, abs=1e-15)


def test_gamma_ln_domain():
    with pytest.raises(DomainError):
        gamma_ln(0.0)


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 2.0, 7.5])
@pytest.mark.parametrize("x", [1e-6, 0.1, 1.0, 3.0, 8.5, 30.0])
def test_lower_incomplete_gamma(a, x):
    expected = special.gammainc(a, x) * special.gamma(a)
    assert lower_incomplete_gamma(a, x) == approx(expected, rel=1e-12)


def test_lower_incomplete_gamma_at_switch():
    a = 2.0
    below = lower_incomplete_gamma(a, a + 1.0 - 1e-12)
    above = lower_incomplete_gamma(a, a + 1.0 + 1e-12)
    assert below == approx(above, rel=1e-11)


def test_scaled_lower_gamma():
    assert scaled_lower_gamma(0.5, 0.0) == 2.0
    for x in (1e-3, 0.7, 12.0):
        assert scaled_lower_gamma(1.5, x) == approx(lower_incomplete_gamma(1.5, x) / x ** 1.5, rel=1e-12)


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        lower_incomplete_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        lower_incomplete_gamma(1.0, -1.0)


def test_eval_result_rejects_nan():
    with pytest.raises(ConvergenceError):
        EvalResult(float("nan"), 0.0, Method.TAYLOR_SERIES)


@pytest.mark.parametrize("beta", np.round(np.arange(0.1, 1.01, 0.1), 10))
@pytest.mark.parametrize("rho", [1.0, 3.0])
def test_value_at_origin(beta, rho):
    result = mittag_leffler(beta, rho, 0.0)
    assert result.value == approx(special.rgamma(rho), rel=1e-15)


def test_exponential():
    z = np.linspace(-50.0, 0.0, 201)
    values, _, methods = mittag_leffler_batch(1.0, 1.0, z)
    np.testing.assert_allclose(values, np.exp(z), rtol=1e-12)
    assert set(methods) == {Method.CLOSED_FORM}


def test_half_order_is_erfcx():
    x = np.linspace(0.0, 50.0, 101)
    values, errors, methods = mittag_leffler_batch(0.5, 1.0, -x)
    np.testing.assert_allclose(values, special.erfcx(x), rtol=1e-9)
    assert np.all(errors <= 1e-8 * np.abs(values))
    assert {Method.TAYLOR_SERIES, Method.SPECTRAL_INTEGRAL, Method.ASYMPTOTIC_EXPANSION} <= set(methods)


@pytest.mark.parametrize("beta, rho, z", [
    (0.5, 3.0, -4.0),
    (0.3, 1.0, -2.0),
    (0.7, 1.0, -10.0),
    (0.9, 3.0, -15.0),
    (0.25, 3.0, -4.0),
    (0.75, 2.0, -8.0),
    (0.5, 1.5, -12.0),
    (1.0, 2.5, -9.0),
    (1.5, 1.0, -3.0),
])
def test_against_high_precision_series(beta, rho, z):
    result = mittag_leffler(beta, rho, z)
    assert result.value == approx(mittag_leffler_series(beta, rho, z), rel=1e-9)
    assert result.abs_error_est <= 1e-8 * abs(result.value)


def test_integer_rho_closed_form():
    result = mittag_leffler(1.0, 3.0, -30.0)
    assert result.method is Method.CLOSED_FORM
    assert result.value == approx((math.exp(-30.0) - 1.0 + 30.0) / 900.0, rel=1e-13)


def test_shift_identity_for_nonpositive_rho():
    z = -2.0
    assert mittag_leffler(0.5, 0.0, z).value == approx(z * mittag_leffler(0.5, 0.5, z).value, rel=1e-10)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("rho", [1.0, 3.0])
def test_no_seam_between_methods(beta, rho):
    inner, outer = method_seam_gaps(beta, rho)
    assert inner <= 1e-8
    assert outer <= 1e-8


def test_domain_errors():
    with pytest.raises(DomainError):
        mittag_leffler(2.5, 1.0, -1.0)
    with pytest.raises(DomainError):
        mittag_leffler(0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        mittag_leffler(0.5, 1.0, float("-inf"))


def test_corrupted_taylor_radius_fails_loudly():
    cfg = SeriesConfig(taylor_radius=1000.0)
    with pytest.raises(ConvergenceError):
        mittag_leffler(0.5, 1.0, -30.0, cfg)


def test_asymptotic_partial_sum():
    partial = mittag_leffler_asymptotic(0.5, 1.0, -100.0, 5)
    last_term = 100.0 ** -5 * abs(special.rgamma(1.0 - 2.5))
    assert abs(partial - special.erfcx(100.0)) <= 2.0 * last_term


def test_asymptotic_domain():
    with pytest.raises(DomainError):
        mittag_leffler_asymptotic(0.5, 1.0, 0.0, 3)
    with pytest.raises(DomainError):
        mittag_leffler_asymptotic(0.5, 1.0, -10.0, 0)


@settings(max_examples=40, deadline=None)
@given(beta=st.floats(0.1, 1.0), x=st.floats(0.0, 200.0))
def test_completely_monotone_on_negative_axis(beta, x):
    here = mittag_leffler(beta, 1.0, -x).value
    further = mittag_leffler(beta, 1.0, -x - 1.0).value
    assert 0.0 < further < here <= 1.0 + 1e-15


def test_fox_wright_at_zero():
    result = fox_wright_2psi2(FoxWrightParams.debye(0.5, 1.0), 0.0)
    assert result.value == approx(0.5, rel=1e-15)


@pytest.mark.parametrize("beta, alpha, y", [
    (0.5, 1.0, 0.1), (0.5, 1.0, 0.7), (0.5, 1.0, 1.5),
    (0.25, 0.5, 0.1), (0.25, 0.5, 0.7),
    (0.75, 1.5, 0.7), (0.75, 1.5, 1.5),
    (1.0, 1.0, 1.5), (1.0, 1.0, 2.5),
])
def test_fox_wright_is_the_debye_series(beta, alpha, y):
    result = fox_wright_2psi2(FoxWrightParams.debye(beta, alpha), -y * y)
    assert 2.0 * result.value == approx(debye_series(y, beta, alpha), rel=1e-12)


def test_fox_wright_overflow_is_a_convergence_error():
    with pytest.raises(ConvergenceError):
        fox_wright_2psi2(FoxWrightParams.debye(1.0, 1.0), -900.0)


def test_fox_wright_domain():
    with pytest.raises(DomainError):
        fox_wright_2psi2(FoxWrightParams.debye(0.5, 1.0), 1.0)
