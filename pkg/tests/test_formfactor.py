import math

import pytest
import numpy as np
from pytest import approx
from scipy import special
from hypothesis import given, settings, strategies as st

from special_fn.types import Method
from quadrature.oracles import debye_quadrature
from formfactor.params import Family, GgbmParams, DebyeCurve, RadiusReport, FormFactorConfig, family_of
from formfactor.debye import (debye_bm, debye_gbm, debye_fbm, debye_beta1, debye_general, debye_values,
                              debye_limit_beta0, debye_curve, form_factor, log_grid, linear_grid)
from formfactor.radius import end_to_end_sq, radius_of_gyration_sq, curvature_radius_sq
from formfactor.asymptote import (asymptote_gbm_coefficient, asymptote_gbm_series, asymptote_beta1_log_slope,
                                  fit_log_asymptote)
from utils.errors import DomainError, ConvergenceError, DimensionMismatchError, InsufficientPointsError
from reference import debye_series, mittag_leffler_series

TWO_OVER_E = 2.0 * math.exp(-1.0)


@pytest.mark.parametrize("beta, alpha", [(0.0, 1.0), (1.2, 1.0), (0.5, 0.0), (0.5, 2.0)])
def test_params_domain(beta, alpha):
    with pytest.raises(DomainError):
        GgbmParams(beta, alpha)


@pytest.mark.parametrize("beta, alpha, family", [
    (1.0, 1.0, Family.STANDARD_BM),
    (1.0, 0.5, Family.FRACTIONAL_BM),
    (0.5, 0.5, Family.GREY_BM),
    (0.5, 1.0, Family.ALPHA_ONE),
    (0.5, 1.5, Family.GENERAL),
])
def test_family_of(beta, alpha, family):
    assert family_of(GgbmParams(beta, alpha)) is family


def test_hurst_and_ratio():
    params = GgbmParams(0.5, 1.5)
    assert params.hurst() == 0.75
    assert params.self_similarity_ratio() == approx(2.5 * 3.5)


def test_brownian_closed_form():
    assert debye_bm(1.0).value == approx(TWO_OVER_E, rel=1e-15)
    assert debye_bm(1e-4).value == approx(1.0 - 1e-8 / 3.0, rel=1e-15)
    assert debye_bm(0.0).value == 1.0


@pytest.mark.parametrize("y", [0.01, 0.3, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_fbm_closed_form(y, alpha):
    assert debye_fbm(y, alpha).value == approx(debye_series(y, 1.0, alpha), rel=1e-9)


def test_fbm_domain():
    with pytest.raises(DomainError):
        debye_fbm(0.0, 1.0)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("y", [0.5, 2.0])
def test_gbm_is_mittag_leffler(beta, y):
    assert debye_gbm(y, beta).value == approx(2.0 * mittag_leffler_series(beta, 3.0, -y * y), rel=1e-9)


@pytest.mark.parametrize("beta, alpha", [(0.75, 0.5), (0.5, 1.5), (0.25, 1.25), (0.5, 1.0)])
@pytest.mark.parametrize("y", [0.3, 1.0, 2.0])
def test_general_against_series(beta, alpha, y):
    assert debye_general(y, GgbmParams(beta, alpha)).value == approx(debye_series(y, beta, alpha), rel=1e-9)


def test_general_dispatches_to_closed_forms():
    assert debye_general(1.0, GgbmParams(1.0, 1.0)).method is Method.CLOSED_FORM
    assert debye_general(1.0, GgbmParams(1.0, 0.5)).method is Method.CLOSED_FORM
    assert debye_general(1.0, GgbmParams(0.5, 1.5)).method is Method.TAYLOR_SERIES
    assert debye_general(20.0, GgbmParams(0.5, 1.5)).method is Method.QUADRATURE


@pytest.mark.parametrize("y", [0.01, 0.5, 1.0, 3.0, 10.0])
def test_all_brownian_routes_agree(y):
    reference = debye_bm(y).value
    assert debye_fbm(y, 1.0).value == approx(reference, rel=1e-10)
    assert debye_gbm(y, 1.0).value == approx(reference, rel=1e-10)
    assert debye_beta1(y, 1.0).value == approx(reference, rel=1e-10)
    assert debye_general(y, GgbmParams(1.0, 1.0)).value == approx(reference, rel=1e-10)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_quadrature_oracle_agreement(beta, alpha):
    params = GgbmParams(beta, alpha)
    for y in (0.1, 1.0, 4.0, 7.0, 50.0):
        expected = debye_quadrature(y, params).value
        assert debye_general(y, params).value == approx(expected, rel=1e-7)


def test_value_at_origin():
    for params in (GgbmParams(0.5, 1.5), GgbmParams(0.5, 0.5), GgbmParams(1.0, 0.7)):
        assert debye_general(0.0, params).value == approx(1.0, rel=1e-15)


def test_negative_y():
    with pytest.raises(DomainError):
        debye_general(-1.0, GgbmParams(0.5, 1.0))


def test_beta0_limit_curves():
    assert debye_limit_beta0(2.0, Family.GREY_BM) == approx(0.2)
    assert debye_limit_beta0(1.0, Family.ALPHA_ONE) == approx(2.0 * (2.0 * math.log(2.0) - 1.0), rel=1e-14)
    # series and closed branch meet at y^2 = 0.1
    below = debye_limit_beta0(math.sqrt(0.1) * (1 - 1e-9), Family.ALPHA_ONE)
    above = debye_limit_beta0(math.sqrt(0.1) * (1 + 1e-9), Family.ALPHA_ONE)
    assert below == approx(above, rel=1e-8)
    with pytest.raises(DomainError):
        debye_limit_beta0(1.0, Family.GENERAL)


def test_small_beta_grey_approaches_limit():
    ys = np.linspace(0.05, 0.9, 18)
    values = [debye_general(y, GgbmParams(0.01, 0.01)).value for y in ys]
    np.testing.assert_allclose(values, 1.0 / (1.0 + ys * ys), rtol=0.01)


@pytest.mark.parametrize("y", [0.1, 0.5, 0.9])
def test_small_beta_alpha_one_approaches_limit(y):
    assert debye_beta1(y, 1e-3).value == approx(debye_limit_beta0(y, Family.ALPHA_ONE), rel=0.01)


def test_form_factor():
    params = GgbmParams(1.0, 1.0)
    assert form_factor([0.0, 0.0, 0.0], 3, 10.0, params).value == approx(1.0)
    assert form_factor([math.sqrt(2.0)], 1, 1.0, params).value == approx(TWO_OVER_E, rel=1e-13)
    # y^2 = n^alpha |k|^2 / 2
    expected = debye_beta1(1.0, 0.5).value
    assert form_factor([0.3, 0.4], 2, 8.0, GgbmParams(0.5, 1.0)).value == approx(expected, rel=1e-13)
    with pytest.raises(DimensionMismatchError):
        form_factor([1.0, 0.0], 3, 1.0, params)
    with pytest.raises(DomainError):
        form_factor([1.0], 1, 0.0, params)


def test_grids():
    ys = log_grid(0.05, 100.0, 200)
    assert ys[0] == approx(0.05) and ys[-1] == approx(100.0) and ys.size == 200
    assert linear_grid(1.0, 2.0, 3).tolist() == [1.0, 1.5, 2.0]
    with pytest.raises(DomainError):
        log_grid(1.0, 1.0, 10)
    with pytest.raises(DomainError):
        linear_grid(0.0, 1.0, 1)


def test_curve_invariants():
    curve = debye_curve(GgbmParams(0.5, 1.5), log_grid(0.05, 100.0, 60))
    values = np.asarray(curve.values)
    assert len(curve) == 60
    assert values[0] <= 1.0 + 1e-12
    assert values[0] == approx(1.0, abs=1e-3)
    tail = values[np.asarray(curve.ys) >= 3.0]
    assert np.all(np.diff(tail) <= 0)
    frame = curve.to_frame()
    assert list(frame.columns) == ["y", "f_D", "method", "abs_err"]
    assert set(frame["method"]) <= {m.value for m in Method}


def test_curve_rejects_bad_data():
    ys = (0.1, 1.0, 4.0, 5.0)
    methods = (Method.CLOSED_FORM,) * 4
    with pytest.raises(ConvergenceError):
        DebyeCurve(Family.GENERAL, None, ys, (1.1, 0.5, 0.1, 0.05), methods)
    with pytest.raises(ConvergenceError):
        DebyeCurve(Family.GENERAL, None, ys, (0.99, 0.5, 0.1, 0.2), methods)
    with pytest.raises(DomainError):
        DebyeCurve(Family.GENERAL, None, (0.1, 0.1, 4.0, 5.0), (0.99, 0.5, 0.1, 0.05), methods)
    with pytest.raises(DomainError):
        DebyeCurve(Family.GENERAL, None, ys, (0.99, 0.5), methods)


def test_limit_curve():
    curve = debye_curve(None, log_grid(0.1, 10.0, 20), limit=Family.GREY_BM)
    assert curve.params is None and curve.limit is Family.GREY_BM
    np.testing.assert_allclose(curve.values, 1.0 / (1.0 + np.asarray(curve.ys) ** 2), rtol=1e-15)
    with pytest.raises(DomainError):
        debye_curve(None, log_grid(0.1, 10.0, 20))


def test_radius_brownian():
    report = radius_of_gyration_sq(GgbmParams(1.0, 1.0), 12.0)
    assert report.r_e_sq == approx(12.0)
    assert report.r_g_sq == approx(2.0)
    assert report.ratio_expected == 6.0


def test_end_to_end():
    assert end_to_end_sq(GgbmParams(0.5, 1.5), 4.0) == approx(8.0 / special.gamma(1.5))
    with pytest.raises(DomainError):
        end_to_end_sq(GgbmParams(0.5, 1.5), 0.0)


@settings(max_examples=60, deadline=None)
@given(beta=st.floats(0.01, 1.0), alpha=st.floats(0.01, 1.99), n=st.floats(1e-3, 1e6))
def test_radius_ratio_is_self_similarity_ratio(beta, alpha, n):
    report = radius_of_gyration_sq(GgbmParams(beta, alpha), n)
    assert report.r_e_sq / report.r_g_sq == approx((alpha + 1.0) * (alpha + 2.0), rel=1e-12)


def test_radius_report_invariant():
    with pytest.raises(ConvergenceError):
        RadiusReport(r_e_sq=6.0, r_g_sq=2.0, ratio_expected=6.0, n=1.0)


@pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_small_y_curvature(beta, alpha):
    params = GgbmParams(beta, alpha)
    expected = radius_of_gyration_sq(params, 10.0).r_g_sq
    assert curvature_radius_sq(params, 10.0) == approx(expected, rel=1e-4)


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.8])
def test_gbm_tail(beta):
    y = 100.0
    value = debye_gbm(y, beta).value
    assert y * y * value == approx(asymptote_gbm_coefficient(beta), rel=0.02)
    assert value == approx(asymptote_gbm_series(y, beta, 3), rel=1e-6)


def test_gbm_coefficient():
    assert asymptote_gbm_coefficient(0.5) == approx(2.0 / special.gamma(2.5))


def test_beta_third_log_asymptote():
    ys = log_grid(30.0, 300.0, 60)
    k1, k2 = fit_log_asymptote(debye_curve(GgbmParams(1.0 / 3.0, 1.0), ys), y_min=30.0)
    assert k1 == approx(-0.827976, rel=0.02)
    assert k2 == approx(2.95395, rel=0.02)
    assert asymptote_beta1_log_slope(1.0 / 3.0) == approx(2.95395, rel=1e-5)


def test_beta0_log_asymptote():
    curve = debye_curve(None, log_grid(30.0, 300.0, 60), limit=Family.ALPHA_ONE)
    k1, k2 = fit_log_asymptote(curve, y_min=30.0)
    assert k1 == approx(-2.0, rel=0.02)
    assert k2 == approx(4.0, rel=0.02)


def test_fit_needs_tail_points():
    curve = debye_curve(None, log_grid(1.0, 40.0, 30), limit=Family.ALPHA_ONE)
    with pytest.raises(InsufficientPointsError):
        fit_log_asymptote(curve, y_min=35.0)
    with pytest.raises(DomainError):
        fit_log_asymptote(curve, y_min=5.0)


def test_config_from_yaml(config):
    cfg = FormFactorConfig.from_config(config)
    assert cfg.series_cutoff_sq == 25.0
    assert cfg.series.taylor_radius == 5.0
    values, _, methods = debye_values(np.array([0.5, 8.0]), GgbmParams(0.75, 0.5), cfg)
    assert methods == [Method.TAYLOR_SERIES, Method.QUADRATURE]
