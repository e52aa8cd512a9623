import math

import pytest
import numpy as np
from pytest import approx
from scipy import special

from special_fn.types import Method
from quadrature.integrate import (QuadratureConfig, integrate_adaptive, integrate_panels, integrate_weighted,
                                  graded_breakpoints, grading_levels, kink_levels)
from quadrature.oracles import (debye_quadrature, debye_quadrature_batch, debye_double_integral,
                                verify_euler_transform, verify_fox_wright_transform)
from formfactor.params import GgbmParams
from formfactor.debye import debye_bm
from utils.errors import DomainError, QuadratureError, ConvergenceError
from reference import debye_series


def test_sine():
    result = integrate_adaptive(np.sin, 0.0, math.pi)
    assert result.value == approx(2.0, rel=1e-12)
    assert result.method is Method.QUADRATURE
    assert result.abs_error_est <= 1e-9


def test_square_root_endpoint():
    result = integrate_adaptive(np.sqrt, 0.0, 1.0, QuadratureConfig(rel_tol=1e-10))
    assert result.value == approx(2.0 / 3.0, rel=1e-9)


def test_interior_breakpoint():
    result = integrate_adaptive(lambda x: np.abs(x - 0.3), 0.0, 1.0, points=[0.3])
    assert result.value == approx(0.5 * (0.3 ** 2 + 0.7 ** 2), rel=1e-13)


def test_vector_integrand():
    values, errors = integrate_panels(lambda x: np.stack([x, x * x]), [0.0, 1.0])
    np.testing.assert_allclose(values, [0.5, 1.0 / 3.0], rtol=1e-13)
    assert errors.shape == (2,)


def test_divergent_integral_raises():
    with pytest.raises(QuadratureError):
        integrate_adaptive(lambda x: 1.0 / x, 0.0, 1.0, QuadratureConfig(max_subdivisions=20))
    assert issubclass(QuadratureError, ConvergenceError)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(nodes_per_panel=21)
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureConfig(max_subdivisions=0)


def test_config_from_yaml(config):
    cfg = QuadratureConfig.from_config(config)
    assert cfg.rel_tol == 1e-10
    assert cfg.max_subdivisions == 200


def test_bad_interval():
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 1.0, 0.0)


def test_graded_breakpoints():
    bp = graded_breakpoints(0.0, 1.0, 4, 0.25)
    assert bp[0] == 0.0 and bp[-1] == 1.0
    assert np.all(np.diff(bp) > 0)
    assert bp[1] == approx(0.25 ** 4)
    right = graded_breakpoints(0.0, 1.0, 3, 0.5, toward="right")
    np.testing.assert_allclose(right, [0.0, 0.5, 0.75, 0.875, 1.0])


def test_grading_levels():
    assert grading_levels(2.0) == 0
    assert grading_levels(1.01 * 0.25 ** 5, 0.25) == 5
    assert kink_levels(1.0, 0.5) == 0
    assert kink_levels(0.5, 1.0) > 0


@pytest.mark.parametrize("p, q, expected", [
    (0.5, 0.5, math.pi),
    (2.0, 3.0, 1.0 / 12.0),
    (0.3, 1.0, 1.0 / 0.3),
    (1.0, 0.2, 5.0),
])
def test_weighted_beta_integrals(p, q, expected):
    values, _ = integrate_weighted(np.ones_like, p, q)
    assert values[0] == approx(expected, rel=1e-10)


def test_weighted_domain():
    with pytest.raises(DomainError):
        integrate_weighted(np.ones_like, 0.0, 1.0)


def test_debye_quadrature_brownian():
    result = debye_quadrature(1.0, GgbmParams(1.0, 1.0))
    assert result.value == approx(debye_bm(1.0).value, rel=1e-9)
    assert result.method is Method.QUADRATURE


@pytest.mark.parametrize("beta, alpha", [(0.5, 1.0), (0.25, 0.5), (0.75, 1.5)])
def test_debye_quadrature_against_series(beta, alpha):
    ys = np.array([0.2, 0.6, 1.0])
    values, errors = debye_quadrature_batch(ys, GgbmParams(beta, alpha))
    expected = [debye_series(y, beta, alpha) for y in ys]
    np.testing.assert_allclose(values, expected, rtol=1e-8)
    assert np.all(errors < 1e-8 * np.abs(values))


def test_debye_quadrature_domain():
    with pytest.raises(DomainError):
        debye_quadrature(-1.0, GgbmParams(0.5, 1.0))


def test_double_integral_brownian():
    value = debye_double_integral(1.0, GgbmParams(1.0, 1.0), 64)
    assert abs(value - debye_bm(1.0).value) <= 1e-6


def test_double_integral_against_single():
    params = GgbmParams(0.5, 1.0)
    assert abs(debye_double_integral(2.0, params, 128) - debye_quadrature(2.0, params).value) <= 1e-5


def test_double_integral_grid_size():
    with pytest.raises(DomainError):
        debye_double_integral(1.0, GgbmParams(1.0, 1.0), 4)


@pytest.mark.parametrize("beta, alpha_p, sigma, x", [
    (0.5, 0.5, 2.0, -1.0),
    (0.7, 1.0, 2.0, -4.0),
    (0.3, 1.5, 0.5, -10.0),
    (0.9, 1.0, 1.0, -0.5),
])
def test_euler_transform(beta, alpha_p, sigma, x):
    lhs, rhs = verify_euler_transform(beta, alpha_p, sigma, x)
    assert lhs == approx(rhs, rel=1e-8)


def test_euler_transform_at_origin():
    lhs, rhs = verify_euler_transform(0.5, 1.0, 2.0, 0.0)
    assert lhs == approx(special.rgamma(3.0) * special.gamma(2.0), rel=1e-12)
    assert rhs == approx(lhs, rel=1e-12)


def test_euler_transform_domain():
    with pytest.raises(DomainError):
        verify_euler_transform(0.5, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        verify_euler_transform(0.5, 0.0, 2.0, -1.0)


@pytest.mark.parametrize("beta, alpha", [(0.5, 1.0), (0.25, 0.5), (0.75, 1.5)])
def test_fox_wright_transform(beta, alpha):
    lhs, rhs = verify_fox_wright_transform(GgbmParams(beta, alpha), -0.5)
    assert lhs == approx(rhs, rel=1e-8)
