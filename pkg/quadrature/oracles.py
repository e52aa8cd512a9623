"""Independent integral oracles for the Debye functions and the Euler transform.

The Debye oracles only call the rho = 1 Mittag-Leffler evaluator, never the
Fox-Wright series, so that series-vs-quadrature agreement is a real check.
"""
import math
import logging

import numpy as np
from scipy import special

from special_fn.types import EvalResult, Method, FoxWrightParams, SeriesConfig
from special_fn.mittag_leffler import mittag_leffler, mittag_leffler_batch
from special_fn.fox_wright import fox_wright_2psi2
from quadrature.integrate import (QuadratureConfig, integrate_panels, integrate_weighted,
                                  graded_breakpoints, kink_levels)
from utils.errors import DomainError

logger = logging.getLogger(__name__)

CHUNK = 16


def _relative_error(errors, values):
    return errors / np.maximum(np.abs(values), 1e-300)


def debye_quadrature_batch(ys, params, cfg=None, series_cfg=None):
    """2 int_0^1 (1 - tau) E_beta(-y^2 tau^alpha) dtau for every y in ``ys``.

    The mesh is graded geometrically toward tau = 0 when alpha < 1 or y^2 > 1.

    :return: (values, errors)
    """
    cfg = cfg or QuadratureConfig()
    series_cfg = series_cfg or SeriesConfig()
    ys = np.asarray(ys, dtype=float)
    if np.any(ys < 0):
        raise DomainError("debye_quadrature needs y >= 0")
    y_sq = ys * ys
    values = np.empty(ys.shape)
    errors = np.empty(ys.shape)

    order = np.argsort(y_sq)
    for chunk in np.array_split(order, max(1, math.ceil(ys.size / CHUNK))):
        u = y_sq[chunk]
        inner_rel = np.zeros(u.size)

        def integrand(tau, u=u, inner_rel=inner_rel):
            args = -u[:, None] * (tau ** params.alpha)[None, :]
            v, e, _ = mittag_leffler_batch(params.beta, 1.0, args, series_cfg)
            np.maximum(inner_rel, _relative_error(e, v).max(1), out=inner_rel)
            return 2.0 * (1.0 - tau)[None, :] * v

        u_max = u.max()
        levels = 0
        if params.alpha < 1.0 or u_max > 1.0:
            levels = kink_levels(params.alpha, u_max, cfg.grading_ratio)
        breakpoints = graded_breakpoints(0.0, 1.0, levels, cfg.grading_ratio)
        v, e = integrate_panels(integrand, breakpoints, cfg, max_subdivisions=cfg.max_subdivisions + breakpoints.size)
        values[chunk] = v
        errors[chunk] = e + inner_rel * np.abs(v)
    return values, errors


def debye_quadrature(y, params, cfg=None, series_cfg=None):
    """Debye function f_D(y; beta, alpha) by adaptive quadrature of the reduced time integral."""
    if not y >= 0:
        raise DomainError(f"debye_quadrature needs y >= 0, got {y}")
    values, errors = debye_quadrature_batch(np.array([y]), params, cfg, series_cfg)
    return EvalResult(float(values[0]), float(errors[0]), Method.QUADRATURE)


def debye_double_integral(y, params, grid_n=64, series_cfg=None):
    """Tensor Gauss-Legendre value of int_0^1 int_0^1 E_beta(-y^2 |t - s|^alpha) dt ds.

    The square is folded onto s < t and s = t u maps the triangle back to the
    unit square, so the rule integrates 2 t E_beta(-y^2 (t (1 - u))^alpha)
    without the diagonal kink.
    """
    if int(grid_n) != grid_n or grid_n < 16:
        raise DomainError(f"grid_n must be an integer >= 16, got {grid_n}")
    if not y >= 0:
        raise DomainError(f"debye_double_integral needs y >= 0, got {y}")
    nodes, weights = np.polynomial.legendre.leggauss(int(grid_n))
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    t, u = np.meshgrid(nodes, nodes, indexing="ij")
    args = -(y * y) * (t * (1.0 - u)) ** params.alpha
    values, _, _ = mittag_leffler_batch(params.beta, 1.0, args, series_cfg)
    return float(2.0 * np.einsum("i,j,ij->", weights, weights, t * values))


def verify_euler_transform(beta, alpha_p, sigma, x, cfg=None, series_cfg=None):
    """Both sides of int_0^1 t^(a-1) (1-t)^(sigma-1) E_{beta,a}(x t^beta) dt = Gamma(sigma) E_{beta,a+sigma}(x).

    :return: (lhs, rhs)
    """
    if not (alpha_p > 0 and sigma > 0):
        raise DomainError(f"alpha_p and sigma must be positive, got {alpha_p}, {sigma}")
    if not x <= 0:
        raise DomainError(f"x must be <= 0, got {x}")
    cfg = cfg or QuadratureConfig()

    def integrand(t):
        values, _, _ = mittag_leffler_batch(beta, alpha_p, x * t ** beta, series_cfg)
        return values

    levels = kink_levels(beta, -x, cfg.grading_ratio) if x < 0 else 0
    lhs, _ = integrate_weighted(integrand, alpha_p, sigma, cfg, left_levels=levels)
    rhs = math.gamma(sigma) * mittag_leffler(beta, alpha_p + sigma, x, series_cfg).value
    logger.debug(f"Euler transform beta={beta} alpha_p={alpha_p} sigma={sigma} x={x}: {lhs[0]:.15g} vs {rhs:.15g}")
    return float(lhs[0]), float(rhs)


def verify_fox_wright_transform(params, x, cfg=None, series_cfg=None):
    """int_0^1 (1 - t) E_beta(x t^alpha) dt against Gamma(2) 2Psi2((1,alpha),(1,1);(1,beta),(3,alpha); x).

    :return: (lhs, rhs)
    """
    if not x <= 0:
        raise DomainError(f"x must be <= 0, got {x}")
    cfg = cfg or QuadratureConfig()

    def integrand(t):
        values, _, _ = mittag_leffler_batch(params.beta, 1.0, x * t ** params.alpha, series_cfg)
        return values

    levels = kink_levels(params.alpha, -x, cfg.grading_ratio) if x < 0 else 0
    lhs, _ = integrate_weighted(integrand, 1.0, 2.0, cfg, left_levels=levels)
    rhs = special.gamma(2.0) * fox_wright_2psi2(FoxWrightParams.debye(params.beta, params.alpha), x, series_cfg).value
    return float(lhs[0]), float(rhs)
