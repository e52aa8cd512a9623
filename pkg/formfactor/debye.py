"""Debye functions f_D(y; beta, alpha) of generalized grey Brownian motion.

    f_D(y; beta, alpha) = 2 sum_j (-y^2)^j / (Gamma(beta j + 1)(alpha j + 1)(alpha j + 2))
                        = 2 int_0^1 (1 - tau) E_beta(-y^2 tau^alpha) dtau

Special families have closed forms and are dispatched to them; the general
case sums the Fox-Wright series for y^2 <= series_cutoff_sq and falls back to
quadrature when the series is cancelled or y is large.
"""
import math
import logging

import numpy as np
from tqdm import tqdm

from special_fn.types import EvalResult, Method, FoxWrightParams
from special_fn.gamma import scaled_lower_gamma
from special_fn.mittag_leffler import mittag_leffler_batch
from special_fn.fox_wright import fox_wright_2psi2
from quadrature.oracles import debye_quadrature_batch
from formfactor.params import Family, GgbmParams, DebyeCurve, FormFactorConfig, family_of
from utils.errors import DomainError, ConvergenceError, DimensionMismatchError

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
# below this y^2 the closed forms are replaced by their Taylor series
SMALL_U = 0.1
SMALL_U_TERMS = 20


def _check_y(ys):
    ys = np.asarray(ys, dtype=float)
    if np.any(~np.isfinite(ys)) or np.any(ys < 0):
        raise DomainError("Debye functions need finite y >= 0")
    return ys


def _bm_values(ys):
    u = ys * ys
    j = np.arange(SMALL_U_TERMS, dtype=float)
    series = 2.0 * ((-u[:, None]) ** j[None, :] / np.array([math.factorial(int(k) + 2) for k in j])).sum(1)
    with np.errstate(divide='ignore', invalid='ignore'):
        closed = 2.0 * (np.expm1(-u) + u) / (u * u)
    small = u < SMALL_U
    values = np.where(small, series, closed)
    errors = np.where(small, EPS * np.abs(series), 8.0 * EPS * (1.0 + u) / np.maximum(u * u, 1e-300))
    return values, errors


def debye_bm(y):
    """(2 / y^4)(exp(-y^2) - 1 + y^2), the standard Brownian motion Debye function."""
    values, errors = _bm_values(_check_y(np.array([y])))
    return EvalResult(float(values[0]), float(errors[0]), Method.CLOSED_FORM)


def debye_gbm(y, beta, cfg=None):
    """Grey Brownian motion (alpha = beta): 2 E_{beta,3}(-y^2)."""
    cfg = cfg or FormFactorConfig()
    GgbmParams(beta, beta)
    values, errors, methods = _gbm_values(_check_y(np.array([y])), beta, cfg)
    return EvalResult(float(values[0]), float(errors[0]), methods[0])


def _gbm_values(ys, beta, cfg):
    values, errors, methods = mittag_leffler_batch(beta, 3.0, -(ys * ys), cfg.series)
    return 2.0 * values, 2.0 * errors, list(methods)


def _fbm_values(ys, alpha):
    values, errors = np.empty(ys.shape), np.empty(ys.shape)
    for i, y in enumerate(ys):
        u = y * y
        first = scaled_lower_gamma(1.0 / alpha, u)
        second = scaled_lower_gamma(2.0 / alpha, u)
        values[i] = (2.0 / alpha) * (first - second)
        errors[i] = 16.0 * EPS * (2.0 / alpha) * (abs(first) + abs(second))
    return values, errors


def debye_fbm(y, alpha):
    """Fractional Brownian motion (beta = 1) through lower incomplete gammas.

    f_D(y; 1, alpha) = (2 / alpha)[u^(-1/alpha) gamma(1/alpha, u) - u^(-2/alpha) gamma(2/alpha, u)], u = y^2
    """
    if not y > 0:
        raise DomainError(f"debye_fbm needs y > 0 (the y -> 0 limit is 1), got {y}")
    GgbmParams(1.0, alpha)
    values, errors = _fbm_values(np.array([float(y)]), alpha)
    return EvalResult(float(values[0]), float(errors[0]), Method.CLOSED_FORM)


def _series_or_quadrature(ys, params, cfg):
    values, errors = np.empty(ys.shape), np.empty(ys.shape)
    methods = [Method.QUADRATURE] * ys.size
    fox_params = FoxWrightParams.debye(params.beta, params.alpha)
    fallback = []
    for i, y in enumerate(ys):
        u = y * y
        if u <= cfg.series_cutoff_sq:
            try:
                result = fox_wright_2psi2(fox_params, -u, cfg.series)
            except ConvergenceError as err:
                logger.debug(f"Debye series at y={y:g} abandoned: {err}")
            else:
                if result.abs_error_est <= cfg.series_rtol * abs(result.value):
                    values[i], errors[i] = 2.0 * result.value, 2.0 * result.abs_error_est
                    methods[i] = Method.TAYLOR_SERIES
                    continue
        fallback.append(i)

    if fallback:
        idx = np.array(fallback)
        logger.debug(f"{idx.size} of {ys.size} Debye points by quadrature for beta={params.beta}, alpha={params.alpha}")
        values[idx], errors[idx] = debye_quadrature_batch(ys[idx], params, cfg.quadrature, cfg.series)
    return values, errors, methods


def debye_values(ys, params, cfg=None):
    """Vectorized Debye function with family dispatch.

    :return: (values, errors, methods)
    """
    cfg = cfg or FormFactorConfig()
    ys = _check_y(ys)
    family = family_of(params)
    if family is Family.STANDARD_BM:
        values, errors = _bm_values(ys)
        return values, errors, [Method.CLOSED_FORM] * ys.size
    if family is Family.FRACTIONAL_BM:
        values, errors = np.ones(ys.shape), np.zeros(ys.shape)
        positive = ys > 0
        values[positive], errors[positive] = _fbm_values(ys[positive], params.alpha)
        return values, errors, [Method.CLOSED_FORM] * ys.size
    if family is Family.GREY_BM:
        return _gbm_values(ys, params.beta, cfg)
    return _series_or_quadrature(ys, params, cfg)


def debye_general(y, params, cfg=None):
    """f_D(y; beta, alpha) for any valid parameter pair.

    :raise ConvergenceError: only if both the series and the quadrature fail
    """
    values, errors, methods = debye_values(np.array([y], dtype=float), params, cfg)
    return EvalResult(float(values[0]), float(errors[0]), methods[0])


def debye_beta1(y, beta, cfg=None):
    """f_D(y; beta, 1) = 2 sum_j (-y^2)^j / (Gamma(beta j + 1)(j + 1)(j + 2))."""
    return debye_general(y, GgbmParams(beta, 1.0), cfg)


def debye_limit_beta0(y, family):
    """beta -> 0 limits: GreyBm gives 1 / (1 + y^2), AlphaOne (2 / y^4)(-y^2 + (1 + y^2) ln(1 + y^2))."""
    values = _limit_values(_check_y(np.array([y])), Family(family))
    return float(values[0])


def _limit_values(ys, family):
    u = ys * ys
    if family is Family.GREY_BM:
        return 1.0 / (1.0 + u)
    if family is Family.ALPHA_ONE:
        j = np.arange(SMALL_U_TERMS, dtype=float)
        series = 2.0 * ((-u[:, None]) ** j[None, :] / ((j + 1.0) * (j + 2.0))[None, :]).sum(1)
        with np.errstate(divide='ignore', invalid='ignore'):
            closed = 2.0 * ((1.0 + u) * np.log1p(u) - u) / (u * u)
        return np.where(u < SMALL_U, series, closed)
    raise DomainError(f"beta -> 0 limits exist for GreyBm and AlphaOne only, got {family.value}")


def form_factor(k, d, n, params, cfg=None):
    """S(k) of a path of length ``n``: the Debye function at y^2 = n^alpha |k|^2 / 2."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.size != d:
        raise DimensionMismatchError(f"k has {k.size} components, dimension is {d}")
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")
    y = math.sqrt(n ** params.alpha * float(k @ k) / 2.0)
    return debye_general(y, params, cfg)


def log_grid(y_min, y_max, points):
    if not (0 < y_min < y_max and points >= 2):
        raise DomainError(f"log grid needs 0 < y_min < y_max and points >= 2, got {y_min}, {y_max}, {points}")
    return np.geomspace(y_min, y_max, int(points))


def linear_grid(y_min, y_max, points):
    if not (0 < y_min < y_max and points >= 2):
        raise DomainError(f"linear grid needs 0 < y_min < y_max and points >= 2, got {y_min}, {y_max}, {points}")
    return np.linspace(y_min, y_max, int(points))


def debye_curve(params, ys, cfg=None, limit=None, chunk=25, progress=False):
    """Sample f_D on ``ys`` into a DebyeCurve.

    :param params: GgbmParams, or None together with ``limit`` for a beta -> 0 curve
    :param limit: Family.GREY_BM or Family.ALPHA_ONE
    """
    ys = _check_y(ys)
    if params is None:
        if limit is None:
            raise DomainError("either params or a beta -> 0 limit family is required")
        limit = Family(limit)
        values = _limit_values(ys, limit)
        return DebyeCurve(limit, None, tuple(ys), tuple(values), (Method.CLOSED_FORM,) * ys.size,
                          tuple(EPS * np.abs(values) * 8.0), limit=limit)

    values, errors, methods = [], [], []
    blocks = np.array_split(ys, max(1, math.ceil(ys.size / chunk)))
    for block in tqdm(blocks, desc=f"[curve beta={params.beta:g} alpha={params.alpha:g}]", disable=not progress):
        v, e, m = debye_values(block, params, cfg)
        values.extend(v)
        errors.extend(e)
        methods.extend(m)
    return DebyeCurve(family_of(params), params, tuple(float(y) for y in ys), tuple(map(float, values)),
                      tuple(methods), tuple(map(float, errors)))
