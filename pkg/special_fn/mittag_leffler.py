"""Generalized Mittag-Leffler function E_{beta,rho}(z) on the negative real axis.

Every evaluator here works on an array of x = -z >= 0 at once and returns
``(values, errors, methods)``. The method is picked per point:

* Taylor series in log space with compensated summation for x <= taylor_radius ** beta
* optimally truncated asymptotic series for x >= asymptotic_radius, accepted
  only when its error bound is below ``rtol`` relative
* otherwise, for 0 < beta < 1, the Hankel-contour spectral integral
  (rho < 1 + beta) or the Euler transform over the rho = 1 function
  (rho >= 1 + beta)
* beta = 1 with integer rho has an exact exponential closed form
"""
import math
import logging

import numpy as np
from scipy import special

from special_fn.types import EvalResult, Method, SeriesConfig
from quadrature.integrate import (QuadratureConfig, integrate_panels, integrate_weighted,
                                  graded_breakpoints, grading_levels, kink_levels)
from utils.errors import DomainError, ConvergenceError
from utils.summation import neumaier_sum

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
LOG_TAIL = math.log(1e-20)
LOG_OVERFLOW = 700.0
# exp(-745) is below the smallest subnormal
SPECTRAL_CUTOFF = 745.0
SPECTRAL_CHUNK = 64
SPECTRAL_ATOL = 1e-17
SPECTRAL_PANELS = 400
EULER_CHUNK = 16


def _taylor(beta, rho, x, cfg):
    values = np.full(x.shape, special.rgamma(rho))
    errors = np.zeros(x.shape)
    positive = x > 0
    if not positive.any():
        return values, errors

    xp = x[positive]
    log_x = np.log(xp)
    n = np.arange(cfg.max_taylor_terms, dtype=float)
    log_gamma = special.gammaln(beta * n + rho)

    envelope = n * log_x.max() - log_gamma
    peak = envelope.max()
    if peak > LOG_OVERFLOW:
        raise ConvergenceError(
            f"Taylor terms of E_{beta},{rho} overflow at x={xp.max():.6g} (log of largest term {peak:.1f})")
    past = (n > np.argmax(envelope)) & (envelope < peak + LOG_TAIL)
    n_terms = int(np.argmax(past)) if past.any() else n.size - 1

    k = n[:n_terms, None]
    log_terms = k * log_x[None, :] - log_gamma[:n_terms, None]
    magnitudes = np.exp(log_terms)
    signs = np.where(n[:n_terms] % 2 == 0, 1.0, -1.0)[:, None]
    values[positive] = neumaier_sum(signs * magnitudes, axis=0)

    rounding = 0.5 * EPS * (magnitudes * (1.0 + np.abs(log_terms) + np.abs(log_gamma[:n_terms, None]))).sum(0)
    omitted = np.exp(n[n_terms] * log_x - log_gamma[n_terms])
    errors[positive] = rounding + 2.0 * omitted
    return values, errors


def _asymptotic_terms(beta, rho, x, m_max):
    n = np.arange(1, m_max + 3, dtype=float)
    recip = special.rgamma(rho - beta * n)
    magnitudes = np.abs(recip)[:, None] * np.exp(-n[:, None] * np.log(x)[None, :])
    signs = -np.where(n % 2 == 0, 1.0, -1.0)[:, None] * np.sign(recip)[:, None]
    return n, signs * magnitudes, magnitudes


def _asymptotic(beta, rho, x, cfg):
    m_max = cfg.max_asymptotic_terms
    n, terms, magnitudes = _asymptotic_terms(beta, rho, x, m_max)

    # first omitted nonzero term: poles of 1/Gamma never hit two consecutive n unless beta = 1
    bound = np.maximum(magnitudes[1:m_max + 1], magnitudes[2:m_max + 2])
    m_opt = np.argmin(bound, axis=0) + 1
    keep = n[:m_max, None] <= m_opt[None, :]
    kept = np.where(keep, terms[:m_max], 0.0)

    values = neumaier_sum(kept, axis=0)
    errors = bound.min(0) + 4.0 * EPS * np.abs(kept).sum(0)
    if beta > 2.0 / 3.0:
        errors += (2.0 / beta) * x ** ((1.0 - rho) / beta) * np.exp(x ** (1.0 / beta) * math.cos(math.pi / beta))
    return values, errors


def _spectral(beta, rho, x, cfg):
    # s = w^q removes the s^((1 - rho) / beta) endpoint singularity of the contour integral
    q = beta / (1.0 + beta - rho)
    w_max = SPECTRAL_CUTOFF ** (beta / q)
    sin_rho = math.sin(math.pi * rho)
    sin_shift = math.sin(math.pi * (rho - beta))
    cos_beta = math.cos(math.pi * beta)
    quad = QuadratureConfig(rel_tol=cfg.spectral_rtol, abs_tol=SPECTRAL_ATOL)

    values = np.empty(x.shape)
    errors = np.empty(x.shape)
    order = np.argsort(x)
    for chunk in np.array_split(order, max(1, math.ceil(x.size / SPECTRAL_CHUNK))):
        xs = x[chunk]

        def integrand(w, xs=xs):
            s = (w ** q)[None, :] / xs[:, None]
            kernel = (s * sin_rho + sin_shift) / (s * s + 2.0 * s * cos_beta + 1.0)
            return np.exp(-w ** (q / beta))[None, :] * kernel

        peaks = xs ** (1.0 / q)
        peaks = np.unique(peaks[peaks < w_max])
        first = peaks[0] if peaks.size else min(1.0, w_max)
        levels = grading_levels(1e-12 ** (1.0 / (1.0 + q)) / first, quad.grading_ratio)
        head = graded_breakpoints(0.0, first, levels, quad.grading_ratio)
        breakpoints = np.unique(np.concatenate([head, peaks, [w_max]]))
        v, e = integrate_panels(integrand, breakpoints, quad,
                                max_subdivisions=SPECTRAL_PANELS + breakpoints.size)
        scale = q / (beta * math.pi * xs)
        values[chunk] = v * scale
        errors[chunk] = e * scale
    return values, errors


def _euler(beta, rho, x, cfg):
    """E_{beta,rho}(-x) = 1/Gamma(sigma) int_0^1 (1-t)^(sigma-1) E_beta(-x t^beta) dt, sigma = rho - 1."""
    sigma = rho - 1.0
    quad = QuadratureConfig(rel_tol=10.0 * cfg.spectral_rtol, abs_tol=SPECTRAL_ATOL)
    values = np.empty(x.shape)
    errors = np.empty(x.shape)
    order = np.argsort(x)
    for chunk in np.array_split(order, max(1, math.ceil(x.size / EULER_CHUNK))):
        xs = x[chunk]
        inner_rel = np.zeros(xs.size)

        def integrand(t, xs=xs, inner_rel=inner_rel):
            args = xs[:, None] * (t ** beta)[None, :]
            v, e, _ = _ml_neg(beta, 1.0, args.ravel(), cfg)
            v = v.reshape(args.shape)
            rel = (e / np.maximum(np.abs(v.ravel()), 1e-300)).reshape(args.shape).max(1)
            np.maximum(inner_rel, rel, out=inner_rel)
            return v

        levels = kink_levels(beta, xs.max(), quad.grading_ratio)
        v, e = integrate_weighted(integrand, 1.0, sigma, quad, left_levels=levels)
        values[chunk] = v * special.rgamma(sigma)
        errors[chunk] = (e + inner_rel * np.abs(v)) * special.rgamma(sigma)
    return values, errors


def _exp_closed_form(rho, x):
    # E_{1,k}(z) = z^(1-k) (e^z - sum_{j<k-1} z^j / j!)
    k = int(round(rho))
    z = -x
    expz = np.exp(z)
    if k == 1:
        return expz, EPS * expz
    j = np.arange(k - 1, dtype=float)
    partial = z[None, :] ** j[:, None] / special.factorial(j)[:, None]
    scale = np.abs(z) ** (1.0 - k)
    values = (expz - neumaier_sum(partial, axis=0)) * z ** (1 - k)
    errors = 4.0 * EPS * (expz + np.abs(partial).sum(0)) * scale
    return values, errors


def _check(beta, rho, x, values, errors, methods, cfg):
    bad = ~(errors <= cfg.convergence_rtol * np.maximum(np.abs(values), 1e-300))
    if bad.any():
        i = int(np.argmax(bad))
        raise ConvergenceError(
            f"E_{beta},{rho}({-x[i]:.6g}): {methods[i].value} error estimate {errors[i]:.3e} "
            f"exceeds {cfg.convergence_rtol:g} relative (value {values[i]:.6e})")


def _ml_neg(beta, rho, x, cfg):
    x = np.asarray(x, dtype=float)
    values = np.empty(x.shape)
    errors = np.empty(x.shape)
    methods = np.empty(x.shape, dtype=object)
    if x.size == 0:
        return values, errors, methods

    if rho <= 0:
        inner, inner_err, methods = _ml_neg(beta, rho + beta, x, cfg)
        head = special.rgamma(rho)
        values = head - x * inner
        errors = x * inner_err + EPS * (abs(head) + np.abs(x * inner))
        _check(beta, rho, x, values, errors, methods, cfg)
        return values, errors, methods

    if beta == 1.0 and rho == 1.0:
        values, errors = _exp_closed_form(rho, x)
        methods[:] = Method.CLOSED_FORM
        return values, errors, methods

    taylor = x <= cfg.taylor_radius ** beta
    if taylor.any():
        values[taylor], errors[taylor] = _taylor(beta, rho, x[taylor], cfg)
        methods[taylor] = Method.TAYLOR_SERIES
    rest = ~taylor

    if beta == 1.0 and float(rho).is_integer() and rest.any():
        values[rest], errors[rest] = _exp_closed_form(rho, x[rest])
        methods[rest] = Method.CLOSED_FORM
        rest[:] = False

    far = rest & (x >= cfg.asymptotic_radius)
    if far.any():
        v, e = _asymptotic(beta, rho, x[far], cfg)
        ok = e <= cfg.rtol * np.abs(v)
        idx = np.flatnonzero(far)[ok]
        values[idx], errors[idx] = v[ok], e[ok]
        methods[idx] = Method.ASYMPTOTIC_EXPANSION
        rest[idx] = False
        if not ok.all():
            logger.debug(f"asymptotic series of E_{beta},{rho} rejected at {int((~ok).sum())} points")

    if rest.any():
        xr = x[rest]
        if beta < 1.0 and rho < 1.0 + beta:
            values[rest], errors[rest] = _spectral(beta, rho, xr, cfg)
        elif beta <= 1.0 and rho > 1.0:
            values[rest], errors[rest] = _euler(beta, rho, xr, cfg)
        elif beta == 1.0:
            inner, inner_err, _ = _ml_neg(beta, rho + 1.0, xr, cfg)
            head = special.rgamma(rho)
            values[rest] = head - xr * inner
            errors[rest] = xr * inner_err + EPS * (abs(head) + np.abs(xr * inner))
        else:
            i = int(np.argmax(rest))
            raise ConvergenceError(
                f"E_{beta},{rho}({-x[i]:.6g}): neither Taylor nor asymptotic series applies for beta > 1")
        methods[rest] = Method.SPECTRAL_INTEGRAL

    _check(beta, rho, x, values, errors, methods, cfg)
    return values, errors, methods


def _validate(beta, rho):
    if not 0.0 < beta < 2.0:
        raise DomainError(f"beta must lie in (0, 2), got {beta}")
    if not math.isfinite(rho):
        raise DomainError(f"rho must be finite, got {rho}")


def mittag_leffler_batch(beta, rho, z, cfg=None):
    """Vectorized E_{beta,rho}(z) for an array of z <= 0.

    :return: (values, abs_error_est, methods) arrays shaped like ``z``
    """
    _validate(beta, rho)
    z = np.asarray(z, dtype=float)
    if np.any(z > 0) or not np.all(np.isfinite(z)):
        raise DomainError("mittag_leffler is defined here for finite z <= 0 only")
    values, errors, methods = _ml_neg(float(beta), float(rho), -z.ravel(), cfg or SeriesConfig())
    return values.reshape(z.shape), errors.reshape(z.shape), methods.reshape(z.shape)


def mittag_leffler(beta, rho, z, cfg=None):
    """E_{beta,rho}(z) = sum_n z^n / Gamma(beta n + rho) for real z <= 0.

    :param cfg: SeriesConfig with switch radii and tolerances
    :return: EvalResult; ``abs_error_est`` bounds truncation plus rounding
    :raise DomainError: beta outside (0, 2) or z > 0
    :raise ConvergenceError: no method reached ``convergence_rtol``
    """
    values, errors, methods = mittag_leffler_batch(beta, rho, np.array([z], dtype=float), cfg)
    return EvalResult(float(values[0]), float(errors[0]), methods[0])


def mittag_leffler_asymptotic(beta, rho, z, m):
    """Partial sum -sum_{n=1}^{m} z^(-n) / Gamma(rho - beta n); poles of Gamma contribute 0."""
    if not z < 0:
        raise DomainError(f"asymptotic series needs z < 0, got {z}")
    if int(m) != m or m < 1:
        raise DomainError(f"number of terms must be a positive integer, got {m}")
    n = np.arange(1, int(m) + 1, dtype=float)
    terms = -(1.0 / z) ** n * special.rgamma(rho - beta * n)
    return float(neumaier_sum(terms))


def method_seam_gaps(beta, rho, cfg=None):
    """Relative gaps between neighbouring methods at x = taylor_radius ** beta and x = asymptotic_radius.

    Only defined for 0 < beta < 1. Where the asymptotic series is rejected at
    the outer radius the mid-band method continues past it and there is no
    seam, so the outer gap is 0.
    """
    _validate(beta, rho)
    if not (0.0 < beta < 1.0 and rho > 0):
        raise DomainError(f"method seams exist for 0 < beta < 1 and rho > 0, got beta={beta}, rho={rho}")
    cfg = cfg or SeriesConfig()
    mid_band = _spectral if rho < 1.0 + beta else _euler
    inner_x = np.array([cfg.taylor_radius ** beta])
    outer_x = np.array([cfg.asymptotic_radius])

    taylor, _ = _taylor(beta, rho, inner_x, cfg)
    inner, _ = mid_band(beta, rho, inner_x, cfg)
    inner_gap = abs(taylor[0] - inner[0]) / abs(inner[0])

    asymptotic, asymptotic_err = _asymptotic(beta, rho, outer_x, cfg)
    outer_gap = 0.0
    if asymptotic_err[0] <= cfg.rtol * abs(asymptotic[0]):
        outer, _ = mid_band(beta, rho, outer_x, cfg)
        outer_gap = abs(asymptotic[0] - outer[0]) / abs(outer[0])
    return float(inner_gap), float(outer_gap)
