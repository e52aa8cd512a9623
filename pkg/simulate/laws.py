"""Analytic laws of ggBm that the Monte Carlo estimators are checked against."""
import math

import numpy as np

from special_fn.mittag_leffler import mittag_leffler
from utils.errors import DomainError


def covariance(params, t, s):
    """E[B_1(t) B_1(s)] = (t^alpha + s^alpha - |t - s|^alpha) / (2 Gamma(beta + 1))."""
    a = params.alpha
    return (t ** a + s ** a - abs(t - s) ** a) / (2.0 * math.gamma(params.beta + 1.0))


def variance(params, t):
    return t ** params.alpha / math.gamma(params.beta + 1.0)


def even_moment(params, t, order):
    """E[B_1(t)^(2n)] = (2n)! / (2^n Gamma(beta n + 1)) t^(alpha n)."""
    if order % 2 or order < 0:
        raise DomainError(f"even order expected, got {order}")
    n = order // 2
    return math.factorial(order) / (2.0 ** n * math.gamma(params.beta * n + 1.0)) * t ** (params.alpha * n)


def moment(params, t, order):
    """Any moment of one coordinate; odd moments vanish."""
    return 0.0 if order % 2 else even_moment(params, t, order)


def char_function(params, k, t, cfg=None):
    """E[exp(i (k, B(t) - B(s)))] at lag t: E_beta(-|k|^2 t^alpha / 2)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return mittag_leffler(params.beta, 1.0, -float(k @ k) * t ** params.alpha / 2.0, cfg).value


def subordinator_moment(beta, order):
    """E[Y^n] = n! / Gamma(beta n + 1)."""
    return math.factorial(order) / math.gamma(beta * order + 1.0)


def subordinator_laplace(beta, s, cfg=None):
    return mittag_leffler(beta, 1.0, -s, cfg).value


def fbm_covariance(hurst, t, s):
    """E[W(t) W(s)] = (t^2H + s^2H - |t - s|^2H) / 2."""
    two_h = 2.0 * hurst
    return 0.5 * (t ** two_h + s ** two_h - abs(t - s) ** two_h)


def fgn_lag_correlation(hurst, lag=1):
    return 0.5 * (abs(lag + 1) ** (2 * hurst) - 2 * abs(lag) ** (2 * hurst) + abs(lag - 1) ** (2 * hurst))
