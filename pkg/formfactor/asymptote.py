"""Large-y behaviour of the Debye functions.

The grey Brownian motion family has the algebraic expansion of E_{beta,3};
for alpha = 1 the tail is (k1 + k2 ln y) y^-2 with k2 = 4 / Gamma(1 - beta).
The general family has no closed asymptote and is fitted instead.
"""
import numpy as np
from scipy import special

from utils.errors import DomainError, InsufficientPointsError

MIN_TAIL_POINTS = 8
MIN_TAIL_Y = 10.0


def _check_beta(beta):
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")


def asymptote_gbm_coefficient(beta):
    """c in f_D(y; beta, beta) ~ c y^-2, c = 2 / Gamma(3 - beta)."""
    _check_beta(beta)
    return 2.0 * special.rgamma(3.0 - beta)


def asymptote_gbm_series(y, beta, m=3):
    """2 sum_{j=1}^{m} (-1)^(j+1) y^(-2j) / Gamma(3 - beta j)."""
    _check_beta(beta)
    if not y > 0 or m < 1:
        raise DomainError(f"need y > 0 and m >= 1, got y={y}, m={m}")
    j = np.arange(1, int(m) + 1, dtype=float)
    return float(2.0 * np.sum((-1.0) ** (j + 1) * float(y) ** (-2.0 * j) * special.rgamma(3.0 - beta * j)))


def asymptote_beta1_log_slope(beta):
    """k2 = 4 / Gamma(1 - beta) of the alpha = 1 tail; 0 at beta = 1."""
    _check_beta(beta)
    return 4.0 * special.rgamma(1.0 - beta)


def fit_log_asymptote(curve, y_min=30.0, y_max=None):
    """Least-squares fit of y^2 f_D(y) = k1 + k2 ln y over the tail y >= y_min.

    :raise InsufficientPointsError: fewer than 8 tail points
    :return: (k1, k2)
    """
    if y_min < MIN_TAIL_Y:
        raise DomainError(f"tail fits start at y >= {MIN_TAIL_Y:g}, got {y_min}")
    ys = np.asarray(curve.ys, dtype=float)
    values = np.asarray(curve.values, dtype=float)
    mask = ys >= y_min
    if y_max is not None:
        mask &= ys <= y_max
    if mask.sum() < MIN_TAIL_POINTS:
        raise InsufficientPointsError(f"{int(mask.sum())} points with y >= {y_min:g}, need {MIN_TAIL_POINTS}")
    design = np.column_stack([np.ones(mask.sum()), np.log(ys[mask])])
    (k1, k2), *_ = np.linalg.lstsq(design, ys[mask] ** 2 * values[mask], rcond=None)
    return float(k1), float(k2)
