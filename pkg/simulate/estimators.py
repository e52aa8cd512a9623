"""Monte Carlo estimators over a PathEnsemble.

Each estimator reduces a path to one statistic (averaged over the d
coordinates, which are identically distributed) and reports the mean over
paths with its standard error.
"""
import logging

import numpy as np

from simulate.config import McEstimate
from utils.errors import DomainError, DimensionMismatchError

logger = logging.getLogger(__name__)


def _wave_vector(ens, k):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (ens.config.d,):
        raise DimensionMismatchError(f"k has {k.size} components, ensemble dimension is {ens.config.d}")
    return k


def estimate_covariance(ens, t_idx, s_idx):
    """Per-coordinate E[B_j(t) B_j(s)]."""
    return McEstimate.from_samples((ens.at(t_idx) * ens.at(s_idx)).mean(1))


def estimate_even_moment(ens, t_idx, order_2n):
    if order_2n < 2 or order_2n % 2:
        raise DomainError(f"even order >= 2 expected, got {order_2n}")
    return McEstimate.from_samples((ens.at(t_idx) ** order_2n).mean(1))


def estimate_odd_moment(ens, t_idx, order):
    if order < 1 or order % 2 == 0:
        raise DomainError(f"odd order expected, got {order}")
    return McEstimate.from_samples((ens.at(t_idx) ** order).mean(1))


def estimate_increment_moment(ens, t_idx, h_idx, order):
    """Moment of B(t + h) - B(h), for comparison with the moment of B(t)."""
    if t_idx + h_idx > ens.config.n_steps:
        raise DomainError(f"t_idx + h_idx exceeds the grid ({t_idx} + {h_idx} > {ens.config.n_steps})")
    increments = ens.at(t_idx + h_idx) - ens.at(h_idx)
    return McEstimate.from_samples((increments ** order).mean(1))


def estimate_char_function(ens, t_idx, k):
    """Real and imaginary parts of E[exp(i (k, B(t)))]."""
    phase = ens.at(t_idx) @ _wave_vector(ens, k)
    return McEstimate.from_samples(np.cos(phase)), McEstimate.from_samples(np.sin(phase))


def trapezoid_weights(n_points, dt):
    weights = np.full(n_points, dt)
    weights[[0, -1]] = 0.5 * dt
    return weights


def mc_form_factor(ens, k, with_imaginary=False):
    """(1/n^2) int int E[cos(k . (X(t) - X(s)))] dt ds by the trapezoid rule on every path.

    The double sum factorizes: sum_ij w_i w_j cos(a_i - a_j) = (sum w cos a)^2 + (sum w sin a)^2.
    With ``with_imaginary`` the single time average of sin(k . X(t)) is returned as
    well; it vanishes by symmetry.
    """
    k = _wave_vector(ens, k)
    phase = np.einsum("pdt,d->pt", ens.paths, k)
    weights = trapezoid_weights(ens.config.n_steps + 1, ens.config.dt)
    horizon = ens.config.horizon
    cos_part = np.cos(phase) @ weights
    sin_part = np.sin(phase) @ weights
    real = McEstimate.from_samples((cos_part ** 2 + sin_part ** 2) / horizon ** 2)
    imaginary = McEstimate.from_samples(sin_part / horizon)
    logger.debug(f"form factor at |k|={np.linalg.norm(k):g}: {real.value:.6f} +- {real.std_error:.2e}, "
                 f"imaginary mean {imaginary.value:.2e}")
    if with_imaginary:
        return real, imaginary
    return real
