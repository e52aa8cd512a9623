"""Random variates for ggBm paths.

Fractional Gaussian noise comes from circulant embedding (Davies-Harte):
the autocovariance is wrapped onto a ring of size m, a power of two >= 2 n,
whose FFT gives the eigenvalues. Negative eigenvalues switch to a Cholesky
factor of the Toeplitz covariance.

The subordinator Y = S^(-beta) uses Kanter's representation of the one-sided
stable S with Laplace transform exp(-s^beta), so E[exp(-s Y)] = E_beta(-s).
"""
import math
import logging
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz

from utils.errors import DomainError, SimulationError

logger = logging.getLogger(__name__)

MAX_CHOLESKY_STEPS = 4096
CHOLESKY_JITTER = 1e-12
NEGATIVE_EIGEN_TOL = 1e-10
TINY = np.finfo(float).tiny


def path_rng(seed, index):
    """Counter-based stream of path ``index``: Philox keyed by (seed, index)."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def fgn_autocovariance(hurst, lags):
    """Unit-step fGn autocovariance 1/2 (|k+1|^2H - 2|k|^2H + |k-1|^2H)."""
    k = np.abs(np.asarray(lags, dtype=float))
    two_h = 2.0 * hurst
    return 0.5 * (np.abs(k + 1.0) ** two_h - 2.0 * k ** two_h + np.abs(k - 1.0) ** two_h)


def embedding_size(n_steps):
    return 1 << max(1, int(math.ceil(math.log2(2 * n_steps))))


@lru_cache(maxsize=32)
def _circulant_eigenvalues(hurst, n_steps):
    m = embedding_size(n_steps)
    half = m // 2
    gamma = fgn_autocovariance(hurst, np.arange(half + 1))
    ring = np.concatenate([gamma, gamma[-2:0:-1]])
    eigenvalues = np.fft.fft(ring).real
    if eigenvalues.min() < -NEGATIVE_EIGEN_TOL * eigenvalues.max():
        logger.info(f"circulant embedding has negative eigenvalue {eigenvalues.min():.3e} "
                    f"for H={hurst}, n={n_steps}; using Cholesky")
        return None
    return np.sqrt(np.clip(eigenvalues, 0.0, None) / m)


@lru_cache(maxsize=8)
def _cholesky_factor(hurst, n_steps):
    if n_steps > MAX_CHOLESKY_STEPS:
        raise SimulationError(f"Cholesky fallback is limited to {MAX_CHOLESKY_STEPS} steps, got {n_steps}")
    cov = toeplitz(fgn_autocovariance(hurst, np.arange(n_steps)))
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        logger.info(f"fGn covariance not positive definite for H={hurst}; adding {CHOLESKY_JITTER:g} jitter")
    try:
        return np.linalg.cholesky(cov + CHOLESKY_JITTER * np.eye(n_steps))
    except np.linalg.LinAlgError as err:
        raise SimulationError(f"fGn covariance for H={hurst}, n={n_steps} is not positive definite") from err


def noise_plan(hurst, n_steps):
    """Which generator serves (hurst, n_steps): 'iid', 'circulant' or 'cholesky'."""
    if hurst == 0.5:
        return "iid"
    return "circulant" if _circulant_eigenvalues(hurst, n_steps) is not None else "cholesky"


def draw_noise(hurst, n_steps, count, rng):
    """The standard normals consumed for ``count`` independent fGn rows."""
    plan = noise_plan(hurst, n_steps)
    if plan == "circulant":
        return rng.standard_normal((count, 2, embedding_size(n_steps)))
    return rng.standard_normal((count, n_steps))


def fgn_from_noise(hurst, n_steps, dt, noise):
    """Map normals from :func:`draw_noise` (leading axes arbitrary) to fGn increments with step ``dt``."""
    plan = noise_plan(hurst, n_steps)
    scale = dt ** hurst
    if plan == "iid":
        return scale * noise
    if plan == "cholesky":
        return scale * noise @ _cholesky_factor(hurst, n_steps).T
    root = _circulant_eigenvalues(hurst, n_steps)
    spectrum = root * (noise[..., 0, :] + 1j * noise[..., 1, :])
    return scale * np.fft.fft(spectrum, axis=-1).real[..., :n_steps]


def sample_fbm_increments(hurst, n_steps, dt, rng):
    """One realization of fractional Gaussian noise; cumulative sums give fBm with Var W(t) = t^(2H)."""
    if not 0.0 < hurst < 1.0:
        raise DomainError(f"hurst must lie in (0, 1), got {hurst}")
    if int(n_steps) != n_steps or n_steps < 1 or not dt > 0:
        raise DomainError(f"need n_steps >= 1 and dt > 0, got {n_steps}, {dt}")
    noise = draw_noise(hurst, int(n_steps), 1, rng)
    return fgn_from_noise(hurst, int(n_steps), dt, noise)[0]


def _check_beta(beta):
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")


def subordinator_from_uniforms(beta, u, e):
    """Kanter: log Y = (1-beta) log E - beta log sin(beta U) - (1-beta) log sin((1-beta) U) + log sin U."""
    if beta == 1.0:
        return np.ones(np.shape(u))
    log_y = ((1.0 - beta) * np.log(np.maximum(e, TINY))
             - beta * np.log(np.sin(beta * u))
             - (1.0 - beta) * np.log(np.sin((1.0 - beta) * u))
             + np.log(np.sin(u)))
    return np.exp(log_y)


def _draw_subordinator_inputs(beta, rng, size=None):
    u = math.pi * (1.0 - rng.random(size))
    e = rng.standard_exponential(size)
    return u, e


def sample_subordinator(beta, rng):
    """Y > 0 with E[exp(-s Y)] = E_beta(-s); the constant 1 at beta = 1."""
    _check_beta(beta)
    if beta == 1.0:
        return 1.0
    u, e = _draw_subordinator_inputs(beta, rng)
    return float(subordinator_from_uniforms(beta, u, e))


def sample_subordinator_batch(beta, size, rng):
    _check_beta(beta)
    if beta == 1.0:
        return np.ones(size)
    u, e = _draw_subordinator_inputs(beta, rng, size)
    return subordinator_from_uniforms(beta, u, e)
