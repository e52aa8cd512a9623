import math

import numpy as np
from scipy import special

from special_fn.types import EvalResult, Method, SeriesConfig
from utils.errors import DomainError, ConvergenceError
from utils.summation import neumaier_sum

EPS = np.finfo(float).eps
LOG_TAIL = math.log(1e-20)
LOG_OVERFLOW = 700.0
MAX_LOST_DIGITS = 14.0


def _log_gamma_ratio(p, n):
    """log|Gamma(a1+b1 n)Gamma(a2+b2 n) / (Gamma(c1+d1 n)Gamma(c2+d2 n))| and its sign."""
    num1, num2 = p.a1 + p.b1 * n, p.a2 + p.b2 * n
    den1, den2 = p.c1 + p.d1 * n, p.c2 + p.d2 * n
    with np.errstate(divide='ignore', invalid='ignore'):
        log_ratio = (special.gammaln(num1) + special.gammaln(num2)
                     - special.gammaln(den1) - special.gammaln(den2))
    sign = special.gammasgn(num1) * special.gammasgn(num2) * special.gammasgn(den1) * special.gammasgn(den2)
    # a pole in the denominator makes the term vanish
    pole = np.isinf(special.gammaln(den1)) | np.isinf(special.gammaln(den2))
    log_ratio = np.where(pole, -np.inf, log_ratio)
    sign = np.where(pole, 0.0, sign)
    return log_ratio, sign


def fox_wright_2psi2(p, x, cfg=None):
    """Sum_n Gamma(a1+b1 n)Gamma(a2+b2 n) / (Gamma(c1+d1 n)Gamma(c2+d2 n)) x^n / n! for x <= 0.

    Terms are built from log-gamma differences with tracked signs and added with
    Neumaier summation. The error estimate is the first omitted term plus the
    rounding of the largest terms.

    :param p: FoxWrightParams
    :raise ConvergenceError: more than 14 digits lost to cancellation, or terms overflow
    """
    cfg = cfg or SeriesConfig()
    if not x <= 0:
        raise DomainError(f"fox_wright_2psi2 is evaluated for x <= 0 only, got {x}")
    if p.d1 + p.d2 + 1.0 - p.b1 - p.b2 <= 0:
        raise DomainError("series does not converge for every x with these parameters")

    n = np.arange(cfg.max_taylor_terms, dtype=float)
    log_ratio, sign = _log_gamma_ratio(p, n)
    if x == 0:
        head = math.exp(log_ratio[0]) * sign[0]
        return EvalResult(float(head), EPS * abs(head), Method.TAYLOR_SERIES)

    log_terms = log_ratio + n * math.log(-x) - special.gammaln(n + 1.0)
    finite = np.isfinite(log_terms)
    peak = log_terms[finite].max()
    if peak > LOG_OVERFLOW:
        raise ConvergenceError(f"2Psi2 terms overflow at x={x:.6g} (log of largest term {peak:.1f})")

    past = (n > np.argmax(np.where(finite, log_terms, -np.inf))) & finite & (log_terms < peak + LOG_TAIL)
    n_terms = int(np.argmax(past)) if past.any() else n.size - 1

    magnitudes = np.exp(log_terms[:n_terms])
    terms = sign[:n_terms] * np.where(n[:n_terms] % 2 == 0, 1.0, -1.0) * magnitudes
    value = float(neumaier_sum(terms))
    gross = magnitudes.sum()

    if gross > 0 and (value == 0.0 or math.log10(gross / abs(value)) > MAX_LOST_DIGITS):
        raise ConvergenceError(f"2Psi2 series at x={x:.6g} lost more than {MAX_LOST_DIGITS:g} digits to cancellation")

    weights = np.where(finite[:n_terms], 1.0 + np.abs(log_terms[:n_terms]), 0.0)
    rounding = 0.5 * EPS * (magnitudes * weights).sum()
    truncation = 2.0 * math.exp(log_terms[n_terms]) if np.isfinite(log_terms[n_terms]) else 0.0
    return EvalResult(value, float(rounding + truncation), Method.TAYLOR_SERIES)
