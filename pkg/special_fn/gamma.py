import math

import numpy as np
from scipy import special

from utils.errors import DomainError, ConvergenceError

EPS = np.finfo(float).eps
FPMIN = 1e-300
MAX_ITER = 10000


def gamma_ln(x):
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"gamma_ln needs x > 0, got {x}")
    return float(special.gammaln(x))


def _series(a, x):
    # sum_n x^n / (a (a+1) ... (a+n)), all terms positive
    ap = a
    term = total = 1.0 / a
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total
    raise ConvergenceError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _continued_fraction(a, x):
    # modified Lentz for Gamma(a, x) * exp(x) * x^(-a)
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge for a={a}, x={x}")


def _check(a, x):
    if not (a > 0 and x >= 0):
        raise DomainError(f"incomplete gamma needs a > 0 and x >= 0, got a={a}, x={x}")


def lower_incomplete_gamma(a, x):
    """gamma(a, x) = int_0^x t^(a-1) e^(-t) dt.

    Series below x = a + 1, continued fraction for the complement above.
    """
    _check(a, x)
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return _series(a, x) * math.exp(-x + a * math.log(x))
    upper = _continued_fraction(a, x) * math.exp(-x + a * math.log(x))
    return math.exp(gamma_ln(a)) - upper


def scaled_lower_gamma(a, x):
    """x^(-a) * gamma(a, x), finite at x = 0 where it equals 1/a."""
    _check(a, x)
    if x == 0:
        return 1.0 / a
    if x < a + 1.0:
        return _series(a, x) * math.exp(-x)
    return math.exp(gamma_ln(a) - a * math.log(x)) - _continued_fraction(a, x) * math.exp(-x)
