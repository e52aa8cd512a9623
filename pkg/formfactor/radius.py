import math

from formfactor.params import RadiusReport
from formfactor.debye import debye_general
from utils.errors import DomainError


def _check_n(n):
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")


def end_to_end_sq(params, n):
    """Mean square end-to-end length n^alpha / Gamma(beta + 1)."""
    _check_n(n)
    return n ** params.alpha / math.gamma(params.beta + 1.0)


def radius_of_gyration_sq(params, n):
    _check_n(n)
    r_e_sq = end_to_end_sq(params, n)
    ratio = params.self_similarity_ratio()
    return RadiusReport(r_e_sq=r_e_sq, r_g_sq=r_e_sq / ratio, ratio_expected=ratio, n=float(n))


def curvature_radius_sq(params, n, y=1e-3, cfg=None):
    """R_g^2 read off the small-y curvature of the Debye function.

    1 - f_D(y) = |k|^2 R_g^2 + O(y^4) with y^2 = n^alpha |k|^2 / 2.
    """
    _check_n(n)
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    f = debye_general(y, params, cfg).value
    return n ** params.alpha * (1.0 - f) / (2.0 * y * y)
