"""High-precision series used as fixtures."""
import mpmath

GUARD_DIGITS = 30


def _digits(x, order):
    # decimal size of the largest term: exp(x ** (1 / order))
    return int(float(x) ** (1.0 / order) / 2.3) + GUARD_DIGITS


def mittag_leffler_series(beta, rho, z):
    x = abs(z)
    with mpmath.workdps(_digits(x, beta)):
        z = mpmath.mpf(z)
        n_min = int(2 * x ** (1.0 / beta)) + 10
        tiny = mpmath.mpf(10) ** (-GUARD_DIGITS)
        total, n = mpmath.mpf(0), 0
        while True:
            term = z ** n * mpmath.rgamma(beta * n + rho)
            total += term
            if n > n_min and abs(term) < tiny * max(1, abs(total)):
                return float(total)
            n += 1


def debye_series(y, beta, alpha):
    """2 sum_j (-y^2)^j / (Gamma(beta j + 1)(alpha j + 1)(alpha j + 2))."""
    u = y * y
    with mpmath.workdps(_digits(u, beta)):
        u = mpmath.mpf(u)
        n_min = int(2 * float(u) ** (1.0 / beta)) + 10
        tiny = mpmath.mpf(10) ** (-GUARD_DIGITS)
        total, j = mpmath.mpf(0), 0
        while True:
            term = (-u) ** j * mpmath.rgamma(beta * j + 1) / ((alpha * j + 1) * (alpha * j + 2))
            total += term
            if j > n_min and abs(term) < tiny * max(1, abs(total)):
                return float(2 * total)
            j += 1
