import math
from enum import Enum
from dataclasses import dataclass

from utils.errors import ConvergenceError


class Method(str, Enum):
    TAYLOR_SERIES = "TaylorSeries"
    ASYMPTOTIC_EXPANSION = "AsymptoticExpansion"
    SPECTRAL_INTEGRAL = "SpectralIntegral"
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class EvalResult:
    """A special-function value with an absolute error estimate and the method that produced it."""
    value: float
    abs_error_est: float
    method: Method

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConvergenceError(f"non-finite value {self.value} from {self.method.value}")
        if not (math.isfinite(self.abs_error_est) and self.abs_error_est >= 0.0):
            raise ConvergenceError(f"invalid error estimate {self.abs_error_est}")

    def to_dict(self):
        return {"value": self.value, "abs_error_est": self.abs_error_est, "method": self.method.value}


@dataclass(frozen=True)
class FoxWrightParams:
    """Numerator pairs (a_i, b_i) and denominator pairs (c_i, d_i) of the 2Psi2 series."""
    a1: float
    b1: float
    a2: float
    b2: float
    c1: float
    d1: float
    c2: float
    d2: float

    @classmethod
    def debye(cls, beta, alpha):
        """((1, alpha), (1, 1); (1, beta), (3, alpha)), the Debye-function instance."""
        return cls(1.0, alpha, 1.0, 1.0, 1.0, beta, 3.0, alpha)


@dataclass(frozen=True)
class SeriesConfig:
    """Switching radii and tolerances of the Mittag-Leffler evaluator.

    The Taylor region is ``|z| <= taylor_radius ** beta``: the largest series
    term grows like ``exp(|z| ** (1 / beta))``.
    """
    taylor_radius: float = 5.0
    asymptotic_radius: float = 20.0
    max_taylor_terms: int = 4000
    max_asymptotic_terms: int = 50
    rtol: float = 1e-12
    spectral_rtol: float = 1e-12
    convergence_rtol: float = 1e-8

    @classmethod
    def from_config(cls, config):
        section = (config or {}).get("special_fn", {})
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in section.items() if k in fields})
