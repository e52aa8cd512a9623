import math
from enum import Enum
from typing import Optional, Tuple
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from special_fn.types import Method, SeriesConfig
from quadrature.integrate import QuadratureConfig
from utils.errors import DomainError, ConvergenceError


class Family(str, Enum):
    GENERAL = "General"
    GREY_BM = "GreyBm"
    FRACTIONAL_BM = "FractionalBm"
    STANDARD_BM = "StandardBm"
    ALPHA_ONE = "AlphaOne"


@dataclass(frozen=True)
class GgbmParams:
    """Mittag-Leffler order ``beta`` in (0, 1] and self-similarity exponent ``alpha`` in (0, 2)."""
    beta: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must lie in (0, 1], got {self.beta}")
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")

    def hurst(self):
        return self.alpha / 2.0

    def self_similarity_ratio(self):
        """(alpha + 1)(alpha + 2), the ratio R_e^2 / R_g^2."""
        return (self.alpha + 1.0) * (self.alpha + 2.0)

    def to_dict(self):
        return {"beta": self.beta, "alpha": self.alpha}


def family_of(params):
    if params.beta == 1.0 and params.alpha == 1.0:
        return Family.STANDARD_BM
    if params.beta == 1.0:
        return Family.FRACTIONAL_BM
    if params.alpha == params.beta:
        return Family.GREY_BM
    if params.alpha == 1.0:
        return Family.ALPHA_ONE
    return Family.GENERAL


@dataclass(frozen=True)
class FormFactorConfig:
    """Settings of the Debye engine: series below ``series_cutoff_sq`` = y^2, quadrature above."""
    series_cutoff_sq: float = 25.0
    series_rtol: float = 1e-12
    series: SeriesConfig = field(default_factory=SeriesConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    @classmethod
    def from_config(cls, config):
        section = (config or {}).get("formfactor", {})
        return cls(series_cutoff_sq=section.get("series_cutoff_sq", 25.0),
                   series_rtol=section.get("series_rtol", 1e-12),
                   series=SeriesConfig.from_config(config),
                   quadrature=QuadratureConfig.from_config(config))


# tail monotonicity is checked from this y on
TAIL_START = 3.0
TAIL_SLACK = 1e-12


@dataclass(frozen=True)
class DebyeCurve:
    """A sampled Debye function.

    ``params`` is None for the beta -> 0 limit curves, which carry the family
    in ``limit`` instead.
    """
    family: Family
    params: Optional[GgbmParams]
    ys: Tuple[float, ...]
    values: Tuple[float, ...]
    methods: Tuple[Method, ...]
    errors: Tuple[float, ...] = ()
    limit: Optional[Family] = None

    def __post_init__(self):
        if not len(self.ys) == len(self.values) == len(self.methods):
            raise DomainError(f"curve lengths differ: {len(self.ys)} ys, {len(self.values)} values, "
                              f"{len(self.methods)} methods")
        if self.errors and len(self.errors) != len(self.ys):
            raise DomainError("one error estimate per grid point expected")
        ys = np.asarray(self.ys, dtype=float)
        if ys.size == 0 or np.any(ys <= 0) or np.any(np.diff(ys) <= 0):
            raise DomainError("ys must be positive and strictly increasing")
        values = np.asarray(self.values, dtype=float)
        if values[0] > 1.0 + 1e-12:
            raise ConvergenceError(f"f_D({ys[0]:g}) = {values[0]:.15g} exceeds 1")
        tail = values[np.argmax(ys >= TAIL_START):] if np.any(ys >= TAIL_START) else values[:0]
        rises = np.flatnonzero(np.diff(tail) > TAIL_SLACK * np.abs(tail[:-1]) + 1e-300)
        if rises.size:
            raise ConvergenceError(f"Debye curve rises on its tail after y = {ys[ys >= TAIL_START][rises[0]]:g}")

    def __len__(self):
        return len(self.ys)

    def to_frame(self):
        return pd.DataFrame({
            "y": self.ys,
            "f_D": self.values,
            "method": [m.value for m in self.methods],
            "abs_err": self.errors or (0.0,) * len(self.ys),
        })

    def describe(self):
        described = {"family": self.family.value, "points": len(self.ys)}
        if self.params is not None:
            described.update(self.params.to_dict())
        if self.limit is not None:
            described["limit"] = f"beta->0 {self.limit.value}"
        return described


@dataclass(frozen=True)
class RadiusReport:
    r_e_sq: float
    r_g_sq: float
    ratio_expected: float
    n: float

    def __post_init__(self):
        if not self.n > 0:
            raise DomainError(f"chain length must be positive, got {self.n}")
        if not math.isclose(self.r_e_sq / self.ratio_expected, self.r_g_sq, rel_tol=1e-12):
            raise ConvergenceError("R_e^2 / R_g^2 differs from the self-similarity ratio")

    def to_dict(self):
        return {"r_e_sq": self.r_e_sq, "r_g_sq": self.r_g_sq, "ratio_expected": self.ratio_expected, "n": self.n}
