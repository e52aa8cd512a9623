import math
from dataclasses import dataclass

import numpy as np

from formfactor.params import GgbmParams
from utils.errors import DomainError, SimulationError

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class SimConfig:
    """d-dimensional ggBm ensemble on the uniform grid t_i = i * horizon / n_steps, i = 0..n_steps."""
    params: GgbmParams
    d: int = 1
    n_steps: int = 256
    horizon: float = 1.0
    n_paths: int = 1000
    seed: int = 0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise DomainError(f"n_steps must be an integer >= 2, got {self.n_steps}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError(f"n_paths must be an integer >= 1, got {self.n_paths}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def dt(self):
        return self.horizon / self.n_steps

    def times(self):
        return np.arange(self.n_steps + 1) * self.dt

    def to_dict(self):
        return {"beta": self.params.beta, "alpha": self.params.alpha, "d": self.d, "n_steps": self.n_steps,
                "horizon": self.horizon, "n_paths": self.n_paths, "seed": self.seed}

    @classmethod
    def from_dict(cls, record):
        return cls(params=GgbmParams(float(record["beta"]), float(record["alpha"])),
                   d=int(record["d"]), n_steps=int(record["n_steps"]), horizon=float(record["horizon"]),
                   n_paths=int(record["n_paths"]), seed=int(record["seed"]))


@dataclass(frozen=True)
class PathEnsemble:
    """``paths`` has shape (n_paths, d, n_steps + 1); every path starts at the origin."""
    config: SimConfig
    paths: np.ndarray

    def __post_init__(self):
        c = self.config
        expected = (c.n_paths, c.d, c.n_steps + 1)
        if self.paths.shape != expected:
            raise SimulationError(f"paths have shape {self.paths.shape}, config says {expected}")
        if np.any(self.paths[..., 0] != 0.0):
            raise SimulationError("paths must start at the origin")
        if not np.all(np.isfinite(self.paths)):
            raise SimulationError("paths contain non-finite values")

    def times(self):
        return self.config.times()

    def at(self, t_idx):
        """Positions at grid index ``t_idx``, shape (n_paths, d)."""
        if not 0 <= t_idx <= self.config.n_steps:
            raise DomainError(f"time index {t_idx} outside 0..{self.config.n_steps}")
        return self.paths[:, :, t_idx]


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_samples: int

    @classmethod
    def from_samples(cls, samples):
        """Mean of per-path statistics; std_error is the sample standard deviation over sqrt(n)."""
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        if n == 0:
            raise DomainError("no samples")
        std = float(samples.std(ddof=1)) if n > 1 else 0.0
        return cls(float(samples.mean()), std / math.sqrt(n), n)

    def z_score(self, target):
        if self.std_error == 0:
            return 0.0 if self.value == target else math.inf
        return (self.value - target) / self.std_error

    def to_dict(self, target=None):
        record = {"value": self.value, "std_error": self.std_error, "n_samples": self.n_samples}
        if target is not None:
            record["target"] = target
        return record
