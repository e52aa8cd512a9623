"""Implementations of the ml, curve, simulate and formfactor subcommands.

Every command returns the JSON-ready record it reports; writing files is a
side effect, printing is left to ``ggbm.py``.
"""
import os
import json
import logging
from enum import Enum
from typing import Optional
from dataclasses import dataclass

import numpy as np

from special_fn.types import SeriesConfig
from special_fn.mittag_leffler import mittag_leffler
from formfactor.params import Family, GgbmParams, FormFactorConfig
from formfactor.debye import debye_curve, form_factor, log_grid, linear_grid
from formfactor.asymptote import fit_log_asymptote, asymptote_beta1_log_slope, asymptote_gbm_coefficient
from simulate.config import SimConfig
from simulate.paths import sample_paths, DEFAULT_CHUNK
from simulate.container import save_ensemble, load_ensemble
from simulate.estimators import estimate_covariance, estimate_even_moment, estimate_odd_moment, mc_form_factor
from simulate import laws
from utils.errors import DomainError
from utils.utils import mkdir

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"
TAIL_FIT_POINTS = 60


class Scale(str, Enum):
    LINEAR = "Linear"
    LOG_LOG = "LogLog"


@dataclass(frozen=True)
class CurveRequest:
    """One Debye curve to tabulate.

    ``beta`` / ``alpha`` are completed from the family tag where it fixes them
    (StandardBm fixes both, GreyBm ties alpha to beta). With ``limit`` the
    beta -> 0 curve of the GreyBm or AlphaOne family is produced instead.
    """
    family: Family
    beta: Optional[float] = None
    alpha: Optional[float] = None
    y_min: float = 0.05
    y_max: float = 100.0
    points: int = 200
    scale: Scale = Scale.LOG_LOG
    limit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "scale", Scale(self.scale))
        if not 0.0 < self.y_min < self.y_max:
            raise DomainError(f"need 0 < y_min < y_max, got {self.y_min}, {self.y_max}")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError(f"points must be an integer >= 2, got {self.points}")
        if self.limit and self.family not in (Family.GREY_BM, Family.ALPHA_ONE):
            raise DomainError(f"beta -> 0 limit curves exist for GreyBm and AlphaOne, got {self.family.value}")
        if not self.limit:
            self.params()

    def params(self):
        """The GgbmParams of the curve; None for a limit curve."""
        if self.limit:
            return None
        family, beta, alpha = self.family, self.beta, self.alpha
        if family is Family.STANDARD_BM:
            beta, alpha = 1.0, 1.0
        elif family is Family.FRACTIONAL_BM:
            beta = 1.0
        elif family is Family.GREY_BM:
            if alpha is not None and alpha != beta:
                raise DomainError(f"GreyBm has alpha = beta, got beta={beta}, alpha={alpha}")
            alpha = beta
        elif family is Family.ALPHA_ONE:
            alpha = 1.0
        if beta is None or alpha is None:
            raise DomainError(f"{family.value} curve needs beta and alpha")
        return GgbmParams(float(beta), float(alpha))

    def grid(self):
        if self.scale is Scale.LOG_LOG:
            return log_grid(self.y_min, self.y_max, self.points)
        return linear_grid(self.y_min, self.y_max, self.points)

    def label(self):
        if self.limit:
            return f"{self.family.value.lower()}_limit"
        params = self.params()
        return f"{self.family.value.lower()}_b{params.beta:g}_a{params.alpha:g}"


def cmd_ml(beta, rho, z, config=None):
    result = mittag_leffler(beta, rho, z, SeriesConfig.from_config(config))
    logger.info(f"E_{{{beta:g},{rho:g}}}({z:g}) = {result.value:.16g} by {result.method.value}")
    return {"beta": beta, "rho": rho, "z": z, **result.to_dict()}


def build_curve(req, config=None, progress=False):
    limit = req.family if req.limit else None
    return debye_curve(req.params(), req.grid(), FormFactorConfig.from_config(config), limit=limit,
                       progress=progress)


def cmd_curve(req, out_path, config=None, progress=False):
    """Write the curve of ``req`` as CSV ``y,f_D,method,abs_err``."""
    curve = build_curve(req, config, progress)
    mkdir(os.path.dirname(os.path.abspath(out_path)))
    curve.to_frame().to_csv(out_path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"wrote {len(curve)} rows to {out_path}")
    return {"path": out_path, **curve.describe()}


def figure_requests(config):
    """The curves of the ``figures`` preset: general ggBm, grey Bm and alpha = 1 families."""
    section = config["figures"]
    grid = dict(y_min=section["y_min"], y_max=section["y_max"], points=section["points"], scale=section["scale"])
    requests = [CurveRequest(Family.GENERAL, beta, alpha, **grid) for beta, alpha in section["general"]]
    for key, family in (("grey_bm", Family.GREY_BM), ("alpha_one", Family.ALPHA_ONE)):
        requests += [CurveRequest(family, beta, **grid) for beta in section[key]["betas"]]
        if section[key].get("limit"):
            requests.append(CurveRequest(family, limit=True, **grid))
    return requests


def _tail_fit(req, fit_range, config):
    """Fit y^2 f_D = k1 + k2 ln y on a dedicated log grid over ``fit_range``."""
    tail = CurveRequest(req.family, req.beta, req.alpha, y_min=fit_range[0], y_max=fit_range[1],
                        points=TAIL_FIT_POINTS, limit=req.limit)
    k1, k2 = fit_log_asymptote(build_curve(tail, config), y_min=fit_range[0], y_max=fit_range[1])
    fit = {"k1": k1, "k2": k2, "y_range": list(fit_range)}
    if not req.limit:
        fit["k2_expected"] = asymptote_beta1_log_slope(req.params().beta)
    return fit


def cmd_figures(out_dir, config, progress=False):
    """Write one CSV per preset curve plus ``figures.json`` with the parameter sets and the asymptote fits."""
    mkdir(out_dir)
    fit_range = tuple(config["figures"]["fit_range"])
    records = []
    for req in figure_requests(config):
        path = os.path.join(out_dir, f"{req.label()}.csv")
        record = cmd_curve(req, path, config, progress)
        record["path"] = os.path.basename(path)
        if req.family is Family.ALPHA_ONE:
            record["tail_fit"] = _tail_fit(req, fit_range, config)
        elif req.family is Family.GREY_BM and not req.limit:
            record["tail_coefficient"] = asymptote_gbm_coefficient(req.params().beta)
        records.append(record)
    summary = {"preset": "figures", "curves": records}
    with open(os.path.join(out_dir, "figures.json"), "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
    logger.info(f"wrote {len(records)} curves to {out_dir}")
    return summary


def summary_times(config):
    """Grid indices of the covariance summary: quarter, half, three quarters and the end of the horizon."""
    n = config.n_steps
    return sorted({max(1, n // 4), max(1, n // 2), max(1, 3 * n // 4), n})


def summarize_ensemble(ens, orders=(1, 2, 3, 4)):
    """Variance, covariance grid and moments at the final time against their analytic values."""
    c = ens.config
    end = c.n_steps
    times = ens.times()
    params = c.params
    grid = summary_times(c)
    covariance = [
        {"t": float(times[i]), "s": float(times[j]),
         **estimate_covariance(ens, i, j).to_dict(laws.covariance(params, times[i], times[j]))}
        for i in grid for j in grid if j <= i
    ]
    even = {str(p): estimate_even_moment(ens, end, p).to_dict(laws.even_moment(params, c.horizon, p))
            for p in orders if p % 2 == 0}
    odd = {str(p): estimate_odd_moment(ens, end, p).to_dict(0.0) for p in orders if p % 2}
    return {
        "variance": estimate_even_moment(ens, end, 2).to_dict(laws.variance(params, c.horizon)),
        "covariance": covariance,
        "even_moments": even,
        "odd_moments": odd,
    }


def cmd_simulate(sim_config, out_path, workers=None, chunk_size=DEFAULT_CHUNK, progress=False):
    ens = sample_paths(sim_config, workers=workers, chunk_size=chunk_size, progress=progress)
    save_ensemble(ens, out_path)
    logger.info(f"wrote ensemble {ens.paths.shape} to {out_path}")
    return {"config": sim_config.to_dict(), "ensemble": out_path, **summarize_ensemble(ens)}


def cmd_formfactor(k, n=None, beta=None, alpha=None, mc_path=None, config=None):
    """Analytic S(k) for a path of length ``n``; with ``mc_path`` also its estimate from a stored ensemble.

    Unset ``n``, ``beta`` and ``alpha`` default to 1, or to the ensemble's
    horizon and parameters when ``mc_path`` is given. Values that contradict
    the ensemble are a DomainError.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    ens = None
    if mc_path is not None:
        ens = load_ensemble(mc_path)
        c = ens.config
        stored = {"n": c.horizon, "beta": c.params.beta, "alpha": c.params.alpha}
        requested = {"n": n, "beta": beta, "alpha": alpha}
        clashes = {key: value for key, value in requested.items() if value is not None and value != stored[key]}
        if clashes:
            raise DomainError(f"{clashes} contradict the ensemble {mc_path} ({stored})")
        n, beta, alpha = stored["n"], stored["beta"], stored["alpha"]
        d = c.d
    else:
        n, beta, alpha = (1.0 if v is None else v for v in (n, beta, alpha))
        d = k.size
    params = GgbmParams(float(beta), float(alpha))
    result = form_factor(k, d, n, params, FormFactorConfig.from_config(config))
    y = float(np.sqrt(n ** params.alpha * float(k @ k) / 2.0))
    record = {"k": k.tolist(), "n": n, "beta": params.beta, "alpha": params.alpha, "y": y, **result.to_dict()}
    if ens is not None:
        estimate = mc_form_factor(ens, k)
        record["mc"] = {**estimate.to_dict(), "z_score": estimate.z_score(result.value), "ensemble": mc_path}
        logger.info(f"S(k) = {result.value:.8f}, Monte Carlo {estimate.value:.8f} +- {estimate.std_error:.2e}")
    return record
