"""The cross-check matrix behind ``ggbm.py validate``.

Each check compares two independent routes to the same number and returns
``(passed, detail)``. A check that raises a GgbmError is recorded as failed
with the error as its detail, so a corrupted setting such as the Taylor
switch radius surfaces as a named failing check.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from tqdm import tqdm

from special_fn.types import SeriesConfig, FoxWrightParams
from special_fn.mittag_leffler import mittag_leffler, mittag_leffler_batch, method_seam_gaps
from special_fn.fox_wright import fox_wright_2psi2
from quadrature.integrate import QuadratureConfig
from quadrature.oracles import (debye_quadrature_batch, debye_quadrature, debye_double_integral,
                                verify_euler_transform, verify_fox_wright_transform)
from formfactor.params import Family, GgbmParams, FormFactorConfig
from formfactor.debye import (debye_bm, debye_gbm, debye_fbm, debye_beta1, debye_general, debye_values,
                              debye_curve, debye_limit_beta0, log_grid)
from formfactor.radius import radius_of_gyration_sq, curvature_radius_sq
from formfactor.asymptote import fit_log_asymptote, asymptote_gbm_coefficient, asymptote_gbm_series
from simulate import laws
from simulate.config import SimConfig
from simulate.paths import sample_paths
from simulate.samplers import path_rng, sample_subordinator_batch
from simulate.estimators import (estimate_covariance, estimate_even_moment, estimate_odd_moment,
                                 estimate_char_function, mc_form_factor)
from utils.errors import GgbmError
from cli.commands import summary_times

logger = logging.getLogger(__name__)

BETA_GRID = (0.25, 0.5, 0.75, 1.0)
ALPHA_GRID = (0.5, 1.0, 1.5)
# alpha = 1, beta = 1/3 tail of y^2 f_D = k1 + k2 ln y
BETA_THIRD_FIT = (-0.827976, 2.95395)
ALPHA_ONE_LIMIT_FIT = (-2.0, 4.0)
TAIL_BETAS = (0.3, 0.5, 0.8)
# GreyBm limit is checked at beta = alpha = GREY_LIMIT_BETA
GREY_LIMIT_BETA = 0.01
ALPHA_ONE_LIMIT_BETA = 1e-3
K_NORMS = (0.5, 1.0, 2.0)
FORM_FACTOR_YS = (0.5, 1.0, 2.0)
DEFAULT_MC_PARAMS = ((1.0, 1.0), (1.0, 1.5), (0.5, 0.5), (0.5, 1.0))
FIT_RTOL = 0.02


@dataclass
class ValidationContext:
    config: dict
    seed: int = 7
    paths: int = 100000
    steps: int = 256
    n_sigma: float = 3.0
    series: SeriesConfig = field(init=False)
    quadrature: QuadratureConfig = field(init=False)
    formfactor: FormFactorConfig = field(init=False)

    def __post_init__(self):
        self.series = SeriesConfig.from_config(self.config)
        self.quadrature = QuadratureConfig.from_config(self.config)
        self.formfactor = FormFactorConfig.from_config(self.config)

    @property
    def section(self):
        return self.config.get("validate", {})

    @property
    def grid_points(self):
        return int(self.section.get("grid_points", 50))


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _verdict(worst, tol, what):
    return worst <= tol, f"max relative deviation {worst:.3e} (tol {tol:g}) {what}"


def check_ml_origin(ctx):
    worst = 0.0
    for beta in np.round(np.arange(0.1, 1.01, 0.1), 10):
        for rho in (1.0, 3.0):
            worst = max(worst, _rel(mittag_leffler(beta, rho, 0.0, ctx.series).value, special.rgamma(rho)))
    return _verdict(worst, 1e-15, "of E(0) from 1/Gamma(rho)")


def check_ml_exponential(ctx):
    z = np.linspace(-50.0, 0.0, 101)
    values, _, _ = mittag_leffler_batch(1.0, 1.0, z, ctx.series)
    return _verdict(_rel(values, np.exp(z)), 1e-12, "of E_1(z) from exp(z) on [-50, 0]")


def check_ml_erfcx(ctx):
    x = np.linspace(0.0, float(ctx.section.get("z_max", 50.0)), ctx.grid_points)
    values, _, methods = mittag_leffler_batch(0.5, 1.0, -x, ctx.series)
    used = ", ".join(sorted({m.value for m in methods}))
    return _verdict(_rel(values, special.erfcx(x)), 1e-9, f"of E_1/2(-x) from erfcx(x) using {used}")


def check_method_seams(ctx):
    worst, where = 0.0, None
    for beta in (0.25, 0.5, 0.75):
        for rho in (1.0, 3.0):
            gap = max(method_seam_gaps(beta, rho, ctx.series))
            if gap >= worst:
                worst, where = gap, (beta, rho)
    return _verdict(worst, 1e-8, f"between adjacent methods, worst at (beta, rho) = {where}")


def check_bm_closed_forms(ctx):
    ys = log_grid(0.01, 30.0, ctx.grid_points)
    reference = np.array([debye_bm(y).value for y in ys])
    routes = [
        np.array([debye_fbm(y, 1.0).value for y in ys]),
        np.array([debye_gbm(y, 1.0, ctx.formfactor).value for y in ys]),
        np.array([debye_beta1(y, 1.0, ctx.formfactor).value for y in ys]),
        np.array([debye_general(y, GgbmParams(1.0, 1.0), ctx.formfactor).value for y in ys]),
    ]
    worst = max(_rel(route, reference) for route in routes)
    return _verdict(worst, 1e-10, "of the fBm, gBm, alpha = 1 and general routes from the Bm closed form")


def check_family_agreement(ctx):
    ys = log_grid(0.01, 5.0, ctx.grid_points)
    worst = 0.0
    for alpha in (0.5, 1.5):
        params = GgbmParams(1.0, alpha)
        oracle, _ = debye_quadrature_batch(ys, params, ctx.quadrature, ctx.series)
        worst = max(worst, _rel([debye_fbm(y, alpha).value for y in ys], oracle))
    for beta in (0.25, 0.5, 0.75):
        oracle, _ = debye_quadrature_batch(ys, GgbmParams(beta, beta), ctx.quadrature, ctx.series)
        worst = max(worst, _rel([debye_gbm(y, beta, ctx.formfactor).value for y in ys], oracle))
        oracle, _ = debye_quadrature_batch(ys, GgbmParams(beta, 1.0), ctx.quadrature, ctx.series)
        worst = max(worst, _rel([debye_beta1(y, beta, ctx.formfactor).value for y in ys], oracle))
    return _verdict(worst, 1e-9, "of the fBm, gBm and alpha = 1 forms from quadrature")


def check_fox_wright_series(ctx):
    """The Fox-Wright evaluator against the Debye series summed term by term in long double."""
    worst = 0.0
    for beta, alpha in ((0.5, 1.0), (0.25, 0.5), (0.75, 1.5)):
        j = np.arange(200, dtype=np.longdouble)
        denominators = np.array([special.gamma(float(beta * k + 1.0)) for k in j], dtype=np.longdouble)
        denominators *= (alpha * j + 1) * (alpha * j + 2)
        for y in (0.1, 0.5, 1.0):
            direct = float(np.sum((-np.longdouble(y * y)) ** j / denominators))
            series = fox_wright_2psi2(FoxWrightParams.debye(beta, alpha), -y * y, ctx.series).value
            worst = max(worst, _rel(series, direct))
    return _verdict(worst, 1e-12, "of 2Psi2 from the directly summed series")


def check_quadrature_oracle(ctx):
    ys = log_grid(0.1, 50.0, ctx.grid_points)
    worst, where = 0.0, None
    for beta in BETA_GRID:
        for alpha in ALPHA_GRID:
            params = GgbmParams(beta, alpha)
            values, _, _ = debye_values(ys, params, ctx.formfactor)
            oracle, _ = debye_quadrature_batch(ys, params, ctx.quadrature, ctx.series)
            deviation = _rel(values, oracle)
            if deviation >= worst:
                worst, where = deviation, (beta, alpha)
    return _verdict(worst, 1e-7, f"from quadrature, worst at (beta, alpha) = {where}")


def check_double_integral(ctx):
    bm = abs(debye_double_integral(1.0, GgbmParams(1.0, 1.0), 64, ctx.series) - debye_bm(1.0).value)
    params = GgbmParams(0.5, 1.0)
    mixed = abs(debye_double_integral(2.0, params, 128, ctx.series)
                - debye_quadrature(2.0, params, ctx.quadrature, ctx.series).value)
    passed = bm <= 1e-6 and mixed <= 1e-5
    return passed, f"|double - Bm| = {bm:.2e} at y = 1, |double - single| = {mixed:.2e} at y = 2"


def check_euler_transform(ctx):
    worst, where = 0.0, None
    for beta in (0.3, 0.6, 0.9):
        for alpha_p in (0.5, 1.0, 1.5):
            for sigma in (0.5, 1.0, 2.0):
                for x in (-0.5, -2.0, -10.0):
                    lhs, rhs = verify_euler_transform(beta, alpha_p, sigma, x, ctx.quadrature, ctx.series)
                    deviation = _rel(lhs, rhs)
                    if deviation >= worst:
                        worst, where = deviation, (beta, alpha_p, sigma, x)
    return _verdict(worst, 1e-8, f"between both sides, worst at (beta, alpha_p, sigma, x) = {where}")


def check_fox_wright_transform(ctx):
    worst = 0.0
    for beta, alpha in ((0.5, 1.0), (0.25, 0.5), (0.75, 1.5)):
        for x in (-0.5, -4.0):
            lhs, rhs = verify_fox_wright_transform(GgbmParams(beta, alpha), x, ctx.quadrature, ctx.series)
            worst = max(worst, _rel(lhs, rhs))
    return _verdict(worst, 1e-8, "of the weighted integral from Gamma(2) 2Psi2")


def check_gbm_tail(ctx):
    y = 100.0
    leading, series = 0.0, 0.0
    for beta in TAIL_BETAS:
        value = debye_gbm(y, beta, ctx.formfactor).value
        leading = max(leading, _rel(value * y * y, asymptote_gbm_coefficient(beta)))
        series = max(series, _rel(value, asymptote_gbm_series(y, beta, 3)))
    passed = leading <= FIT_RTOL and series <= 1e-6
    return passed, f"y^2 f_D(100) off 2/Gamma(3-beta) by {leading:.2e}, three-term expansion by {series:.2e}"


def _fit_deviation(curve, fit_range, expected):
    k1, k2 = fit_log_asymptote(curve, y_min=fit_range[0], y_max=fit_range[1])
    return max(_rel(k1, expected[0]), _rel(k2, expected[1])), (k1, k2)


def check_beta1_constants(ctx):
    fit_range = tuple(ctx.config.get("figures", {}).get("fit_range", (30.0, 300.0)))
    ys = log_grid(fit_range[0], fit_range[1], 60)
    third, fitted = _fit_deviation(debye_curve(GgbmParams(1.0 / 3.0, 1.0), ys, ctx.formfactor), fit_range,
                                   BETA_THIRD_FIT)
    limit, limit_fit = _fit_deviation(debye_curve(None, ys, limit=Family.ALPHA_ONE), fit_range, ALPHA_ONE_LIMIT_FIT)
    passed = third <= FIT_RTOL and limit <= FIT_RTOL
    return passed, (f"beta = 1/3 fit ({fitted[0]:.6f}, {fitted[1]:.6f}), "
                    f"beta -> 0 fit ({limit_fit[0]:.6f}, {limit_fit[1]:.6f})")


def check_beta0_limit(ctx):
    ys = np.linspace(0.05, 0.9, 18)
    grey = _rel([debye_gbm(y, GREY_LIMIT_BETA, ctx.formfactor).value for y in ys],
                [debye_limit_beta0(y, Family.GREY_BM) for y in ys])
    alpha_one = _rel([debye_beta1(y, ALPHA_ONE_LIMIT_BETA, ctx.formfactor).value for y in ys],
                     [debye_limit_beta0(y, Family.ALPHA_ONE) for y in ys])
    return _verdict(max(grey, alpha_one), 0.01,
                    f"from the beta -> 0 curves (GreyBm at beta = alpha = {GREY_LIMIT_BETA:g}, "
                    f"AlphaOne at beta = {ALPHA_ONE_LIMIT_BETA:g})")


def check_radius(ctx):
    worst = 0.0
    for beta in BETA_GRID:
        for alpha in ALPHA_GRID:
            params = GgbmParams(beta, alpha)
            report = radius_of_gyration_sq(params, 10.0)
            worst = max(worst, _rel(curvature_radius_sq(params, 10.0, 1e-3, ctx.formfactor), report.r_g_sq))
    return _verdict(worst, 1e-4, "of the small-y curvature from R_g^2")


FAST_CHECKS = (
    ("ml_origin", check_ml_origin),
    ("ml_exponential", check_ml_exponential),
    ("ml_erfcx_oracle", check_ml_erfcx),
    ("ml_method_seams", check_method_seams),
    ("bm_closed_forms", check_bm_closed_forms),
    ("family_agreement", check_family_agreement),
    ("fox_wright_series", check_fox_wright_series),
    ("debye_quadrature_oracle", check_quadrature_oracle),
    ("debye_double_integral", check_double_integral),
    ("euler_transform", check_euler_transform),
    ("fox_wright_transform", check_fox_wright_transform),
    ("gbm_tail_coefficient", check_gbm_tail),
    ("beta1_log_asymptote", check_beta1_constants),
    ("beta0_limits", check_beta0_limit),
    ("radius_of_gyration", check_radius),
)


def _direction(d):
    """Unit vector of the wave vectors used on a d-dimensional ensemble."""
    unit = np.zeros(d)
    if d == 1:
        unit[0] = 1.0
    else:
        unit[:2] = (0.6, 0.8)
    return unit


def ensemble_z_scores(ens, series_cfg=None, formfactor_cfg=None):
    """z-scores of every ensemble statistic against its analytic law.

    Covariance on the summary_times grid, even and odd moments and the
    characteristic function at the horizon, and the form factor at the
    FORM_FACTOR_YS values of y.
    """
    c = ens.config
    params, end, horizon = c.params, c.n_steps, c.horizon
    times = c.times()
    grid = summary_times(c)
    scores = {}
    for i in grid:
        for j in grid:
            target = laws.covariance(params, times[i], times[j])
            scores[f"covariance({times[i]:g},{times[j]:g})"] = estimate_covariance(ens, i, j).z_score(target)
    for order in (2, 4):
        target = laws.even_moment(params, horizon, order)
        scores[f"moment{order}"] = estimate_even_moment(ens, end, order).z_score(target)
    for order in (1, 3):
        scores[f"moment{order}"] = estimate_odd_moment(ens, end, order).z_score(0.0)
    unit = _direction(c.d)
    for norm in K_NORMS:
        k = norm * unit
        real, imaginary = estimate_char_function(ens, end, k)
        scores[f"char_function(|k|={norm:g})"] = real.z_score(laws.char_function(params, k, horizon, series_cfg))
        scores[f"char_function_im(|k|={norm:g})"] = imaginary.z_score(0.0)
    for y in FORM_FACTOR_YS:
        # y^2 = horizon^alpha |k|^2 / 2
        k = y * np.sqrt(2.0 / horizon ** params.alpha) * unit
        target = debye_general(y, params, formfactor_cfg).value
        scores[f"form_factor(y={y:g})"] = mc_form_factor(ens, k).z_score(target)
    return scores


def _z_scores(ctx, params, d):
    config = SimConfig(params, d=d, n_steps=ctx.steps, horizon=1.0, n_paths=ctx.paths, seed=ctx.seed)
    return ensemble_z_scores(sample_paths(config), ctx.series, ctx.formfactor)


def _worst(scores, n_sigma):
    name, worst = max(scores.items(), key=lambda item: abs(item[1]))
    return abs(worst) <= n_sigma, f"worst |z| = {abs(worst):.2f} ({name}) of {len(scores)}, limit {n_sigma:g}"


def mc_check(params, d):
    def check(ctx):
        return _worst(_z_scores(ctx, params, d), ctx.n_sigma)
    return check


def check_subordinator(ctx):
    beta = 0.5
    samples = sample_subordinator_batch(beta, 10 * ctx.paths, path_rng(ctx.seed, 0))
    scores = {"mean": _sample_z(samples, special.rgamma(beta + 1.0))}
    for s in (0.5, 1.0, 2.0):
        scores[f"laplace({s:g})"] = _sample_z(np.exp(-s * samples), mittag_leffler(beta, 1.0, -s, ctx.series).value)
    return _worst(scores, ctx.n_sigma)


def _sample_z(samples, target):
    return (samples.mean() - target) / (samples.std(ddof=1) / np.sqrt(samples.size))


def full_checks(ctx):
    mc = ctx.section.get("mc", {})
    checks = [("mc_subordinator", check_subordinator)]
    for beta, alpha in mc.get("params", DEFAULT_MC_PARAMS):
        for d in mc.get("dims", (1, 2)):
            params = GgbmParams(float(beta), float(alpha))
            checks.append((f"mc_beta{beta:g}_alpha{alpha:g}_d{d}", mc_check(params, int(d))))
    return checks


def run_validation(level, ctx, progress=True):
    """Run the ``fast`` matrix, plus the Monte Carlo suite for ``full``.

    :return: report dict ``{"level", "passed", "checks": [{"name", "passed", "detail"}]}``
    """
    if level not in ("fast", "full"):
        raise ValueError(f"validation level is fast or full, got {level!r}")
    checks = list(FAST_CHECKS)
    if level == "full":
        checks += full_checks(ctx)

    results = []
    for name, check in tqdm(checks, desc="[validate]", disable=not progress):
        try:
            passed, detail = check(ctx)
        except GgbmError as err:
            passed, detail = False, f"{type(err).__name__}: {err}"
        passed = bool(passed)
        (logger.info if passed else logger.error)(f"{name}: {'pass' if passed else 'FAIL'} - {detail}")
        results.append({"name": name, "passed": passed, "detail": detail})
    return {"level": level, "passed": all(r["passed"] for r in results), "checks": results}
