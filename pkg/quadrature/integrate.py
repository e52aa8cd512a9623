"""Adaptive Gauss-Kronrod (7/15) integration.

Panels are refined in batches: every panel whose share of the error budget
is above average is bisected in the same pass, and the integrand is called
once per pass on all new nodes. Integrands take a 1-d array of nodes and
return either an array of the same length or a ``(K, len(nodes))`` array,
in which case K integrals are computed together and the tolerance has to be
met by each of them.
"""
from dataclasses import dataclass

import numpy as np

from special_fn.types import EvalResult, Method
from utils.errors import DomainError, QuadratureError

EPS = np.finfo(float).eps
UFLOW = np.finfo(float).tiny

# QUADPACK qk15 abscissae and weights, positive half, outermost node first
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    nodes_per_panel: int = 15
    grading_ratio: float = 0.25

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.nodes_per_panel != NODES.size:
            raise DomainError(f"only the {NODES.size}-node Kronrod rule is available")
        if not 0 < self.grading_ratio < 1:
            raise DomainError("grading_ratio must lie in (0, 1)")

    @classmethod
    def from_config(cls, config):
        section = (config or {}).get("quadrature", {})
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in section.items() if k in fields})


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float)
    fx = fx.reshape((-1, a.size, NODES.size))

    res_k = (fx * KRONROD_WEIGHTS).sum(-1) * half
    res_g = (fx * GAUSS_WEIGHTS).sum(-1) * half
    res_abs = (np.abs(fx) * KRONROD_WEIGHTS).sum(-1) * np.abs(half)
    mean = 0.5 * (fx * KRONROD_WEIGHTS).sum(-1)
    res_asc = (np.abs(fx - mean[..., None]) * KRONROD_WEIGHTS).sum(-1) * np.abs(half)

    err = np.abs(res_k - res_g)
    with np.errstate(divide='ignore', invalid='ignore'):
        scaled = res_asc * np.minimum(1.0, (200.0 * err / res_asc) ** 1.5)
    err = np.where((res_asc != 0) & (err != 0), scaled, err)
    floor = 50.0 * EPS * res_abs
    err = np.where(res_abs > UFLOW / (50.0 * EPS), np.maximum(floor, err), err)
    if not np.all(np.isfinite(res_k)):
        raise QuadratureError("integrand returned non-finite values")
    return res_k, err


def integrate_panels(f, breakpoints, cfg=None, rel_tol=None, abs_tol=None, max_subdivisions=None):
    """Integrate over the mesh ``breakpoints`` with batch bisection.

    :return: (values, errors), both shaped ``(K,)``
    """
    cfg = cfg or QuadratureConfig()
    rel_tol = cfg.rel_tol if rel_tol is None else rel_tol
    abs_tol = cfg.abs_tol if abs_tol is None else abs_tol
    limit = cfg.max_subdivisions if max_subdivisions is None else max_subdivisions

    bp = np.asarray(breakpoints, dtype=float)
    if bp.size < 2 or np.any(np.diff(bp) <= 0):
        raise DomainError("breakpoints must be strictly increasing")
    a, b = bp[:-1], bp[1:]
    values, errors = _gk15(f, a, b)

    while True:
        total = values.sum(1)
        err = errors.sum(1)
        target = np.maximum(abs_tol, rel_tol * np.abs(total))
        if np.all(err <= target):
            return total, err

        n_panels = a.size
        room = limit - n_panels
        score = (errors / target[:, None]).max(0)
        splittable = (b - a) > 8.0 * EPS * np.maximum(np.abs(a), np.abs(b))
        score = np.where(splittable, score, 0.0)
        if room <= 0 or not np.any(score > 0):
            raise QuadratureError(
                f"tolerance not met after {n_panels} panels: "
                f"error {err.max():.3e} > target {target[np.argmax(err / target)]:.3e}")

        idx = np.flatnonzero(score > 1.0 / n_panels)
        if idx.size == 0:
            idx = np.array([np.argmax(score)])
        if idx.size > room:
            idx = idx[np.argsort(score[idx])[::-1][:room]]

        keep = np.ones(n_panels, dtype=bool)
        keep[idx] = False
        mid = 0.5 * (a[idx] + b[idx])
        new_a = np.concatenate([a[idx], mid])
        new_b = np.concatenate([mid, b[idx]])
        new_values, new_errors = _gk15(f, new_a, new_b)
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        values = np.concatenate([values[:, keep], new_values], axis=1)
        errors = np.concatenate([errors[:, keep], new_errors], axis=1)


def graded_breakpoints(a, b, levels, ratio=0.25, toward="left"):
    """Mesh on [a, b] with ``levels`` geometric cells shrinking toward one endpoint."""
    levels = int(max(0, levels))
    fractions = ratio ** np.arange(levels, 0, -1)
    if toward == "left":
        inner = a + (b - a) * fractions
    else:
        inner = (b - (b - a) * fractions)[::-1]
    return np.concatenate([[a], inner, [b]])


def grading_levels(width_min, ratio=0.25, max_levels=60):
    """Number of geometric cells needed to reach a panel of relative width ``width_min``."""
    if not width_min < 1:
        return 0
    width_min = max(width_min, 1e-300)
    return int(min(max_levels, np.ceil(np.log(width_min) / np.log(ratio))))


def kink_levels(power, scale, ratio=0.25):
    """Geometric levels resolving g(scale * t ** power) near t = 0.

    Large ``scale`` narrows the region where g varies; a non-integer ``power``
    leaves a derivative singularity at 0.
    """
    width = 1.0
    if power < 1.0 or scale > 1.0:
        width = (1e-3 / max(scale, 1e-3)) ** (1.0 / power)
    if not float(power).is_integer():
        width = min(width, 1e-12 ** (1.0 / (1.0 + power)))
    return grading_levels(width, ratio)


def integrate_adaptive(f, a, b, cfg=None, points=None):
    """Scalar adaptive integral of ``f`` over [a, b].

    :param f: vectorized integrand
    :param points: optional interior breakpoints
    :return: EvalResult with the Kronrod value and the accumulated error estimate
    """
    if not a < b:
        raise DomainError(f"integrate_adaptive needs a < b, got [{a}, {b}]")
    inner = sorted(p for p in (points or ()) if a < p < b)
    values, errors = integrate_panels(lambda x: np.asarray(f(x), dtype=float)[None, :],
                                      [a, *inner, b], cfg)
    return EvalResult(float(values[0]), float(errors[0]), Method.QUADRATURE)


def integrate_weighted(g, p, q, cfg=None, left_levels=0, rel_tol=None, abs_tol=None):
    """int_0^1 t^(p-1) (1-t)^(q-1) g(t) dt for p, q > 0.

    The interval is split at 1/2; an algebraic endpoint singularity (p < 1 or
    q < 1) is removed by t = u^(1/p) on the left half and 1 - t = u^(1/q) on
    the right half. ``left_levels`` grades the left mesh toward t = 0 for
    integrands that are not smooth there.
    """
    cfg = cfg or QuadratureConfig()
    if not (p > 0 and q > 0):
        raise DomainError(f"weight exponents must be positive, got p={p}, q={q}")
    abs_tol = cfg.abs_tol if abs_tol is None else abs_tol

    def as_rows(values):
        values = np.asarray(values, dtype=float)
        return values[None, :] if values.ndim == 1 else values

    if p < 1:
        def left(u):
            t = u ** (1.0 / p)
            return as_rows(g(t)) * ((1.0 - t) ** (q - 1.0) / p)
        left_end = 0.5 ** p
    else:
        def left(t):
            return as_rows(g(t)) * (t ** (p - 1.0) * (1.0 - t) ** (q - 1.0))
        left_end = 0.5

    if q < 1:
        def right(u):
            t = 1.0 - u ** (1.0 / q)
            return as_rows(g(t)) * (t ** (p - 1.0) / q)
        right_bp = [0.0, 0.5 ** q]
    else:
        def right(t):
            return as_rows(g(t)) * (t ** (p - 1.0) * (1.0 - t) ** (q - 1.0))
        right_bp = [0.5, 1.0]

    left_bp = graded_breakpoints(0.0, left_end, left_levels, cfg.grading_ratio)
    v1, e1 = integrate_panels(left, left_bp, cfg, rel_tol=rel_tol, abs_tol=0.5 * abs_tol)
    v2, e2 = integrate_panels(right, right_bp, cfg, rel_tol=rel_tol, abs_tol=0.5 * abs_tol)
    return v1 + v2, e1 + e2
