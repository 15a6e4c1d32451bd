"""Iterative estimators: NLLS, MLE with normal errors, MLE with gamma errors.

All three minimize an objective over the plane with the simplex solver in
:mod:`lateration.solver` from the same set of starting points.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Sequence

import numpy as np

from .error_models import GammaErrorModel, NormalErrorModel
from .geometry import ObservationSet, Point2D
from .minmax import Estimate, Status, e_min_max_batch, min_max_batch
from .solver import SolverConfig, minimize_detailed

MIN_ANCHORS = 2


def default_starts(obs: ObservationSet) -> tuple[Point2D, ...]:
    """Min-Max centre, anchor centroid and the E-Min-Max (W4) estimate."""
    a, r = obs.anchors, obs.ranges
    mm = min_max_batch(a, r)[0]
    ew4 = e_min_max_batch(a, r, "W4")[0]
    c = a.mean(axis=0)
    return (Point2D(mm[0], mm[1]), Point2D(c[0], c[1]), Point2D(ew4[0], ew4[1]))


def default_step(obs: ObservationSet) -> float:
    extent = float(np.ptp(obs.anchors, axis=0).max())
    scale = max(extent, float(np.median(obs.ranges)))
    return 0.05 * scale if scale > 0 else 1.0


def _prepare(obs: ObservationSet, cfg: SolverConfig | None) -> SolverConfig:
    if len(obs) < MIN_ANCHORS:
        raise ValueError(f"need at least {MIN_ANCHORS} anchors, got {len(obs)}")
    cfg = cfg or SolverConfig()
    if not cfg.starts:
        cfg = replace(cfg, starts=default_starts(obs))
    if cfg.step is None:
        cfg = replace(cfg, step=default_step(obs))
    return cfg


def nlls_objective(obs: ObservationSet):
    ax, ay = obs.anchors[:, 0].copy(), obs.anchors[:, 1].copy()
    r = obs.ranges

    def f(x, y):
        res = r - np.sqrt((ax - x) ** 2 + (ay - y) ** 2)
        return float(res @ res)
    return f


def _per_anchor(model, n: int, name: str):
    if isinstance(model, NormalErrorModel):
        return [model] * n
    models = list(model)
    if len(models) != n:
        raise ValueError(f"{name}: {len(models)} models for {n} anchors")
    return models


def normal_objective(obs: ObservationSet,
                     model: NormalErrorModel | Sequence[NormalErrorModel]):
    """Sum of squared standardized residuals (negative log-likelihood up to constants)."""
    models = _per_anchor(model, len(obs), "mle_normal")
    ax, ay = obs.anchors[:, 0].copy(), obs.anchors[:, 1].copy()
    shifted = obs.ranges - np.array([m.mu for m in models])
    inv_sd = 1.0 / np.array([m.sigma for m in models])

    def f(x, y):
        z = (shifted - np.sqrt((ax - x) ** 2 + (ay - y) ** 2)) * inv_sd
        return float(z @ z)
    return f


def gamma_likelihood(obs: ObservationSet, model: GammaErrorModel, eta: float):
    """Joint likelihood ``u -> prod_i p_i(r_i | u)`` under the offset gamma model.

    Each factor is the unshifted gamma density (shape ``model.alpha``, rate
    ``model.beta``) at ``r_i + eta - |u - a_i|``, zero where that is negative.
    """
    ax, ay = obs.anchors[:, 0].copy(), obs.anchors[:, 1].copy()
    shifted = obs.ranges + eta
    a, b = model.alpha, model.beta
    log_norm = a * math.log(b) - math.lgamma(a)
    at_zero = 0.0 if a > 1 else (b if a == 1 else math.inf)

    def likelihood(x, y):
        z = shifted - np.sqrt((ax - x) ** 2 + (ay - y) ** 2)
        if (z < 0).any():
            return 0.0
        if (z == 0).any():
            if at_zero == 0.0:
                return 0.0
            pos = z > 0
            logp = log_norm + (a - 1.0) * np.log(z[pos]) - b * z[pos]
            return float(np.exp(logp.sum())) * at_zero ** int((~pos).sum())
        logp = log_norm + (a - 1.0) * np.log(z) - b * z
        # product, not log-sum objective: zero plateaus must stay flat
        return float(np.prod(np.exp(logp)))
    return likelihood


def _run(objective, cfg: SolverConfig, degenerate: bool = False) -> Estimate:
    res = minimize_detailed(objective, cfg)
    ok = res.converged and not degenerate
    return Estimate(res.point, Status.CONVERGED if ok else Status.DEGENERATE_FALLBACK)


def nlls(obs: ObservationSet, cfg: SolverConfig | None = None) -> Estimate:
    """Nonlinear least squares: argmin of the summed squared range residuals."""
    cfg = _prepare(obs, cfg)
    return _run(nlls_objective(obs), cfg)


def mle_normal(obs: ObservationSet,
               model: NormalErrorModel | Sequence[NormalErrorModel],
               cfg: SolverConfig | None = None) -> Estimate:
    """Maximum-likelihood position under independent normal range errors.

    ``model`` is either shared by all anchors or given per anchor.
    """
    cfg = _prepare(obs, cfg)
    return _run(normal_objective(obs, model), cfg)


def mle_gamma(obs: ObservationSet, model: GammaErrorModel, eta: float | None = None,
              cfg: SolverConfig | None = None) -> Estimate:
    """Maximum joint likelihood under offset gamma range errors.

    ``eta`` defaults to ``-model.location``, i.e. the magnitude of the most
    negative calibration error. When the solver only ever sees zero
    likelihood the first start is returned with status
    ``degenerate-fallback``.
    """
    cfg = _prepare(obs, cfg)
    if eta is None:
        eta = max(-model.location, 0.0)
    if eta < 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    likelihood = gamma_likelihood(obs, model, eta)
    res = minimize_detailed(lambda x, y: -likelihood(x, y), cfg)
    if res.value == 0.0:
        return Estimate(cfg.starts[0], Status.DEGENERATE_FALLBACK)
    return Estimate(res.point, Status.CONVERGED if res.converged else Status.DEGENERATE_FALLBACK)
