"""Named locators with bound parameters.

The spatial simulator, the trace evaluator and the command line all refer
to algorithms by name (``minmax``, ``eminmax-w2``, ``eminmax-w4``,
``mdminmax``, ``nlls``, ``mle-normal``, ``mle-gamma``). A
:class:`Locator` pairs such a name with whatever the algorithm needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .error_models import GammaErrorModel, NormalErrorModel
from .geometry import ObservationSet
from .likelihood import mle_gamma, mle_normal, nlls
from .minmax import (BatchResult, Estimate, Status, TriangularMF, e_min_max,
                     e_min_max_batch, md_min_max, md_min_max_batch, min_max,
                     min_max_batch)
from .solver import SolverConfig

ALGORITHMS = ("minmax", "eminmax-w2", "eminmax-w4", "mdminmax", "nlls", "mle-normal", "mle-gamma")
DISPLAY_NAMES = {
    "nlls": "NLLS",
    "mle-normal": "MLE-N",
    "mle-gamma": "MLE-Gamma",
    "minmax": "Min-Max",
    "eminmax-w2": "E-Min-Max (W2)",
    "eminmax-w4": "E-Min-Max (W4)",
    "mdminmax": "MD-Min-Max",
}
BOX_FAMILY = frozenset({"minmax", "eminmax-w2", "eminmax-w4", "mdminmax"})


@dataclass(frozen=True)
class Locator:
    name: str
    mf: TriangularMF | None = None
    normal: NormalErrorModel | None = None
    gamma: GammaErrorModel | None = None
    eta: float | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}; choose from {', '.join(ALGORITHMS)}")
        needs = {"mdminmax": ("mf", self.mf), "mle-normal": ("normal", self.normal),
                 "mle-gamma": ("gamma", self.gamma)}
        if self.name in needs and needs[self.name][1] is None:
            raise ValueError(f"{self.name} needs a {needs[self.name][0]} parameter")

    @property
    def min_anchors(self) -> int:
        return 1 if self.name in BOX_FAMILY else 2

    @property
    def display_name(self) -> str:
        return DISPLAY_NAMES[self.name]

    def locate(self, obs: ObservationSet) -> Estimate:
        n = self.name
        if n == "minmax":
            return min_max(obs)
        if n == "eminmax-w2":
            return e_min_max(obs, "W2")
        if n == "eminmax-w4":
            return e_min_max(obs, "W4")
        if n == "mdminmax":
            return md_min_max(obs, self.mf)
        if n == "nlls":
            return nlls(obs, self.solver)
        if n == "mle-normal":
            return mle_normal(obs, self.normal, self.solver)
        return mle_gamma(obs, self.gamma, self.eta, self.solver)

    def locate_batch(self, anchors: np.ndarray, ranges: np.ndarray) -> BatchResult:
        """Estimates for each row of ``ranges`` against shared ``anchors`` (N, 2)."""
        ranges = np.atleast_2d(ranges)
        n = self.name
        if n == "minmax":
            return BatchResult(min_max_batch(anchors, ranges), np.zeros(len(ranges), bool))
        if n in ("eminmax-w2", "eminmax-w4"):
            w = "W2" if n.endswith("w2") else "W4"
            return BatchResult(e_min_max_batch(anchors, ranges, w), np.zeros(len(ranges), bool))
        if n == "mdminmax":
            return md_min_max_batch(anchors, ranges, self.mf)
        xy = np.empty((len(ranges), 2))
        fb = np.zeros(len(ranges), bool)
        for k, row in enumerate(ranges):
            est = self.locate(ObservationSet.from_arrays(anchors, row))
            xy[k] = est.x, est.y
            fb[k] = est.status is Status.DEGENERATE_FALLBACK
        return BatchResult(xy, fb)


def make_locator(name: str, *, mf: TriangularMF | Sequence[float] | None = None,
                 normal: NormalErrorModel | None = None, gamma: GammaErrorModel | None = None,
                 eta: float | None = None, solver: SolverConfig | None = None) -> Locator:
    if mf is not None and not isinstance(mf, TriangularMF):
        mf = TriangularMF(*mf)
    return Locator(name, mf=mf, normal=normal, gamma=gamma, eta=eta,
                   solver=solver or SolverConfig())
