"""Recorded localisation traces and their error metrics.

Trace files are UTF-8 JSON Lines, one fix per line::

    {"t": 0.0, "truth": [x, y], "obs": [{"a": [x, y], "r": 4.2}, ...]}

Calibration files use the same container with one range pair per line::

    {"r": 12.3, "rbar": 10.1}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .calibration import ErrorSample, nearest_rank
from .error_models import GammaErrorModel
from .geometry import AnchorObservation, ObservationSet, Point2D
from .locators import Locator


class TraceFormatError(ValueError):
    """A trace or calibration file line could not be parsed."""

    def __init__(self, path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.line = line


@dataclass(frozen=True)
class TraceFix:
    timestamp: float
    truth: Point2D
    observations: ObservationSet

    def to_json(self) -> dict:
        return {"t": self.timestamp, "truth": [self.truth.x, self.truth.y],
                "obs": [{"a": [o.anchor.x, o.anchor.y], "r": o.range} for o in self.observations]}


def _parse_fix(doc: dict) -> TraceFix:
    for key in ("truth", "obs"):
        if key not in doc:
            raise ValueError(f"missing {key!r}")
    if not doc["obs"]:
        raise ValueError("fix has no observations")
    obs = ObservationSet(tuple(AnchorObservation(Point2D(*o["a"]), o["r"]) for o in doc["obs"]))
    return TraceFix(float(doc.get("t", 0.0)), Point2D(*doc["truth"]), obs)


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                yield lineno, line


def load_trace(path: str | Path) -> list[TraceFix]:
    fixes = []
    for lineno, line in _lines(path):
        try:
            fixes.append(_parse_fix(json.loads(line)))
        except (ValueError, TypeError, KeyError) as exc:
            raise TraceFormatError(path, lineno, str(exc)) from exc
    return fixes


def save_trace(fixes: Iterable[TraceFix], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for fix in fixes:
            fh.write(json.dumps(fix.to_json()) + "\n")


def load_calibration_samples(path: str | Path) -> list[ErrorSample]:
    samples = []
    for lineno, line in _lines(path):
        try:
            doc = json.loads(line)
            samples.append(ErrorSample(float(doc["r"]), float(doc["rbar"])))
        except (ValueError, TypeError, KeyError) as exc:
            raise TraceFormatError(path, lineno, f"bad calibration line ({exc})") from exc
    return samples


def save_calibration_samples(samples: Iterable[ErrorSample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps({"r": s.measured, "rbar": s.reference}) + "\n")


# ---------------------------------------------------------------------------
# metrics

@dataclass(frozen=True)
class BoxplotStats:
    q1: float
    median: float
    q3: float
    iqr: float
    lower_fence: float
    upper_fence: float
    outliers: tuple[float, ...]


def boxplot_stats(errors: Sequence[float]) -> BoxplotStats:
    """Nearest-rank quartiles with Tukey fences (1.5 IQR)."""
    q1 = nearest_rank(errors, 0.25)
    med = nearest_rank(errors, 0.5)
    q3 = nearest_rank(errors, 0.75)
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    return BoxplotStats(q1, med, q3, iqr, lo, hi, tuple(e for e in errors if e < lo or e > hi))


@dataclass(frozen=True)
class Metrics:
    mae: float
    rmse: float
    max: float
    quartiles: tuple[float, float, float]
    iqr: float
    outlier_fences: tuple[float, float]
    count: int
    skipped: int = 0

    def to_dict(self) -> dict:
        return {"mae": self.mae, "rmse": self.rmse, "max": self.max,
                "quartiles": list(self.quartiles), "iqr": self.iqr,
                "outlier_fences": list(self.outlier_fences),
                "count": self.count, "skipped": self.skipped}


def metrics_from_errors(errors: Sequence[float], skipped: int = 0) -> Metrics:
    e = np.asarray(errors, dtype=float)
    if e.size == 0:
        raise ValueError("no errors to summarise")
    box = boxplot_stats(list(e))
    return Metrics(
        mae=float(e.mean()),
        rmse=float(math.sqrt(np.mean(e * e))),
        max=float(e.max()),
        quartiles=(box.q1, box.median, box.q3),
        iqr=box.iqr,
        outlier_fences=(box.lower_fence, box.upper_fence),
        count=int(e.size),
        skipped=skipped,
    )


@dataclass
class Evaluation:
    metrics: Metrics
    errors: list[float] = field(default_factory=list)
    fallbacks: int = 0


def evaluate(trace: Sequence[TraceFix], locator: Locator) -> Evaluation:
    """Run ``locator`` on every fix and summarise the position errors.

    Fixes with fewer anchors than the algorithm needs are skipped and
    counted in ``metrics.skipped``.
    """
    errors = []
    skipped = fallbacks = 0
    for fix in trace:
        if len(fix.observations) < locator.min_anchors:
            skipped += 1
            continue
        est = locator.locate(fix.observations)
        fallbacks += est.status != "converged"
        errors.append(math.hypot(est.x - fix.truth.x, est.y - fix.truth.y))
    if not errors:
        raise ValueError(f"no fix has the {locator.min_anchors} anchors {locator.name} needs")
    return Evaluation(metrics_from_errors(errors, skipped), errors, fallbacks)


def format_table(rows: Sequence[tuple[str, Metrics]]) -> str:
    """Plain-text table with MAE/RMSE/MAX columns, two decimals."""
    width = max([len("Algorithm")] + [len(name) for name, _ in rows])
    lines = [f"{'Algorithm':<{width}} | MAE [m] | RMSE [m] | MAX [m]",
             f"{'-' * width}-+---------+----------+--------"]
    for name, m in rows:
        lines.append(f"{name:<{width}} | {m.mae:7.2f} | {m.rmse:8.2f} | {m.max:7.2f}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# synthetic data

# time-of-flight range errors fitted in an office building, in meters
BUILDING_GAMMA = GammaErrorModel(3.3, 0.58, -3.31)


def building_anchors() -> np.ndarray:
    """17 anchors on an 8 m grid over a 40 m x 16 m floor (6 x 3 grid minus the centre-left node)."""
    pts = [(4.0 + 8.0 * i, 8.0 * j) for j in range(3) for i in range(6)]
    pts.remove((20.0, 8.0))
    return np.array(pts)


@dataclass(frozen=True)
class VisibilityModel:
    """Each anchor is heard with probability ``p_near`` up to ``near`` meters,
    falling linearly to zero at ``far``."""

    near: float = 8.0
    far: float = 21.5
    p_near: float = 0.95

    def probability(self, d: np.ndarray) -> np.ndarray:
        ramp = np.clip((self.far - d) / (self.far - self.near), 0.0, 1.0)
        return self.p_near * ramp


def _walk(rng: np.random.Generator, n: int, lo: np.ndarray, hi: np.ndarray,
          speed: float, dt: float) -> np.ndarray:
    # random-waypoint walk inside the box [lo, hi]
    pos = rng.uniform(lo, hi)
    target = rng.uniform(lo, hi)
    out = np.empty((n, 2))
    for k in range(n):
        out[k] = pos
        step = speed * dt
        gap = target - pos
        dist = math.hypot(*gap)
        if dist <= step:
            pos = target
            target = rng.uniform(lo, hi)
        else:
            pos = pos + gap * (step / dist)
    return out


def synthesize_trace(n_fixes: int, seed: int, model: GammaErrorModel = BUILDING_GAMMA,
                     anchors: np.ndarray | None = None,
                     visibility: VisibilityModel = VisibilityModel(),
                     speed: float = 0.5, dt: float = 1.0) -> list[TraceFix]:
    """A walk through the anchor field with gamma-distributed range errors.

    The walker stays inside the anchors' bounding box; each fix hears a
    random subset of anchors per ``visibility`` (at least one, the nearest).
    Measured ranges are clamped at zero.
    """
    rng = np.random.default_rng(seed)
    anchors = building_anchors() if anchors is None else np.asarray(anchors, dtype=float)
    lo, hi = anchors.min(axis=0), anchors.max(axis=0)
    path = _walk(rng, n_fixes, lo, hi, speed, dt)
    fixes = []
    for k, p in enumerate(path):
        d = np.hypot(anchors[:, 0] - p[0], anchors[:, 1] - p[1])
        heard = rng.random(len(anchors)) < visibility.probability(d)
        if not heard.any():
            heard[np.argmin(d)] = True
        err = model.sample(rng, size=len(anchors))
        r = np.maximum(d + err, 0.0)
        obs = ObservationSet.from_arrays(anchors[heard], r[heard])
        fixes.append(TraceFix(k * dt, Point2D(p[0], p[1]), obs))
    return fixes


def synthesize_calibration(n: int, seed: int, model: GammaErrorModel = BUILDING_GAMMA,
                           min_range: float = 4.0, max_range: float = 30.0) -> list[ErrorSample]:
    """Range pairs with reference ranges uniform in [min_range, max_range]."""
    rng = np.random.default_rng(seed)
    ref = rng.uniform(min_range, max_range, size=n)
    meas = np.maximum(ref + model.sample(rng, size=n), 0.0)
    return [ErrorSample(float(m), float(r)) for m, r in zip(meas, ref)]
