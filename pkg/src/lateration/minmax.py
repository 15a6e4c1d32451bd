"""Bounding-box lateration: Min-Max, E-Min-Max (W2/W4) and MD-Min-Max.

Every estimator here has a scalar entry point taking an
:class:`~lateration.geometry.ObservationSet` and a ``*_batch`` kernel that
evaluates many range vectors against the same (or per-row) anchors at
once. The scalar functions are thin wrappers over the kernels, so there is
a single numerical code path.

Batch shapes: ``anchors`` is ``(N, 2)`` (shared) or ``(M, N, 2)``,
``ranges`` is ``(M, N)``. Vertex arrays have a trailing axis of 4 in the
fixed order (l, b), (r, b), (l, t), (r, t).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .geometry import ObservationSet, Point2D


class Status(str, enum.Enum):
    CONVERGED = "converged"
    DEGENERATE_FALLBACK = "degenerate-fallback"


@dataclass(frozen=True)
class Estimate:
    position: Point2D
    status: Status = Status.CONVERGED

    @property
    def x(self) -> float:
        return self.position.x

    @property
    def y(self) -> float:
        return self.position.y


@dataclass(frozen=True)
class IntersectionRegion:
    """Intersection of the per-anchor boxes.

    With noisy ranges the boxes may not overlap, giving ``l > r`` or
    ``b > t``. The raw bounds are kept as they are; centre and vertices
    remain well defined.
    """

    l: float
    r: float
    t: float
    b: float

    def vertices(self) -> tuple[Point2D, Point2D, Point2D, Point2D]:
        return (Point2D(self.l, self.b), Point2D(self.r, self.b),
                Point2D(self.l, self.t), Point2D(self.r, self.t))

    @property
    def centre(self) -> Point2D:
        return Point2D((self.l + self.r) / 2, (self.t + self.b) / 2)


@dataclass(frozen=True)
class TriangularMF:
    """Triangular membership function with feet at ``low``/``up`` and apex at ``median``."""

    low: float
    median: float
    up: float

    def __post_init__(self):
        if not (self.low < self.median < self.up):
            raise ValueError(
                f"degenerate membership function: need low < median < up, "
                f"got ({self.low}, {self.median}, {self.up})")

    def __call__(self, dbar):
        return membership(dbar, self)

    def as_list(self) -> list[float]:
        return [self.low, self.median, self.up]


class Weighting(str, enum.Enum):
    W2 = "W2"
    W4 = "W4"


class BatchResult(NamedTuple):
    xy: np.ndarray        # (M, 2)
    fallback: np.ndarray  # (M,) bool, True where a degenerate fallback was used


# ---------------------------------------------------------------------------
# batch kernels

def _split(anchors, ranges):
    anchors = np.asarray(anchors, dtype=float)
    ranges = np.atleast_2d(np.asarray(ranges, dtype=float))
    return anchors[..., 0], anchors[..., 1], ranges


def bounds_batch(anchors, ranges) -> tuple[np.ndarray, ...]:
    """Bounds (l, r, t, b) of the intersection region, each of shape (M,)."""
    ax, ay, rg = _split(anchors, ranges)
    l = np.max(ax - rg, axis=-1)
    r = np.min(ax + rg, axis=-1)
    t = np.min(ay + rg, axis=-1)
    b = np.max(ay - rg, axis=-1)
    return l, r, t, b


def vertices_batch(anchors, ranges) -> tuple[np.ndarray, np.ndarray]:
    """Vertex coordinates ``(vx, vy)``, each (M, 4)."""
    l, r, t, b = bounds_batch(anchors, ranges)
    vx = np.stack([l, r, l, r], axis=-1)
    vy = np.stack([b, b, t, t], axis=-1)
    return vx, vy


def min_max_batch(anchors, ranges) -> np.ndarray:
    l, r, t, b = bounds_batch(anchors, ranges)
    return np.stack([(l + r) / 2, (t + b) / 2], axis=-1)


def _column(a, i):
    # anchor coordinate i as something broadcastable against (M, 4)
    return np.asarray(a[..., i])[..., None]


def _weighted_centroid(vx, vy, w):
    total = ((w[:, 0] + w[:, 1]) + w[:, 2]) + w[:, 3]
    with np.errstate(invalid="ignore", divide="ignore"):
        x = (((w[:, 0] * vx[:, 0] + w[:, 1] * vx[:, 1]) + w[:, 2] * vx[:, 2]) + w[:, 3] * vx[:, 3]) / total
        y = (((w[:, 0] * vy[:, 0] + w[:, 1] * vy[:, 1]) + w[:, 2] * vy[:, 2]) + w[:, 3] * vy[:, 3]) / total
    return x, y, total


def e_min_max_batch(anchors, ranges, weight: Weighting | str = Weighting.W2) -> np.ndarray:
    """Weighted vertex centroid with E-Min-Max weights.

    A vertex whose residual sum is exactly zero fits every range perfectly
    and takes all the weight (shared uniformly if several do).
    """
    weight = Weighting(weight)
    ax, ay, rg = _split(anchors, ranges)
    vx, vy = vertices_batch(anchors, rg)
    denom = np.zeros_like(vx)
    for i in range(rg.shape[-1]):
        dx = vx - _column(ax, i)
        dy = vy - _column(ay, i)
        ri = rg[:, i, None]
        if weight is Weighting.W2:
            res = np.sqrt(dx * dx + dy * dy) - ri
            denom += res * res
        else:
            denom += np.abs((dx * dx + dy * dy) - ri * ri)
    exact = denom == 0
    with np.errstate(divide="ignore"):
        w = np.where(exact.any(axis=-1, keepdims=True), exact.astype(float), 1.0 / denom)
    x, y, _ = _weighted_centroid(vx, vy, w)
    return np.stack([x, y], axis=-1)


def membership(dbar, mf: TriangularMF):
    """Triangular membership degree of the residual(s) ``dbar``.

    1 at the median, 0 at or beyond either foot, linear in between.
    """
    d = np.asarray(dbar, dtype=float)
    rising = (d - mf.low) / (mf.median - mf.low)
    falling = (d - mf.up) / (mf.median - mf.up)
    out = np.where((d >= mf.median) & (d < mf.up), falling,
                   np.where((d > mf.low) & (d < mf.median), rising, 0.0))
    return float(out) if out.ndim == 0 else out


def _weights_from_moments(mean, var):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = mean / np.sqrt(var)
    return np.where(var > 0, ratio, np.where(mean > 0, np.inf, 0.0))


def md_min_max_batch(anchors, ranges, mf: TriangularMF) -> BatchResult:
    """MD-Min-Max for many range vectors.

    Membership degrees are folded into a running mean/variance per vertex
    (Welford) while looping once over the anchors, so the cost is linear in
    the anchor count and no (M, N, 4) array is ever formed.
    """
    ax, ay, rg = _split(anchors, ranges)
    vx, vy = vertices_batch(anchors, rg)
    mean = np.zeros_like(vx)
    m2 = np.zeros_like(vx)
    n = rg.shape[-1]
    for i in range(n):
        dx = vx - _column(ax, i)
        dy = vy - _column(ay, i)
        dbar = rg[:, i, None] - np.sqrt(dx * dx + dy * dy)
        mu = membership(dbar, mf)
        delta = mu - mean
        mean += delta / (i + 1)
        m2 += delta * (mu - mean)
    dw = _weights_from_moments(mean, m2 / n)

    infinite = np.isinf(dw)
    w = np.where(infinite.any(axis=-1, keepdims=True), infinite.astype(float), dw)
    x, y, total = _weighted_centroid(vx, vy, w)
    fallback = total == 0
    if fallback.any():
        centre_x = (vx[:, 0] + vx[:, 1]) / 2
        centre_y = (vy[:, 0] + vy[:, 2]) / 2
        x = np.where(fallback, centre_x, x)
        y = np.where(fallback, centre_y, y)
    return BatchResult(np.stack([x, y], axis=-1), fallback)


# ---------------------------------------------------------------------------
# scalar API

def intersection_region(obs: ObservationSet) -> IntersectionRegion:
    l, r, t, b = bounds_batch(obs.anchors, obs.ranges)
    return IntersectionRegion(float(l[0]), float(r[0]), float(t[0]), float(b[0]))


def _estimate(xy, fallback=False) -> Estimate:
    status = Status.DEGENERATE_FALLBACK if fallback else Status.CONVERGED
    return Estimate(Point2D(xy[0], xy[1]), status)


def min_max(obs: ObservationSet) -> Estimate:
    """Centre of the intersection region."""
    return _estimate(min_max_batch(obs.anchors, obs.ranges)[0])


def e_min_max(obs: ObservationSet, weight: Weighting | str = Weighting.W2) -> Estimate:
    return _estimate(e_min_max_batch(obs.anchors, obs.ranges, weight)[0])


def md_min_max(obs: ObservationSet, mf: TriangularMF) -> Estimate:
    """Membership-degree weighted average of the intersection-region vertices.

    Falls back to the plain Min-Max centre (status ``degenerate-fallback``)
    when every vertex weight is zero.
    """
    res = md_min_max_batch(obs.anchors, obs.ranges, mf)
    return _estimate(res.xy[0], bool(res.fallback[0]))


def running_mean_var(values: Iterable[float]) -> tuple[float, float, int]:
    """Single-pass (Welford) mean and population variance."""
    mean = 0.0
    m2 = 0.0
    n = 0
    for v in values:
        n += 1
        delta = v - mean
        mean += delta / n
        m2 += delta * (v - mean)
    if n == 0:
        raise ValueError("no values")
    return mean, m2 / n, n


def degree_weight(degrees: Iterable[float]) -> float:
    """Reciprocal coefficient of variation of a vertex's membership degrees.

    ``math.inf`` for unanimous non-zero agreement (zero variance), 0 when
    every degree is zero.
    """
    mean, var, _ = running_mean_var(degrees)
    if var > 0:
        return mean / math.sqrt(var)
    return math.inf if mean > 0 else 0.0
