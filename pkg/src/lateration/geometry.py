"""Points, range observations and the Euclidean distance.

Coordinates are plain 64-bit floats; whether they mean meters or fractions
of a simulated field is up to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def __add__(self, other: Point2D) -> Point2D:
        return Point2D(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2D) -> Point2D:
        return Point2D(self.x - other.x, self.y - other.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def distance(p: Point2D, q: Point2D) -> float:
    """Euclidean distance between two points."""
    return math.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2)


@dataclass(frozen=True)
class AnchorObservation:
    """A measured range to an anchor at a known position."""

    anchor: Point2D
    range: float

    def __post_init__(self):
        r = float(self.range)
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"range must be finite and non-negative, got {self.range}")
        object.__setattr__(self, "range", r)


@dataclass(frozen=True)
class ObservationSet:
    """Ordered anchor observations for one position fix.

    Duplicate anchor positions are allowed. The ``anchors`` and ``ranges``
    arrays are built once and cached; do not mutate them.
    """

    observations: tuple[AnchorObservation, ...]

    def __post_init__(self):
        obs = tuple(self.observations)
        if not obs:
            raise ValueError("an observation set needs at least one anchor")
        object.__setattr__(self, "observations", obs)

    @classmethod
    def from_arrays(cls, anchors: Sequence[Sequence[float]] | np.ndarray,
                    ranges: Sequence[float] | np.ndarray) -> ObservationSet:
        anchors = np.asarray(anchors, dtype=float).reshape(-1, 2)
        ranges = np.asarray(ranges, dtype=float).reshape(-1)
        if len(anchors) != len(ranges):
            raise ValueError(f"{len(anchors)} anchors but {len(ranges)} ranges")
        return cls(tuple(AnchorObservation(Point2D(a[0], a[1]), r)
                         for a, r in zip(anchors, ranges)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[float], float]]) -> ObservationSet:
        return cls(tuple(AnchorObservation(Point2D(*a), r) for a, r in pairs))

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self) -> Iterator[AnchorObservation]:
        return iter(self.observations)

    @cached_property
    def anchors(self) -> np.ndarray:
        """Anchor positions as an (N, 2) array."""
        return np.array([[o.anchor.x, o.anchor.y] for o in self.observations])

    @cached_property
    def ranges(self) -> np.ndarray:
        return np.array([o.range for o in self.observations])

    def translated(self, dx: float, dy: float) -> ObservationSet:
        return ObservationSet(tuple(
            AnchorObservation(Point2D(o.anchor.x + dx, o.anchor.y + dy), o.range)
            for o in self.observations))
