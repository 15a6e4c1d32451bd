"""Two-dimensional Nelder-Mead simplex minimizer.

The likelihood surfaces of the gamma estimator have flat zero plateaus
where gradients vanish, so every iterative estimator in this package goes
through this gradient-free routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .geometry import Point2D

Objective = Callable[[float, float], float]

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass(frozen=True)
class SolverConfig:
    """Settings shared by the iterative estimators.

    ``starts`` may be left empty, in which case the estimators pick their
    own geometry-based starting points. ``step`` is the edge length of the
    initial simplex; ``None`` lets the estimator scale it to the anchor
    layout (plain :func:`minimize` then uses 0.1).
    """

    starts: tuple[Point2D, ...] = ()
    max_iters: int = 1000
    tolerance: float = 1e-9
    step: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        if self.max_iters <= 0:
            raise ValueError("max_iters must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")


class SolverResult(NamedTuple):
    point: Point2D
    value: float
    converged: bool
    iterations: int


def _diameter(xs, ys) -> float:
    return max(math.hypot(xs[0] - xs[1], ys[0] - ys[1]),
               math.hypot(xs[0] - xs[2], ys[0] - ys[2]),
               math.hypot(xs[1] - xs[2], ys[1] - ys[2]))


def nelder_mead(f: Objective, x0: float, y0: float, step: float,
                max_iters: int, tolerance: float) -> tuple[float, float, float, bool, int]:
    """Minimize ``f(x, y)`` from one start.

    Stops when the simplex diameter drops below ``tolerance``. Ties are
    resolved in favour of older vertices, so on a constant function the
    start itself is returned.
    """
    xs = [x0, x0 + step, x0]
    ys = [y0, y0, y0 + step]
    fs = [f(x0, y0), f(xs[1], ys[1]), f(xs[2], ys[2])]
    for it in range(max_iters):
        order = sorted(range(3), key=fs.__getitem__)
        xs = [xs[i] for i in order]
        ys = [ys[i] for i in order]
        fs = [fs[i] for i in order]
        if _diameter(xs, ys) < tolerance:
            return xs[0], ys[0], fs[0], True, it

        cx = 0.5 * (xs[0] + xs[1])
        cy = 0.5 * (ys[0] + ys[1])
        rx = cx + REFLECT * (cx - xs[2])
        ry = cy + REFLECT * (cy - ys[2])
        fr = f(rx, ry)
        if fr < fs[0]:
            ex = cx + EXPAND * (rx - cx)
            ey = cy + EXPAND * (ry - cy)
            fe = f(ex, ey)
            if fe < fr:
                xs[2], ys[2], fs[2] = ex, ey, fe
            else:
                xs[2], ys[2], fs[2] = rx, ry, fr
            continue
        if fr < fs[1]:
            xs[2], ys[2], fs[2] = rx, ry, fr
            continue
        if fr < fs[2]:
            # outside contraction
            kx = cx + CONTRACT * (rx - cx)
            ky = cy + CONTRACT * (ry - cy)
            fk = f(kx, ky)
            if fk <= fr:
                xs[2], ys[2], fs[2] = kx, ky, fk
                continue
        else:
            kx = cx + CONTRACT * (xs[2] - cx)
            ky = cy + CONTRACT * (ys[2] - cy)
            fk = f(kx, ky)
            if fk < fs[2]:
                xs[2], ys[2], fs[2] = kx, ky, fk
                continue
        for i in (1, 2):
            xs[i] = xs[0] + SHRINK * (xs[i] - xs[0])
            ys[i] = ys[0] + SHRINK * (ys[i] - ys[0])
            fs[i] = f(xs[i], ys[i])

    best = min(range(3), key=fs.__getitem__)
    return xs[best], ys[best], fs[best], False, max_iters


def minimize_detailed(objective: Objective, cfg: SolverConfig,
                      starts: Sequence[Point2D] | None = None) -> SolverResult:
    """Run the simplex from every start and keep the lowest value found.

    Each converged run is restarted once from its end point, which guards
    against a simplex that collapsed before reaching the minimum. Earlier
    starts win ties.
    """
    starts = tuple(starts) if starts is not None else cfg.starts
    if not starts:
        raise ValueError("at least one starting point is required")
    step = cfg.step if cfg.step is not None else 0.1
    best = None
    all_converged = True
    total_iters = 0
    for s in starts:
        x, y, v, ok, n = nelder_mead(objective, s.x, s.y, step, cfg.max_iters, cfg.tolerance)
        total_iters += n
        if ok and (x, y) != (s.x, s.y):
            x2, y2, v2, ok, n = nelder_mead(objective, x, y, step, cfg.max_iters, cfg.tolerance)
            total_iters += n
            if v2 < v:
                x, y, v = x2, y2, v2
        all_converged &= ok
        if best is None or v < best[2]:
            best = (x, y, v)
    x, y, v = best
    return SolverResult(Point2D(x, y), float(v), all_converged, total_iters)


def minimize(objective: Objective, cfg: SolverConfig) -> tuple[Point2D, float]:
    """Derivative-free minimum of ``objective(x, y)`` over ``cfg.starts``.

    Returns ``(point, value)`` for the best start; deterministic for a
    deterministic objective.
    """
    res = minimize_detailed(objective, cfg)
    return res.point, res.value
