"""Monte-Carlo spatial error maps.

A :class:`Scenario` fixes a rectangular field, the anchors, a grid of true
positions (cell centres) and a :class:`MixtureErrorModel`. :func:`sweep`
runs a locator ``trials_per_cell`` times at every cell centre and records
the mean position error. The maps can then be classified into the
green/grey/blue bands relative to the expected ranging error, compared
pairwise, and written out as PPM images with a CSV of the raw values.

Every cell draws its noise from its own generator seeded by
``(seed, cell_index)``, so a sweep is bit-identical regardless of how the
cells are split across worker processes.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .calibration import calibrate_mf, load_calibration_document
from .error_models import (GammaErrorModel, MixtureErrorModel, NormalErrorModel,
                           mixture_noise, sample_mixture_errors)
from .geometry import Point2D
from .locators import Locator, make_locator
from .minmax import TriangularMF
from .solver import SolverConfig


@dataclass(frozen=True)
class Scenario:
    field_width: float
    field_height: float
    anchors: tuple[Point2D, ...]
    grid_cols: int
    grid_rows: int
    trials_per_cell: int
    error_model: MixtureErrorModel
    seed: int = 0
    expected_error: float | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(
            a if isinstance(a, Point2D) else Point2D(*a) for a in self.anchors))
        if not self.anchors:
            raise ValueError("a scenario needs at least one anchor")
        if self.grid_cols < 1 or self.grid_rows < 1 or self.trials_per_cell < 1:
            raise ValueError("grid dimensions and trials_per_cell must be >= 1")
        if not (self.field_width > 0 and self.field_height > 0):
            raise ValueError("field dimensions must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def expected(self) -> float:
        """Classification unit; the model bias unless set explicitly."""
        return self.expected_error if self.expected_error is not None else self.error_model.bias

    def anchor_array(self) -> np.ndarray:
        return np.array([[a.x, a.y] for a in self.anchors])

    def cell_centres(self) -> tuple[np.ndarray, np.ndarray]:
        """x centres per column and y centres per row (row 0 is the lowest y)."""
        xs = (np.arange(self.grid_cols) + 0.5) * (self.field_width / self.grid_cols)
        ys = (np.arange(self.grid_rows) + 0.5) * (self.field_height / self.grid_rows)
        return xs, ys

    def cell_of(self, p: Point2D) -> tuple[int, int] | None:
        """(row, col) of the cell containing ``p``; field edges belong to the last cell."""
        if not (0 <= p.x <= self.field_width and 0 <= p.y <= self.field_height):
            return None
        col = min(int(p.x / self.field_width * self.grid_cols), self.grid_cols - 1)
        row = min(int(p.y / self.field_height * self.grid_rows), self.grid_rows - 1)
        return row, col


@dataclass(frozen=True, eq=False)
class SpatialErrorGrid:
    """Mean position error per cell, indexed ``[row, col]`` with row 0 at the lowest y."""

    mean: np.ndarray
    std: np.ndarray
    scenario: Scenario
    algorithm: str = ""
    fallbacks: int = 0


# ---------------------------------------------------------------------------
# sweep

def cell_generator(seed: int, cell: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(cell,)))


def _sweep_rows(scenario: Scenario, locator: Locator, rows: Sequence[int]):
    anchors = scenario.anchor_array()
    xs, ys = scenario.cell_centres()
    trials = scenario.trials_per_cell
    n = len(anchors)
    cols = scenario.grid_cols
    means = np.empty((len(rows), cols))
    stds = np.empty((len(rows), cols))
    fallbacks = 0
    for k, row in enumerate(rows):
        y = ys[row]
        dist = np.sqrt((anchors[:, 0][None, :] - xs[:, None]) ** 2
                       + (anchors[:, 1][None, :] - y) ** 2)          # (cols, n)
        noise = np.empty((cols, trials, n))
        for col in range(cols):
            rng = cell_generator(scenario.seed, row * cols + col)
            noise[col] = mixture_noise(scenario.error_model, rng, size=(trials, n))
        ranges = np.maximum(dist[:, None, :] + noise, 0.0).reshape(cols * trials, n)
        res = locator.locate_batch(anchors, ranges)
        fallbacks += int(res.fallback.sum())
        ex = res.xy[:, 0].reshape(cols, trials) - xs[:, None]
        ey = res.xy[:, 1].reshape(cols, trials) - y
        err = np.sqrt(ex * ex + ey * ey)
        for col in range(cols):
            m = math.fsum(err[col]) / trials
            means[k, col] = m
            stds[k, col] = math.sqrt(math.fsum((err[col] - m) ** 2) / trials)
    return means, stds, fallbacks


def sweep(scenario: Scenario, locator: Locator, workers: int = 1,
          rows_per_task: int | None = None) -> SpatialErrorGrid:
    """Mean position error of ``locator`` at every cell centre of ``scenario``.

    ``workers > 1`` distributes blocks of rows over processes; the result
    does not depend on the worker count.
    """
    nrows = scenario.grid_rows
    if rows_per_task is None:
        rows_per_task = max(1, math.ceil(nrows / max(workers, 1) / 4))
    blocks = [list(range(s, min(s + rows_per_task, nrows)))
              for s in range(0, nrows, rows_per_task)]
    if workers <= 1:
        parts = [_sweep_rows(scenario, locator, b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_rows, [scenario] * len(blocks),
                                  [locator] * len(blocks), blocks))
    mean = np.concatenate([p[0] for p in parts])
    std = np.concatenate([p[1] for p in parts])
    return SpatialErrorGrid(mean, std, scenario, locator.name, sum(p[2] for p in parts))


# ---------------------------------------------------------------------------
# classification

class Band(enum.IntEnum):
    GREEN = 0
    GREY = 1
    BLUE = 2
    ANCHOR = 3


class Comparison(enum.IntEnum):
    EQUIVALENT = 0     # green
    FIRST_BETTER = 1   # red
    SECOND_BETTER = 2  # blue to white


@dataclass(frozen=True, eq=False)
class ColorGrid:
    bands: np.ndarray   # Band per cell
    shade: np.ndarray   # 0..1 within the band
    values: np.ndarray
    expected_error: float


@dataclass(frozen=True, eq=False)
class DiffGrid:
    classes: np.ndarray  # Comparison per cell
    shade: np.ndarray    # 0 at the threshold, 1 at five thresholds or more
    values: np.ndarray   # a - b
    threshold: float


def band_of(value: float, expected_error: float) -> Band:
    """Band of a single error: [0, 1x) green, [1x, 5x) grey, [5x, inf) blue."""
    ratio = value / expected_error
    if ratio < 1:
        return Band.GREEN
    if ratio < 5:
        return Band.GREY
    return Band.BLUE


def classify(grid: SpatialErrorGrid, expected_error: float | None = None) -> ColorGrid:
    """Colour bands relative to the expected ranging error; anchor cells marked."""
    expected = grid.scenario.expected if expected_error is None else expected_error
    if not expected > 0:
        raise ValueError("expected_error must be positive")
    ratio = grid.mean / expected
    bands = np.where(ratio < 1, Band.GREEN, np.where(ratio < 5, Band.GREY, Band.BLUE))
    shade = np.where(ratio < 1, ratio, np.where(ratio < 5, (ratio - 1) / 4, 1.0))
    for a in grid.scenario.anchors:
        cell = grid.scenario.cell_of(a)
        if cell is not None:
            bands[cell] = Band.ANCHOR
    return ColorGrid(bands.astype(np.int8), np.clip(shade, 0, 1), grid.mean.copy(), expected)


def compare_cell(a: float, b: float, threshold: float) -> Comparison:
    if abs(a - b) <= threshold:
        return Comparison.EQUIVALENT
    return Comparison.FIRST_BETTER if a < b else Comparison.SECOND_BETTER


def diff(a: SpatialErrorGrid, b: SpatialErrorGrid, equiv_threshold: float | None = None) -> DiffGrid:
    """Cell-wise comparison of two error maps over the same scenario.

    Cells within ``equiv_threshold`` (default 1.6 % of the field width) are
    equivalent; otherwise the lower error wins.
    """
    if a.scenario != b.scenario or a.mean.shape != b.mean.shape:
        raise ValueError("cannot compare grids from different scenarios")
    thr = 0.016 * a.scenario.field_width if equiv_threshold is None else equiv_threshold
    d = a.mean - b.mean
    gap = np.abs(d)
    classes = np.where(gap <= thr, Comparison.EQUIVALENT,
                       np.where(d < 0, Comparison.FIRST_BETTER, Comparison.SECOND_BETTER))
    with np.errstate(divide="ignore", invalid="ignore"):
        shade = np.where(gap <= thr, 0.0, (gap - thr) / (4 * thr) if thr > 0 else 1.0)
    return DiffGrid(classes.astype(np.int8), np.clip(shade, 0, 1), d, thr)


# ---------------------------------------------------------------------------
# output

ANCHOR_RGB = (255, 0, 0)
BLUE_RGB = (0, 0, 255)
EQUIVALENT_RGB = (0, 200, 0)


def to_rgb(grid: ColorGrid | DiffGrid) -> np.ndarray:
    """(rows, cols, 3) uint8 image with the top row at the highest y."""
    s = grid.shade
    rgb = np.zeros(s.shape + (3,))
    if isinstance(grid, ColorGrid):
        b = grid.bands
        green = 100 + 155 * s          # darker = lower error
        grey = 220 - 160 * s           # darker = higher error
        rgb[..., 1] = np.where(b == Band.GREEN, green, 0)
        for c in range(3):
            rgb[..., c] = np.where(b == Band.GREY, grey, rgb[..., c])
            rgb[..., c] = np.where(b == Band.BLUE, BLUE_RGB[c], rgb[..., c])
            rgb[..., c] = np.where(b == Band.ANCHOR, ANCHOR_RGB[c], rgb[..., c])
    else:
        k = grid.classes
        pale = 180 * (1 - s)           # pale red -> red
        white = 255 * (1 - s)          # white -> blue
        for c in range(3):
            rgb[..., c] = np.where(k == Comparison.EQUIVALENT, EQUIVALENT_RGB[c], rgb[..., c])
        rgb[..., 0] = np.where(k == Comparison.FIRST_BETTER, 255, rgb[..., 0])
        rgb[..., 1] = np.where(k == Comparison.FIRST_BETTER, pale, rgb[..., 1])
        rgb[..., 2] = np.where(k == Comparison.FIRST_BETTER, pale, rgb[..., 2])
        rgb[..., 0] = np.where(k == Comparison.SECOND_BETTER, white, rgb[..., 0])
        rgb[..., 1] = np.where(k == Comparison.SECOND_BETTER, white, rgb[..., 1])
        rgb[..., 2] = np.where(k == Comparison.SECOND_BETTER, 255, rgb[..., 2])
    return np.rint(rgb[::-1]).astype(np.uint8)


def _base(path: str | Path) -> Path:
    path = Path(path)
    return path.with_suffix("") if path.suffix.lower() in (".ppm", ".csv") else path


def write_csv(values: np.ndarray, path: str | Path) -> Path:
    """Raw per-cell values, first line = top (highest y) row, like the image."""
    path = Path(path)
    try:
        np.savetxt(path, values[::-1], delimiter=",", fmt="%.17g")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path: str | Path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    return data[::-1].copy()


def write_ppm(rgb: np.ndarray, path: str | Path) -> Path:
    path = Path(path)
    h, w, _ = rgb.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
            fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_ppm(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while raw[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos:pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos].decode("ascii"))
    if tokens[0] != "P6":
        raise ValueError(f"{path}: not a binary PPM")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(raw[pos + 1:pos + 1 + w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def render(grid: ColorGrid | DiffGrid, path: str | Path) -> tuple[Path, Path]:
    """Write ``<path>.ppm`` (one pixel per cell) and ``<path>.csv`` (raw values)."""
    base = _base(path)
    ppm = write_ppm(to_rgb(grid), base.with_name(base.name + ".ppm"))
    csv = write_csv(grid.values, base.with_name(base.name + ".csv"))
    return ppm, csv


# ---------------------------------------------------------------------------
# regions

def inside_hull(points: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Boolean mask of points inside (or on) the anchors' convex hull."""
    from scipy.spatial import Delaunay, QhullError

    points = np.asarray(points, dtype=float).reshape(-1, 2)
    try:
        tri = Delaunay(np.asarray(anchors, dtype=float))
    except QhullError:
        return np.zeros(len(points), dtype=bool)  # collinear anchors: empty hull
    return tri.find_simplex(points, tol=1e-12) >= 0


def hull_mask(scenario: Scenario) -> np.ndarray:
    """(rows, cols) mask of cell centres inside the anchor hull."""
    xs, ys = scenario.cell_centres()
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return inside_hull(pts, scenario.anchor_array()).reshape(gx.shape)


def region_mask(scenario: Scenario, x0: float, x1: float, y0: float, y1: float) -> np.ndarray:
    """Cells whose centre lies in the given fraction-of-field rectangle."""
    xs, ys = scenario.cell_centres()
    cx = (xs >= x0 * scenario.field_width) & (xs <= x1 * scenario.field_width)
    cy = (ys >= y0 * scenario.field_height) & (ys <= y1 * scenario.field_height)
    return cy[:, None] & cx[None, :]


# ---------------------------------------------------------------------------
# scenario files

def mf_for_model(model: MixtureErrorModel, samples: int = 100_000, seed: int = 0) -> TriangularMF:
    """Calibrate a membership function on errors drawn from ``model``."""
    return calibrate_mf(sample_mixture_errors(model, samples, seed))


def scenario_from_dict(doc: dict) -> Scenario:
    em = doc.get("error_model", {})
    return Scenario(
        field_width=float(doc.get("field_width", 1.0)),
        field_height=float(doc.get("field_height", doc.get("field_width", 1.0))),
        anchors=tuple(Point2D(*a) for a in doc["anchors"]),
        grid_cols=int(doc.get("grid_cols", 100)),
        grid_rows=int(doc.get("grid_rows", doc.get("grid_cols", 100))),
        trials_per_cell=int(doc.get("trials_per_cell", 100)),
        error_model=MixtureErrorModel(**em),
        seed=int(doc.get("seed", 0)),
        expected_error=doc.get("expected_error"),
        name=doc.get("name", ""),
    )


def scenario_to_dict(s: Scenario) -> dict:
    m = s.error_model
    return {
        "name": s.name,
        "field_width": s.field_width,
        "field_height": s.field_height,
        "anchors": [[a.x, a.y] for a in s.anchors],
        "grid_cols": s.grid_cols,
        "grid_rows": s.grid_rows,
        "trials_per_cell": s.trials_per_cell,
        "error_model": {"bias": m.bias, "sigma": m.sigma, "nlos_prob": m.nlos_prob,
                        "nlos_rate": m.nlos_rate, "nlos_unit": m.nlos_unit},
        "seed": s.seed,
        "expected_error": s.expected_error,
    }


def locator_from_block(block: dict, scenario: Scenario | None = None,
                       base_dir: Path | None = None) -> Locator:
    """Build a locator from a scenario file's ``algorithm`` block.

    ``"mf": "calibrate"`` calibrates the membership function on samples of
    the scenario's error model; ``"mf": "file.json"`` reads a calibration
    document; a three-element list is used as is.
    """
    mf = block.get("mf")
    if mf == "calibrate":
        if scenario is None:
            raise ValueError("'mf': 'calibrate' needs a scenario")
        mf = mf_for_model(scenario.error_model, int(block.get("mf_samples", 100_000)),
                          int(block.get("mf_seed", scenario.seed)))
    elif isinstance(mf, str):
        p = Path(mf)
        if base_dir is not None and not p.is_absolute():
            p = base_dir / p
        mf = load_calibration_document(p)["mf"]
    normal = block.get("normal")
    if isinstance(normal, dict):
        normal = NormalErrorModel(normal["mu"], normal["sigma"])
    gamma = block.get("gamma")
    if isinstance(gamma, dict):
        gamma = GammaErrorModel(gamma["alpha"], gamma["beta"], gamma.get("location", 0.0))
    solver = SolverConfig(**block["solver"]) if "solver" in block else None
    return make_locator(block["name"], mf=mf, normal=normal, gamma=gamma,
                        eta=block.get("eta"), solver=solver)


def load_scenario(path: str | Path) -> tuple[Scenario, dict | None]:
    """Scenario plus its raw ``algorithm`` block (``None`` if absent)."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return scenario_from_dict(doc), doc.get("algorithm")


def builtin_scenario(name: str) -> tuple[Scenario, dict | None]:
    """One of the bundled layouts: ``four_corner``, ``nine_centre``, ``five_flat``."""
    ref = resources.files("lateration") / "scenarios" / f"{name}.json"
    doc = json.loads(ref.read_text(encoding="utf-8"))
    return scenario_from_dict(doc), doc.get("algorithm")
