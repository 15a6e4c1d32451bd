"""Calibration of membership functions and error models from range samples.

Input is a set of (measured, reference) range pairs; everything is derived
from the errors ``measured - reference``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .error_models import GammaErrorModel, NormalErrorModel
from .minmax import TriangularMF


@dataclass(frozen=True)
class ErrorSample:
    measured: float
    reference: float

    def __post_init__(self):
        if not (math.isfinite(self.measured) and math.isfinite(self.reference)):
            raise ValueError("measured and reference ranges must be finite")
        if self.measured < 0 or self.reference < 0:
            raise ValueError("ranges must be non-negative")

    @property
    def error(self) -> float:
        return self.measured - self.reference


@dataclass(frozen=True)
class ErrorStats:
    count: int
    mean_abs_error: float
    rmse: float
    skewness: float
    correlation_error_vs_distance: float
    correlation_defined: bool = True


def nearest_rank(values: Sequence[float], q: float) -> float:
    """The ``ceil(q * n)``-th smallest value (1-based, at least the first)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level must lie in [0, 1], got {q}")
    ordered = sorted(values)
    if not ordered:
        raise ValueError("no values")
    # rounding guards against q*n landing a hair above an integer
    k = max(1, math.ceil(round(q * len(ordered), 9)))
    return ordered[k - 1]


def calibrate_mf(errors: Sequence[float], q_low: float = 0.005,
                 q_high: float = 0.995) -> TriangularMF:
    """Triangular MF from error quantiles: (q_low, median, q_high).

    Raises ``ValueError`` when ties collapse the triangle.
    """
    errors = [float(e) for e in errors]
    if len(errors) < 3:
        raise ValueError(f"need at least 3 error samples, got {len(errors)}")
    return TriangularMF(nearest_rank(errors, q_low), nearest_rank(errors, 0.5),
                        nearest_rank(errors, q_high))


def fit_normal(errors: Sequence[float]) -> NormalErrorModel:
    """Maximum-likelihood normal fit (population standard deviation)."""
    e = np.asarray(errors, dtype=float)
    if e.size < 2:
        raise ValueError("need at least 2 error samples")
    sigma = float(e.std())
    if sigma == 0:
        raise ValueError("constant errors: normal fit has zero spread")
    return NormalErrorModel(float(e.mean()), sigma)


def fit_gamma(errors: Sequence[float]) -> GammaErrorModel:
    """Shifted gamma by the method of moments.

    The location is the smallest error; shape and rate come from the mean
    ``m`` and population variance ``v`` of the shifted errors as
    ``m**2 / v`` and ``m / v``.
    """
    e = np.asarray(errors, dtype=float)
    if e.size < 3:
        raise ValueError("need at least 3 error samples")
    location = float(e.min())
    shifted = e - location
    m = float(shifted.mean())
    v = float(shifted.var())
    if m == 0 or v == 0:
        raise ValueError("constant errors: gamma fit undefined")
    return GammaErrorModel(m * m / v, m / v, location)


def error_stats(samples: Sequence[ErrorSample]) -> ErrorStats:
    if len(samples) < 2:
        raise ValueError("need at least 2 samples")
    err = np.array([s.error for s in samples])
    ref = np.array([s.reference for s in samples])
    mae = float(np.abs(err).mean())
    rmse = float(np.sqrt(np.mean(err * err)))
    centred = err - err.mean()
    var = float(np.mean(centred ** 2))
    skew = float(np.mean(centred ** 3) / var ** 1.5) if var > 0 else 0.0

    abs_err = np.abs(err)
    if abs_err.std() == 0 or ref.std() == 0:
        corr, defined = 0.0, False
    else:
        corr, defined = float(np.corrcoef(abs_err, ref)[0, 1]), True
    return ErrorStats(len(samples), mae, rmse, skew, corr, defined)


@dataclass(frozen=True)
class Calibration:
    """Everything fitted from one calibration set."""

    mf: TriangularMF
    normal: NormalErrorModel
    gamma: GammaErrorModel
    stats: ErrorStats

    def to_dict(self) -> dict:
        return {
            "mf": self.mf.as_list(),
            "normal": {"mu": self.normal.mu, "sigma": self.normal.sigma},
            "gamma": {"alpha": self.gamma.alpha, "beta": self.gamma.beta,
                      "location": self.gamma.location},
            "stats": asdict(self.stats),
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def calibrate(samples: Sequence[ErrorSample], q_low: float = 0.005,
              q_high: float = 0.995) -> Calibration:
    errors = [s.error for s in samples]
    return Calibration(calibrate_mf(errors, q_low, q_high), fit_normal(errors),
                       fit_gamma(errors), error_stats(samples))


def load_calibration_document(path: str | Path) -> dict:
    """Read a calibration JSON document into model objects where present."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    out = {}
    if "mf" in doc:
        out["mf"] = TriangularMF(*doc["mf"])
    if "normal" in doc:
        out["normal"] = NormalErrorModel(doc["normal"]["mu"], doc["normal"]["sigma"])
    if "gamma" in doc:
        g = doc["gamma"]
        out["gamma"] = GammaErrorModel(g["alpha"], g["beta"], g.get("location", 0.0))
    if "eta" in doc:
        out["eta"] = float(doc["eta"])
    return out


def samples_from_errors(errors: Iterable[float], reference: float = 10.0) -> list[ErrorSample]:
    """Wrap bare errors as samples at a fixed reference range."""
    return [ErrorSample(reference + e, reference) for e in errors]
