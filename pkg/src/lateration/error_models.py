"""Range-error generators and densities.

Three models are used across the package:

* :class:`MixtureErrorModel` -- Gaussian noise plus an occasional
  exponentially distributed NLOS excess, used by the spatial simulator.
* :class:`GammaErrorModel` -- a gamma density shifted by ``location``,
  the heavy right tail typical of indoor time-of-flight ranging.
* :class:`NormalErrorModel` -- plain Gaussian, used by MLE-N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class MixtureErrorModel:
    """Gaussian bias/noise plus probabilistic exponential NLOS excess.

    The NLOS excess is ``nlos_unit * Exponential(rate=nlos_rate)``, so its
    mean is ``nlos_unit / nlos_rate``. ``nlos_unit`` exists because a bare
    "rate 2" does not say which length unit it refers to; the default of 1
    means the rate is expressed in the same unit as ``bias`` and ``sigma``.
    """

    bias: float = 0.0
    sigma: float = 0.0
    nlos_prob: float = 0.0
    nlos_rate: float = 1.0
    nlos_unit: float = 1.0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 <= self.nlos_prob <= 1.0:
            raise ValueError(f"nlos_prob must lie in [0, 1], got {self.nlos_prob}")
        if not self.nlos_rate > 0:
            raise ValueError(f"nlos_rate must be > 0, got {self.nlos_rate}")
        if not self.nlos_unit >= 0:
            raise ValueError(f"nlos_unit must be >= 0, got {self.nlos_unit}")

    @property
    def mean(self) -> float:
        return self.bias + self.nlos_prob * self.nlos_unit / self.nlos_rate

    @property
    def variance(self) -> float:
        # Var of Bernoulli(p) * Exp: p*2s^2 - (p*s)^2 with s the exponential mean
        s = self.nlos_unit / self.nlos_rate
        p = self.nlos_prob
        return self.sigma ** 2 + p * 2.0 * s * s - (p * s) ** 2


@dataclass(frozen=True)
class GammaErrorModel:
    alpha: float
    beta: float
    location: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"gamma shape and rate must be positive, got ({self.alpha}, {self.beta})")

    @property
    def mode(self) -> float:
        return self.location + max(self.alpha - 1.0, 0.0) / self.beta

    @property
    def mean(self) -> float:
        return self.location + self.alpha / self.beta

    def sample(self, rng: np.random.Generator, size=None):
        return self.location + rng.gamma(self.alpha, 1.0 / self.beta, size=size)


@dataclass(frozen=True)
class NormalErrorModel:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")

    def sample(self, rng: np.random.Generator, size=None):
        return rng.normal(self.mu, self.sigma, size=size)


def mixture_noise(model: MixtureErrorModel, rng: np.random.Generator, size=None):
    """Draw additive errors from ``model``.

    Exactly three blocks are drawn, always in the order normal, uniform,
    exponential, so the number of draws never depends on the outcome.
    """
    gauss = rng.normal(model.bias, model.sigma, size=size)
    hit = rng.random(size=size) < model.nlos_prob
    excess = rng.exponential(1.0 / model.nlos_rate, size=size) * model.nlos_unit
    return gauss + np.where(hit, excess, 0.0)


def sample_ranges(true_dist, model: MixtureErrorModel, rng: np.random.Generator):
    """Noisy ranges for an array of true distances, clamped below at zero."""
    true_dist = np.asarray(true_dist, dtype=float)
    noisy = true_dist + mixture_noise(model, rng, size=true_dist.shape)
    return np.maximum(noisy, 0.0)


def sample_range(true_dist: float, model: MixtureErrorModel, rng: np.random.Generator) -> float:
    """One noisy range measurement for a true distance."""
    noisy = true_dist + float(mixture_noise(model, rng))
    return max(noisy, 0.0)


def gamma_pdf(x, model: GammaErrorModel):
    """Density of the shifted gamma distribution at ``x``.

    Zero left of ``model.location``. At the location itself the density is
    0 for alpha > 1, beta for alpha == 1 and infinite for alpha < 1.
    Accepts scalars or arrays.
    """
    z = np.asarray(x, dtype=float) - model.location
    a, b = model.alpha, model.beta
    log_norm = a * math.log(b) - math.lgamma(a)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        pos = np.where(z > 0, z, 1.0)
        dens = np.exp(log_norm + (a - 1.0) * np.log(pos) - b * pos)
    at_zero = 0.0 if a > 1 else (b if a == 1 else math.inf)
    out = np.where(z > 0, dens, np.where(z == 0, at_zero, 0.0))
    return float(out) if out.ndim == 0 else out


def normal_logpdf(x, model: NormalErrorModel):
    z = (np.asarray(x, dtype=float) - model.mu) / model.sigma
    out = -0.5 * LOG_2PI - math.log(model.sigma) - 0.5 * z * z
    return float(out) if np.ndim(out) == 0 else out


def sample_mixture_errors(model: MixtureErrorModel, n: int, seed: int) -> np.ndarray:
    """Unclamped error draws, e.g. for calibrating a membership function."""
    return mixture_noise(model, np.random.default_rng(seed), size=n)
