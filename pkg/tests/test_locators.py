"""The uniform locator interface over all seven algorithms."""

import numpy as np
import pytest

from lateration import (ALGORITHMS, GammaErrorModel, NormalErrorModel, ObservationSet,
                        make_locator)

PARAMS = dict(mf=(-1.7, 2.38, 13.31), normal=NormalErrorModel(2.43, 3.57),
              gamma=GammaErrorModel(3.3, 0.58, -3.31))


def instance(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 20, (6, 2))
    truth = rng.uniform(5, 15, 2)
    r = np.hypot(*(a - truth).T) + rng.gamma(3.3, 1 / 0.58, 6) - 3.31
    return ObservationSet.from_arrays(a, np.maximum(r, 0))


@pytest.mark.parametrize("name", ALGORITHMS)
def test_translation_equivariance(name):
    loc = make_locator(name, **PARAMS)
    obs = instance(1)
    dx, dy = 37.0, -12.0
    base = loc.locate(obs)
    moved = loc.locate(obs.translated(dx, dy))
    assert (moved.x, moved.y) == pytest.approx((base.x + dx, base.y + dy), abs=1e-6)


@pytest.mark.parametrize("name", ALGORITHMS)
def test_batch_agrees_with_scalar(name):
    loc = make_locator(name, **PARAMS)
    obs = instance(2)
    rng = np.random.default_rng(3)
    ranges = obs.ranges + rng.uniform(-0.5, 0.5, (4, len(obs)))
    res = loc.locate_batch(obs.anchors, ranges)
    for row, xy in zip(ranges, res.xy):
        est = loc.locate(ObservationSet.from_arrays(obs.anchors, row))
        assert tuple(xy) == pytest.approx((est.x, est.y), abs=1e-12)


@pytest.mark.parametrize("name", ["mdminmax", "mle-normal", "mle-gamma"])
def test_missing_parameter(name):
    with pytest.raises(ValueError):
        make_locator(name)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        make_locator("trilateration")


def test_minimum_anchor_counts():
    assert make_locator("minmax").min_anchors == 1
    assert make_locator("nlls").min_anchors == 2
