"""Spatial sweeps, classification, comparison and file output."""

import json
import math

import numpy as np
import pytest

from lateration import MixtureErrorModel, Point2D, Scenario, classify, diff, make_locator, render, sweep
from lateration.spatial import (Band, Comparison, SpatialErrorGrid, band_of, builtin_scenario,
                                compare_cell, hull_mask, inside_hull, load_scenario, read_csv,
                                read_ppm, region_mask, scenario_to_dict, to_rgb, write_csv)

from oracles import min_max_oracle

CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))
SILENT = MixtureErrorModel()


def scenario(width=1.0, cols=1, rows=1, trials=1, model=SILENT, seed=0, anchors=CORNERS, **kw):
    return Scenario(width, width, anchors, cols, rows, trials, model, seed, **kw)


def grid_of(values, sc):
    values = np.asarray(values, dtype=float)
    return SpatialErrorGrid(values, np.zeros_like(values), sc)


class TestSweep:
    def test_noise_free_centre_is_exact(self):
        g = sweep(scenario(), make_locator("minmax"))
        assert g.mean[0, 0] == pytest.approx(0.0, abs=1e-15)

    def test_noise_free_off_centre_cell(self):
        # a single cell of a 0.4 x 0.4 field has its centre at (0.2, 0.2)
        g = sweep(scenario(width=0.4), make_locator("minmax"))
        truth = (0.2, 0.2)
        d = [math.dist(truth, a) for a in CORNERS]
        x, y = min_max_oracle(CORNERS, d)
        assert g.mean[0, 0] == pytest.approx(math.dist((x, y), truth), abs=1e-15)
        assert g.mean[0, 0] == pytest.approx(0.0411689, abs=1e-7)

    def test_repeatable(self):
        sc = scenario(cols=6, rows=5, trials=20, model=MixtureErrorModel(0.05, 0.015, 0.1, 2), seed=9)
        a = sweep(sc, make_locator("eminmax-w4"))
        b = sweep(sc, make_locator("eminmax-w4"))
        np.testing.assert_array_equal(a.mean, b.mean)

    def test_seed_changes_result(self):
        model = MixtureErrorModel(0.05, 0.015, 0.1, 2)
        a = sweep(scenario(cols=3, rows=3, trials=10, model=model, seed=1), make_locator("minmax"))
        b = sweep(scenario(cols=3, rows=3, trials=10, model=model, seed=2), make_locator("minmax"))
        assert not np.array_equal(a.mean, b.mean)

    def test_block_split_does_not_matter(self):
        sc = scenario(cols=4, rows=7, trials=5, model=MixtureErrorModel(0.05, 0.015, 0.1, 2), seed=3)
        loc = make_locator("mdminmax", mf=(-0.05, 0.05, 0.2))
        a = sweep(sc, loc, rows_per_task=1)
        b = sweep(sc, loc, rows_per_task=7)
        np.testing.assert_array_equal(a.mean, b.mean)
        np.testing.assert_array_equal(a.std, b.std)

    def test_row_zero_is_lowest_y(self):
        sc = scenario(cols=1, rows=4)
        xs, ys = sc.cell_centres()
        assert ys[0] < ys[-1]
        assert sc.cell_of(Point2D(0.5, 0.01)) == (0, 0)
        assert sc.cell_of(Point2D(1.0, 1.0)) == (3, 0)
        assert sc.cell_of(Point2D(1.5, 0.5)) is None


class TestClassify:
    @pytest.mark.parametrize("value,band", [(0.04, Band.GREEN), (0.05, Band.GREY),
                                            (0.2499, Band.GREY), (0.25 + 1e-9, Band.BLUE),
                                            (0.25, Band.BLUE), (0.0, Band.GREEN)])
    def test_bands(self, value, band):
        assert band_of(value, 0.05) is band

    def test_grid_matches_scalar_bands_and_marks_anchors(self):
        sc = scenario(cols=4, rows=4, anchors=((0.1, 0.1),), expected_error=0.05)
        values = np.random.default_rng(0).uniform(0, 0.4, (4, 4))
        cg = classify(grid_of(values, sc))
        assert cg.bands[0, 0] == Band.ANCHOR
        for (i, j), v in np.ndenumerate(values):
            if (i, j) != (0, 0):
                assert cg.bands[i, j] == band_of(v, 0.05)

    def test_rejects_non_positive_expected(self):
        with pytest.raises(ValueError):
            classify(grid_of([[0.1]], scenario(anchors=((5, 5),))), 0.0)


class TestDiff:
    def sc(self):
        return scenario(cols=3, rows=2, anchors=((9, 9),))

    def test_identity_all_equivalent(self):
        v = np.random.default_rng(1).uniform(0, 1, (2, 3))
        d = diff(grid_of(v, self.sc()), grid_of(v, self.sc()))
        assert (d.classes == Comparison.EQUIVALENT).all()

    def test_first_strictly_better(self):
        v = np.random.default_rng(2).uniform(1, 2, (2, 3))
        d = diff(grid_of(v - 10 * 0.016, self.sc()), grid_of(v, self.sc()))
        assert (d.classes == Comparison.FIRST_BETTER).all()

    def test_matches_cellwise_reference(self):
        rng = np.random.default_rng(3)
        a = rng.uniform(0, 0.1, (2, 3))
        b = a + rng.choice([-0.05, -0.01, 0.0, 0.01, 0.05], (2, 3))
        d = diff(grid_of(a, self.sc()), grid_of(b, self.sc()))
        for idx in np.ndindex(2, 3):
            assert d.classes[idx] == compare_cell(a[idx], b[idx], 0.016)

    def test_scenario_mismatch(self):
        other = scenario(cols=3, rows=2, anchors=((1, 1),))
        with pytest.raises(ValueError):
            diff(grid_of(np.zeros((2, 3)), self.sc()), grid_of(np.zeros((2, 3)), other))


class TestRender:
    def test_all_green_two_by_two(self, tmp_path):
        sc = scenario(cols=2, rows=2, anchors=((9, 9),), expected_error=1.0)
        ppm, csv = render(classify(grid_of(np.full((2, 2), 0.5), sc)), tmp_path / "g")
        raw = ppm.read_bytes()
        assert raw.startswith(b"P6\n2 2\n255\n")
        pixels = read_ppm(ppm).reshape(-1, 3)
        assert len({tuple(p) for p in pixels}) == 1 and pixels[0][1] > 0 == pixels[0][0]
        assert read_csv(csv).shape == (2, 2)

    def test_anchor_pixel_is_red(self, tmp_path):
        sc = scenario(cols=3, rows=3, anchors=((0.5, 0.5),), expected_error=1.0)
        ppm, _ = render(classify(grid_of(np.zeros((3, 3)), sc)), tmp_path / "a.ppm")
        assert tuple(read_ppm(ppm)[1, 1]) == (255, 0, 0)

    def test_top_row_is_highest_y(self, tmp_path):
        sc = scenario(cols=1, rows=2, anchors=((0.5, 0.9),), expected_error=1.0)
        rgb = to_rgb(classify(grid_of([[0.1], [0.1]], sc)))
        assert tuple(rgb[0, 0]) == (255, 0, 0)      # anchor lives in the upper cell
        path = write_csv(np.array([[1.0], [2.0]]), tmp_path / "v.csv")
        assert path.read_text().splitlines() == ["2", "1"]
        np.testing.assert_array_equal(read_csv(path), [[1.0], [2.0]])

    def test_csv_round_trip_is_exact(self, tmp_path):
        v = np.random.default_rng(4).uniform(0, 1, (5, 7))
        np.testing.assert_array_equal(read_csv(write_csv(v, tmp_path / "x.csv")), v)


class TestRegions:
    def test_square_hull(self):
        pts = np.array([[0.5, 0.5], [1.5, 0.5], [1.0, 1.0]])
        np.testing.assert_array_equal(inside_hull(pts, np.array(CORNERS, float)), [True, False, True])

    def test_collinear_anchors_have_empty_hull(self):
        assert not inside_hull(np.array([[0.5, 0.0]]), np.array([[0, 0], [1, 0], [2, 0]], float)).any()

    def test_hull_and_region_masks(self):
        sc = scenario(cols=10, rows=10, anchors=((0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)))
        assert hull_mask(sc).sum() == 36
        assert region_mask(sc, 0.25, 0.75, 0.25, 0.75).sum() == 36  # centres on the edges count
        assert region_mask(sc, 0.3, 0.7, 0.3, 0.7).sum() == 16


class TestScenarioFiles:
    @pytest.mark.parametrize("name", ["four_corner", "nine_centre", "five_flat"])
    def test_builtins_load(self, name):
        sc, block = builtin_scenario(name)
        assert (sc.grid_cols, sc.grid_rows, sc.trials_per_cell) == (100, 100, 100)
        assert sc.expected == pytest.approx(0.05)

    def test_round_trip(self, tmp_path):
        sc, _ = builtin_scenario("five_flat")
        path = tmp_path / "s.json"
        path.write_text(json.dumps(scenario_to_dict(sc)))
        assert load_scenario(path)[0] == sc
