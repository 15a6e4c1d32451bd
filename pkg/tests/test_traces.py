"""Trace files, metrics and the synthetic trace generator."""

import json
import math

import numpy as np
import pytest

from lateration import ObservationSet, Point2D, TraceFix, boxplot_stats, evaluate, load_trace, make_locator, save_trace
from lateration.traces import (BUILDING_GAMMA, TraceFormatError, building_anchors, format_table,
                               load_calibration_samples, metrics_from_errors,
                               save_calibration_samples, synthesize_calibration,
                               synthesize_trace)


def fix(truth, pairs, t=0.0):
    return TraceFix(t, Point2D(*truth), ObservationSet.from_pairs(pairs))


class TestMetrics:
    def test_hand_values(self):
        m = metrics_from_errors([3.0, 4.0])
        assert m.mae == 3.5
        assert m.rmse == pytest.approx(math.sqrt(12.5))
        assert m.max == 4.0

    def test_boxplot_nearest_rank(self):
        b = boxplot_stats([1, 2, 3, 4, 100])
        assert (b.q1, b.median, b.q3) == (2, 3, 4)
        assert b.outliers == (100,)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            metrics_from_errors([])

    def test_table_two_decimals(self):
        table = format_table([("Min-Max", metrics_from_errors([2.0466, 2.0466]))])
        assert "2.05" in table and "MAE" in table.splitlines()[0]


class TestEvaluate:
    def test_exact_fixes_have_zero_error(self):
        trace = [fix((5, 0), [((0, 0), 6), ((10, 0), 6)])]
        ev = evaluate(trace, make_locator("minmax"))
        assert ev.metrics.mae == 0 and ev.metrics.count == 1

    def test_fixes_below_minimum_are_skipped(self):
        trace = [fix((1, 1), [((1, 1), 0.0)]), fix((4, 0), [((0, 0), 4), ((10, 0), 6)])]
        ev = evaluate(trace, make_locator("nlls"))
        assert ev.metrics.count == 1 and ev.metrics.skipped == 1

    def test_nothing_to_evaluate(self):
        with pytest.raises(ValueError):
            evaluate([fix((1, 1), [((1, 1), 0.0)])], make_locator("nlls"))


class TestFiles:
    def test_round_trip(self, tmp_path):
        trace = [fix((1, 2), [((0, 0), 3.5), ((4, 4), 1.25)], t=0.5)]
        save_trace(trace, tmp_path / "t.jsonl")
        assert load_trace(tmp_path / "t.jsonl") == trace

    def test_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text('\n{"truth": [0, 0], "obs": [{"a": [1, 0], "r": 1}]}\n\n')
        assert len(load_trace(p)) == 1

    def test_bad_line_reports_line_number(self, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text('{"truth": [0, 0], "obs": [{"a": [1, 0], "r": 1}]}\n{"truth": [0, 0]}\n')
        with pytest.raises(TraceFormatError) as err:
            load_trace(p)
        assert err.value.line == 2

    def test_negative_range_rejected(self, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text('{"truth": [0, 0], "obs": [{"a": [1, 0], "r": -1}]}\n')
        with pytest.raises(TraceFormatError):
            load_trace(p)

    def test_calibration_round_trip(self, tmp_path):
        samples = synthesize_calibration(50, seed=1)
        save_calibration_samples(samples, tmp_path / "c.jsonl")
        assert load_calibration_samples(tmp_path / "c.jsonl") == samples


class TestSynthetic:
    def test_building_layout(self):
        a = building_anchors()
        assert a.shape == (17, 2)
        assert len({tuple(p) for p in a}) == 17

    def test_seeded_and_shaped(self):
        a = synthesize_trace(50, seed=4)
        b = synthesize_trace(50, seed=4)
        assert a == b and len(a) == 50
        assert all(1 <= len(f.observations) <= 17 for f in a)

    def test_walker_stays_in_bounds(self):
        lo, hi = building_anchors().min(axis=0), building_anchors().max(axis=0)
        for f in synthesize_trace(200, seed=5):
            assert lo[0] <= f.truth.x <= hi[0] and lo[1] <= f.truth.y <= hi[1]

    def test_calibration_errors_follow_gamma(self):
        errors = np.array([s.error for s in synthesize_calibration(20_000, seed=6)])
        assert errors.mean() == pytest.approx(BUILDING_GAMMA.mean, abs=0.1)
        assert errors.min() >= BUILDING_GAMMA.location
