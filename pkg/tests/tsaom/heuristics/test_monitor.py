import numpy as np
import pytest

from tsaom.aom import CountingOracle, onemax_function
from tsaom.gf2 import BitVec
from tsaom.heuristics import AlgorithmConfig, SearchMonitor, SearchStopped


def monitor_for(n: int = 4, budget: int = 10, **overrides) -> SearchMonitor:
    config = AlgorithmConfig.for_kind("rs", budget, **overrides)
    return SearchMonitor(CountingOracle(onemax_function(n)), config)


def points(*rows: str) -> np.ndarray:
    return np.array([[int(c) for c in row] for row in rows], dtype=np.uint8)


class TestSearchMonitor:
    def test_tracks_the_best(self):
        monitor = monitor_for()
        monitor.evaluate_batch(points("0100", "1101", "1100"))
        monitor.evaluate(points("0000")[0])
        record = monitor.record()
        assert record.best_value == 3
        assert str(record.best_point) == "1101"
        assert record.evaluations == 4
        assert record.evaluations_to_best == 2
        assert record.evaluations_to_optimum is None
        assert record.trajectory is None

    def test_first_best_point_is_kept(self):
        monitor = monitor_for()
        monitor.evaluate_batch(points("1000", "0100"))
        assert monitor.record().evaluations_to_best == 1
        assert str(monitor.record().best_point) == "1000"

    def test_batch_is_cut_to_the_budget(self):
        monitor = monitor_for(budget=3)
        with pytest.raises(SearchStopped):
            monitor.evaluate_batch(points("0000", "0001", "0011", "0111", "1111"))
        assert monitor.oracle.eval_count == 3
        assert monitor.record().best_value == 2
        with pytest.raises(SearchStopped):
            monitor.evaluate(points("1111")[0])
        assert monitor.oracle.eval_count == 3

    def test_exact_budget_does_not_stop_early(self):
        monitor = monitor_for(budget=2)
        values = monitor.evaluate_batch(points("0001", "0011"))
        np.testing.assert_array_equal(values, [1, 2])
        assert monitor.remaining == 0

    def test_stop_on_optimum_finishes_the_batch(self):
        monitor = monitor_for(stop_on_optimum=True)
        with pytest.raises(SearchStopped):
            monitor.evaluate_batch(points("0001", "1111", "0000"))
        record = monitor.record()
        assert record.evaluations == 3
        assert record.evaluations_to_optimum == 2
        assert record.evaluations_to_best == 2

    def test_optimum_without_stopping(self):
        monitor = monitor_for()
        monitor.evaluate_batch(points("1111", "1111"))
        monitor.evaluate(points("1111")[0])
        assert monitor.record().evaluations_to_optimum == 1

    def test_trajectory(self):
        monitor = monitor_for(record_trajectory=True)
        monitor.evaluate_batch(points("0000", "0001", "0001", "0111"))
        monitor.evaluate_batch(points("0011", "1111"))
        assert monitor.record().trajectory == ((1, 0), (2, 1), (4, 3), (6, 4))

    def test_oracle_budget_bounds_the_run(self):
        oracle = CountingOracle(onemax_function(4), budget=5)
        oracle(BitVec.zeros(4))
        monitor = SearchMonitor(oracle, AlgorithmConfig.for_kind("rs", 100))
        assert monitor.remaining == 4

    def test_empty_record(self):
        with pytest.raises(ValueError, match="No point"):
            monitor_for().record()


def test_trajectory_ignores_ties_with_the_previous_best():
    monitor = monitor_for(record_trajectory=True)
    monitor.evaluate_batch(points("0111"))
    monitor.evaluate_batch(points("0011", "1011", "1111"))
    assert monitor.record().trajectory == ((1, 3), (4, 4))


class TestSinglePoints:
    def test_values_match_the_batch_path(self, rng):
        X = rng.integers(0, 2, size=(20, 4), dtype=np.uint8)
        single = monitor_for(budget=20)
        batch = monitor_for(budget=20)
        values = [single.evaluate(x) for x in X]
        np.testing.assert_array_equal(values, batch.evaluate_batch(X))
        assert single.record() == batch.record()

    def test_does_not_build_a_batch(self, monkeypatch):
        monitor = monitor_for()

        def no_batches(points):
            msg = f"unexpected batch of shape {points.shape}"
            raise AssertionError(msg)

        monkeypatch.setattr(monitor.oracle, "evaluate_batch", no_batches)
        assert monitor.evaluate(points("0110")[0]) == 2
        assert monitor.oracle.eval_count == 1

    def test_best_point_is_a_copy(self):
        monitor = monitor_for()
        x = points("0111")[0]
        monitor.evaluate(x)
        x[0] = 1
        assert str(monitor.record().best_point) == "0111"

    def test_stop_on_optimum(self):
        monitor = monitor_for(stop_on_optimum=True, record_trajectory=True)
        monitor.evaluate(points("0011")[0])
        with pytest.raises(SearchStopped):
            monitor.evaluate(points("1111")[0])
        record = monitor.record()
        assert record.evaluations == record.evaluations_to_optimum == 2
        assert record.trajectory == ((1, 2), (2, 4))
