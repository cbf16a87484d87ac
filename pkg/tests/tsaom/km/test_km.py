import itertools
import math

import numpy as np
import pytest
from pydantic import ValidationError

from tsaom.aom import (
    CountingOracle,
    functions_equal,
    make_aom,
    onemax_function,
    optimum,
    sample_aom,
)
from tsaom.errors import NotFoundError
from tsaom.gf2 import BitMat, BitVec, from_index
from tsaom.km import (
    KmParams,
    KmStats,
    default_threshold,
    estimate_coefficient_inner,
    estimate_energy,
    estimate_sign,
    exact_params,
    format_report,
    km_attempts,
    km_collect,
    km_maximize,
    km_maximize_repeated,
    practical_params,
    preset_params,
    theoretical_params,
)
from tsaom.spectrum import g_normalize, h_normalize, restricted_energy, restricted_value


class TestParams:
    def test_default_threshold(self):
        assert default_threshold(4) == 1 / 32

    def test_theoretical(self):
        params = theoretical_params(4, 0.5)
        assert params.m1 == math.ceil(8 * 4**4 * math.log(8 * 16 / 0.5))
        assert params.m2 == math.ceil(128 * 4**4 * math.log(8 * 16 * params.m1 / 0.5))
        assert params.m3 == 111
        assert params.mode == "sampled"

    def test_theoretical_needs_two_coordinates(self):
        with pytest.raises(ValueError, match="n >= 2"):
            theoretical_params(1, 0.5)

    def test_practical(self):
        params = practical_params(8)
        assert (params.m1, params.m2, params.m3) == (256, 1024, 512)
        assert params.threshold == 1 / 128
        assert practical_params(8, m1=10).m1 == 10

    def test_presets(self):
        assert preset_params("exact", 5).mode == "exact"
        assert preset_params("practical", 5, delta=0.1).delta == 0.1
        with pytest.raises(ValueError, match="Unknown preset"):
            preset_params("fast", 5)

    @pytest.mark.parametrize(
        "fields",
        [
            {"m1": 0, "m2": 1, "m3": 1, "threshold": 0.1},
            {"m1": 1, "m2": 1, "m3": 1, "threshold": 0.0},
            {"m1": 1, "m2": 1, "m3": 1, "threshold": math.inf},
            {"m1": 1, "m2": 1, "m3": 1, "threshold": 0.1, "delta": 1.0},
            {"m1": 1, "m2": 1, "m3": 1, "threshold": 0.1, "mode": "fast"},
        ],
        ids=["m1", "zero-threshold", "infinite-threshold", "delta", "mode"],
    )
    def test_validation(self, fields):
        with pytest.raises(ValidationError):
            KmParams(**fields)


class TestEstimators:
    def test_inner_estimate(self, rng):
        g = g_normalize(sample_aom(6, rng))
        u, x = BitVec.parse("10"), BitVec.parse("0110")
        estimates = [estimate_coefficient_inner(g, u, x, 4000, rng) for _ in range(5)]
        assert np.mean(estimates) == pytest.approx(restricted_value(g, u, x), abs=0.05)

    def test_inner_estimate_within_three_over_root_m2(self, rng):
        g = g_normalize(sample_aom(6, rng))
        m2 = 200
        misses = 0
        for _ in range(400):
            k = int(rng.integers(1, 6))
            u = BitVec(rng.integers(0, 2, k))
            x = BitVec(rng.integers(0, 2, 6 - k))
            estimate = estimate_coefficient_inner(g, u, x, m2, rng)
            misses += abs(estimate - restricted_value(g, u, x)) >= 3 / math.sqrt(m2)
        assert misses <= 4

    def test_energy_estimate_separates_prefixes(self, rng):
        g = g_normalize(sample_aom(6, rng))
        params = practical_params(6)
        for index in range(8):
            u = from_index(index, 3)
            estimate = estimate_energy(g, u, params, rng, chunk_points=10_000)
            assert (estimate > params.threshold) is (restricted_energy(g, u) > 0)

    def test_signs(self, rng):
        f = sample_aom(6, rng)
        h = h_normalize(f)
        for row, b_i in zip(f.M.rows, f.b, strict=True):
            assert estimate_sign(h, row, 2000, rng) == b_i


class TestExactMode:
    @pytest.mark.parametrize("n", [6, 8, 10])
    def test_recovers_the_instance(self, n, rng):
        f = sample_aom(n, rng)
        oracle = CountingOracle(f)
        report = km_maximize(oracle, exact_params(n), rng)
        assert report.success
        assert report.candidate == optimum(f)
        assert set(report.features) == set(f.M.rows)
        assert report.evaluations_used == 2**n + 1
        assert report.expanded_nodes <= n * n
        assert report.visited_nodes <= 2 * n * n + 1
        learned = make_aom(BitMat.from_rows(report.features), report.b_hat)
        assert functions_equal(learned, f)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [6, 8, 10])
    def test_recovers_many_instances(self, n, rng):
        for _ in range(50):
            f = sample_aom(n, rng)
            report = km_maximize(CountingOracle(f), exact_params(n), rng)
            assert report.success
            assert report.candidate == optimum(f)
            assert set(report.features) == set(f.M.rows)
            b_of_row = dict(zip(f.M.rows, f.b, strict=True))
            assert list(report.b_hat) == [b_of_row[u] for u in report.features]
            assert report.expanded_nodes <= 2 * n * n + 1

    def test_features_in_depth_first_order(self, rng):
        f = sample_aom(7, rng)
        stats = KmStats()
        features = km_collect(g_normalize(f), 7, exact_params(7), rng, stats)
        assert features == sorted(f.M.rows)
        assert stats.visited_nodes == 2 * stats.expanded_nodes + 1

    def test_onemax_tree(self, rng):
        stats = KmStats()
        features = km_collect(g_normalize(onemax_function(4)), 4, exact_params(4), rng, stats)
        assert [str(u) for u in features] == ["0001", "0010", "0100", "1000"]

    def test_size_limit(self, rng):
        oracle = CountingOracle(onemax_function(17))
        with pytest.raises(ValueError, match="limited"):
            km_maximize(oracle, exact_params(17), rng)
        assert oracle.eval_count == 0


class TestSampledMode:
    def test_recovers_at_n6(self, rng):
        f = sample_aom(6, rng)
        oracle = CountingOracle(f)
        reports = km_attempts(oracle, practical_params(6), rng, max_attempts=5)
        assert reports[-1].success
        assert reports[-1].candidate == optimum(f)
        assert sum(report.evaluations_used for report in reports) == oracle.eval_count

    @pytest.mark.slow
    def test_recovers_at_n8(self, rng):
        f = sample_aom(8, rng)
        candidate = km_maximize_repeated(CountingOracle(f), practical_params(8), rng, 10)
        assert candidate == optimum(f)

    @pytest.mark.slow
    def test_success_rate_at_n8(self, rng):
        first_attempts = []
        for _ in range(50):
            f = sample_aom(8, rng)
            reports = km_attempts(CountingOracle(f), practical_params(8), rng, max_attempts=10)
            assert reports[-1].candidate == optimum(f)
            first_attempts.append(reports[0].success)
        assert np.mean(first_attempts) >= 0.5

    @pytest.mark.slow
    def test_reliability_grows_with_the_samples(self, rng):
        full = practical_params(8)
        coarse = practical_params(8, m1=full.m1 // 4, m2=full.m2 // 4, m3=full.m3 // 4)
        rates = []
        for params in (coarse, full, exact_params(8)):
            trials = [
                km_maximize(CountingOracle(sample_aom(8, rng)), params, rng).success
                for _ in range(50)
            ]
            rates.append(float(np.mean(trials)))
        # one standard deviation of slack between neighboring levels
        for low, high in itertools.pairwise(rates):
            assert low <= high + math.sqrt((low * (1 - low) + high * (1 - high)) / 50)
        assert rates[-1] == 1.0

    def test_failure_is_reported(self, rng):
        oracle = CountingOracle(sample_aom(5, rng))
        params = practical_params(5, threshold=10.0)
        report = km_maximize(oracle, params, rng)
        assert not report.success
        assert report.features == ()
        assert report.candidate is None
        assert "collected 0 feature vectors" in report.diagnostic
        assert "success: false" in format_report(report)

    def test_gives_up_after_max_attempts(self, rng):
        oracle = CountingOracle(sample_aom(5, rng))
        with pytest.raises(NotFoundError, match="2"):
            km_attempts(oracle, practical_params(5, threshold=10.0), rng, max_attempts=2)

    def test_report_text(self, rng):
        f = sample_aom(5, rng)
        report = km_maximize(CountingOracle(f), exact_params(5), rng)
        text = format_report(report)
        assert text.startswith("features:\n")
        assert f"candidate: {optimum(f)}\n" in text
        assert "success: true\n" in text
