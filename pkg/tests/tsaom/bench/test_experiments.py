import logging

import pandas as pd
import pytest

from tsaom.bench import (
    ExperimentSpec,
    ResultTable,
    class_comparison,
    fixed_budget,
    run_experiment,
    runtime_curve,
)
from tsaom.errors import InvalidSpecError


def make_spec(**fields) -> ExperimentSpec:
    values = {"n": 8, "algorithms": ["rs", "ea"], "runs": 3, "budget": 200, "seed": 5}
    return ExperimentSpec(**{**values, **fields})


class TestFixedBudget:
    def test_rows(self):
        spec = make_spec(n=[6, 8], classes=["general", "disjoint"], t_values=[1, 2])
        table = fixed_budget(spec)
        # 2 dimensions x (1 general + 2 disjoint cells) x 2 algorithms x 3 runs.
        assert len(table) == 36
        assert table.metric == "best_value"
        assert list(table.rows.columns[:4]) == ["n", "function_class", "t", "algorithm"]
        assert (table.rows["evaluations"] == 200).all()
        assert (table.rows["best_value"] <= table.rows["n"]).all()
        assert not table.rows["capped"].any()
        assert table.trajectories is None

    def test_rows_in_grid_order(self):
        table = fixed_budget(make_spec(runs=2))
        assert table.rows["algorithm"].tolist() == ["RS", "RS", "(1+1) EA", "(1+1) EA"]
        assert table.rows["run"].tolist() == [0, 1, 0, 1]

    def test_deterministic(self):
        spec = make_spec(classes=["unconstrained"], t_values=[3])
        pd.testing.assert_frame_equal(fixed_budget(spec).rows, fixed_budget(spec).rows)

    def test_seed_matters(self):
        first = fixed_budget(make_spec(n=30, algorithms=["rs"], runs=10))
        second = fixed_budget(make_spec(n=30, algorithms=["rs"], runs=10, seed=6))
        assert not first.rows["best_value"].equals(second.rows["best_value"])

    @pytest.mark.filterwarnings("ignore::DeprecationWarning")
    def test_workers_do_not_change_results(self):
        spec = make_spec(n=[6, 7], runs=4)
        serial = fixed_budget(spec)
        parallel = fixed_budget(spec.model_copy(update={"workers": 2}))
        pd.testing.assert_frame_equal(serial.rows, parallel.rows)

    def test_shared_instances(self):
        table = fixed_budget(make_spec(runs=5, instance_policy="shared", instances=2))
        assert table.rows["instance"].tolist()[:5] == [0, 1, 0, 1, 0]

    def test_summary(self):
        table = fixed_budget(make_spec(runs=4))
        summary = table.summary()
        assert summary["algorithm"].tolist() == ["RS", "(1+1) EA"]
        assert (summary["runs"] == 4).all()
        rs = table.rows[table.rows["algorithm"] == "RS"]["best_value"]
        assert summary.loc[0, "mean"] == pytest.approx(rs.mean())
        assert summary.loc[0, "median"] == pytest.approx(rs.median())
        assert (summary["capped"] == 0).all()

    def test_trajectories(self):
        table = fixed_budget(make_spec(record_trajectory=True))
        trajectories = table.trajectories
        assert list(trajectories.columns) == [
            "n",
            "function_class",
            "t",
            "algorithm",
            "run",
            "evaluation",
            "best_value",
        ]
        last = trajectories.groupby(["algorithm", "run"], sort=False)["best_value"].max()
        best = table.rows.set_index(["algorithm", "run"])["best_value"]
        assert (last == best.loc[last.index]).all()


class TestRuntimeCurve:
    def test_runtime_is_the_first_hit(self):
        spec = make_spec(
            experiment="runtime_curve", n=6, classes=["unconstrained"], t_values=[0, 3]
        )
        table = runtime_curve(spec)
        rows = table.rows
        assert table.metric == "runtime"
        assert not rows["capped"].any()
        assert (rows["runtime"] == rows["evaluations_to_optimum"]).all()
        assert (rows["best_value"] == 6).all()
        # RS stops at the end of the batch holding the optimum.
        ea = rows[rows["kind"] == "ea"]
        assert (ea["evaluations"] == ea["runtime"]).all()

    def test_capped_runs(self, caplog):
        spec = make_spec(experiment="runtime_curve", n=40, algorithms=["rs"], runtime_cap=50)
        with caplog.at_level(logging.WARNING, logger="tsaom.bench.experiments"):
            table = runtime_curve(spec)
        assert table.rows["capped"].all()
        assert (table.rows["runtime"] == 50).all()
        assert table.rows["evaluations_to_optimum"].isna().all()
        assert table.summary()["capped"].tolist() == [3]
        assert "3 of 3 runs hit the runtime cap" in caplog.text

    def test_runtime_grows_with_dimension(self):
        spec = make_spec(
            experiment="runtime_curve",
            n=[8, 32],
            classes=["unconstrained"],
            algorithms=["ea"],
            runs=10,
        )
        summary = runtime_curve(spec).summary()
        assert summary.loc[0, "mean"] < summary.loc[1, "mean"]


class TestClassComparison:
    def test_paired(self):
        spec = make_spec(
            experiment="class_comparison",
            n=6,
            classes=["commuting", "noncommuting_consecutive"],
            t_values=[2],
            algorithms=["ea"],
        )
        table = class_comparison(spec)
        assert set(table.rows["function_class"]) == {"commuting", "noncommuting_consecutive"}
        paired = table.paired()
        assert len(paired) == 1
        assert {"mean_commuting", "mean_noncommuting_consecutive"} <= set(paired.columns)
        assert list(paired.columns[:3]) == ["n", "t", "algorithm"]

    def test_needs_two_classes(self):
        spec = make_spec(experiment="class_comparison", classes=["general", "disjoint"])
        with pytest.raises(InvalidSpecError, match="exactly two"):
            class_comparison(spec.model_copy(update={"classes": ("general",)}))


class TestRunExperiment:
    @pytest.mark.parametrize(
        ("experiment", "metric"),
        [
            ("fixed_budget", "best_value"),
            ("runtime_curve", "runtime"),
            ("ecdf", "best_value"),
        ],
    )
    def test_dispatch(self, experiment, metric):
        table = run_experiment(make_spec(experiment=experiment, n=5, runs=2))
        assert isinstance(table, ResultTable)
        assert table.metric == metric
        assert (table.trajectories is not None) is (experiment == "ecdf")


def mean_runtime(summary: pd.DataFrame, **cell) -> float:
    mask = pd.Series(True, index=summary.index)
    for column, value in cell.items():
        mask &= summary[column] == value
    (mean,) = summary.loc[mask, "mean"]
    return float(mean)


@pytest.mark.slow
class TestEvolutionaryRuntimes:
    def test_runtime_saturates_with_the_length(self):
        spec = ExperimentSpec(
            experiment="runtime_curve",
            n=11,
            classes=["unconstrained"],
            t_values=[0, 5, 10, 20, 40, 80, 160],
            algorithms=["ea"],
            runs=100,
            seed=12,
        )
        summary = run_experiment(spec).summary()
        assert (summary["capped"] == 0).all()
        means = {t: mean_runtime(summary, t=t) for t in spec.t_values}
        assert 10 * means[0] <= means[160]
        assert 0.5 <= means[160] / means[80] <= 2

    def test_unique_destination_is_harder(self):
        spec = ExperimentSpec(
            experiment="class_comparison",
            n=9,
            classes=["unique_destination", "unique_source"],
            t_values=[8],
            algorithms=["ea"],
            runs=50,
            seed=13,
        )
        summary = run_experiment(spec).summary()
        destination = mean_runtime(summary, function_class="unique_destination")
        source = mean_runtime(summary, function_class="unique_source")
        assert destination >= source

    def test_disjoint_is_close_to_onemax(self):
        spec = ExperimentSpec(
            experiment="runtime_curve",
            n=[8, 10, 12, 14],
            classes=["disjoint"],
            t_values=[0, "max"],
            algorithms=["ea"],
            runs=100,
            seed=14,
        )
        summary = run_experiment(spec).summary()
        for n in spec.n:
            ratio = mean_runtime(summary, n=n, t=n // 2) / mean_runtime(summary, n=n, t=0)
            assert 1 <= ratio <= 4
