import pandas as pd
import pytest

from tsaom.bench import ExperimentSpec, ResultTable, default_targets, ecdf, fixed_budget
from tsaom.bench.ecdf import ECDF_COLUMNS


def trajectory_table(paths: dict[int, list[tuple[int, int]]], n: int = 4) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "n": n,
                "function_class": "general",
                "t": 0,
                "algorithm": "RLS",
                "run": run,
                "evaluation": evaluation,
                "best_value": value,
            }
            for run, path in paths.items()
            for evaluation, value in path
        ]
    )


class TestEcdf:
    def test_default_targets(self):
        assert default_targets(4) == [2, 3, 4]
        assert default_targets(7) == [3, 4, 5, 6, 7]

    def test_step_function(self):
        trajectories = trajectory_table({0: [(1, 2), (3, 4)], 1: [(1, 1), (5, 3)]})
        curve = ecdf(trajectories)
        assert list(curve.columns) == ECDF_COLUMNS
        assert curve["evaluations"].tolist() == [1, 3, 5]
        assert curve["fraction"].tolist() == pytest.approx([1 / 6, 3 / 6, 5 / 6])
        assert curve["algorithm"].unique().tolist() == ["RLS"]

    def test_explicit_targets(self):
        trajectories = trajectory_table({0: [(1, 2), (3, 4)], 1: [(1, 1), (5, 3)]})
        curve = ecdf(trajectories, targets=[4])
        assert curve["evaluations"].tolist() == [3]
        assert curve["fraction"].tolist() == [0.5]

    def test_no_hits(self):
        curve = ecdf(trajectory_table({0: [(1, 0)]}), targets=[4])
        assert curve.empty
        assert list(curve.columns) == ECDF_COLUMNS

    def test_from_an_experiment(self):
        spec = ExperimentSpec(
            experiment="ecdf", n=[8, 12], algorithms=["ea", "umda"], runs=3, budget=500, seed=2
        )
        curve = ecdf(fixed_budget(spec))
        for _, group in curve.groupby(["n", "algorithm"], sort=False):
            fractions = group["fraction"].to_numpy()
            assert (fractions[1:] >= fractions[:-1]).all()
            assert 0 < fractions[-1] <= 1
        assert set(curve["n"]) == {8, 12}

    def test_needs_trajectories(self):
        table = ResultTable(experiment="fixed_budget", metric="best_value", rows=pd.DataFrame())
        with pytest.raises(ValueError, match="trajectories"):
            ecdf(table)
