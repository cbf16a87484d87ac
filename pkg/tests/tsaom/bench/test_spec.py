"""Tests for experiment specs."""

import pytest
from pydantic import ValidationError

from tsaom.bench import ExperimentKind, ExperimentSpec, load_experiment_spec
from tsaom.errors import InvalidSpecError, SequenceLengthError
from tsaom.heuristics import AlgorithmKind


def make_spec(**fields) -> ExperimentSpec:
    return ExperimentSpec(**{"n": 8, "algorithms": ["ea"], **fields})


class TestExperimentSpec:
    def test_scalars_become_sequences(self):
        spec = make_spec(t_values=3, classes="disj", targets=8)
        assert spec.n == (8,)
        assert spec.t_values == (3,)
        assert spec.classes == ("disjoint",)
        assert spec.targets == (8,)

    def test_defaults(self):
        spec = make_spec()
        assert spec.experiment is ExperimentKind.FIXED_BUDGET
        assert spec.classes == ("general",)
        assert spec.runs == 20
        assert not spec.trajectories

    @pytest.mark.parametrize(
        "fields",
        [
            {"classes": ["unique"]},
            {"classes": ["blue"]},
            {"algorithms": []},
            {"algorithms": ["zz"]},
            {"algorithms": [{"kind": "ga", "elitism": 100}]},
            {"experiment": "class_comparison", "classes": ["general"]},
            {"instance_policy": "reuse"},
            {"colour": "red"},
        ],
        ids=[
            "ambiguous-class",
            "unknown-class",
            "no-algorithms",
            "unknown-kind",
            "bad-parameters",
            "one-class",
            "policy",
            "unknown-field",
        ],
    )
    def test_invalid(self, fields):
        with pytest.raises(ValidationError):
            make_spec(**fields)

    def test_ecdf_records_trajectories(self):
        spec = make_spec(experiment="ecdf")
        assert spec.trajectories
        assert all(config.record_trajectory for config in spec.configs())


class TestCells:
    def test_grid_order(self):
        spec = make_spec(n=[4, 6], classes=["commuting", "disjoint"], t_values=[1, 2])
        cells = [(cell.n, cell.function_class, cell.t) for cell in spec.cells()]
        assert cells == [
            (4, "commuting", 1),
            (4, "commuting", 2),
            (4, "disjoint", 1),
            (4, "disjoint", 2),
            (6, "commuting", 1),
            (6, "commuting", 2),
            (6, "disjoint", 1),
            (6, "disjoint", 2),
        ]
        assert [cell.index for cell in spec.cells()] == list(range(8))

    def test_general_appears_once(self):
        spec = make_spec(classes=["general", "unconstrained"], t_values=[0, 5])
        cells = [(cell.function_class, cell.t) for cell in spec.cells()]
        assert cells == [("general", 0), ("unconstrained", 0), ("unconstrained", 5)]

    def test_max_length(self):
        spec = make_spec(n=[6, 9], classes=["disjoint", "unique_source"], t_values=["max"])
        assert [cell.t for cell in spec.cells()] == [3, 5, 4, 8]

    def test_max_without_bound(self):
        with pytest.raises(InvalidSpecError, match="no largest length"):
            make_spec(classes=["unconstrained"], t_values=["max"]).cells()

    def test_length_out_of_range(self):
        with pytest.raises(SequenceLengthError):
            make_spec(classes=["disjoint"], t_values=[5]).cells()


class TestConfigs:
    def test_fixed_budget(self):
        spec = make_spec(algorithms=["ea", {"kind": "ga", "budget": 50}], budget=700)
        ea, ga = spec.configs()
        assert (ea.budget, ga.budget) == (700, 50)
        assert not ea.stop_on_optimum

    def test_runtime(self):
        spec = make_spec(experiment="runtime_curve", runtime_cap=5000)
        (config,) = spec.configs()
        assert config.budget == 5000
        assert config.stop_on_optimum

    def test_labels_number_repeated_kinds(self):
        spec = make_spec(algorithms=["ea", {"kind": "ea", "mutation_rate": 0.2}, "ga"])
        assert spec.labels() == ["(1+1) EA #1", "(1+1) EA #2", "GA"]
        assert spec.configs()[1].kind is AlgorithmKind.EA
        assert spec.configs()[1].mutation_rate == 0.2


class TestLoadExperimentSpec:
    def test_asset(self, assets_dir):
        spec = load_experiment_spec(assets_dir / "runtime_spec.yml")
        assert spec.name == "runtime_spec"
        assert spec.experiment is ExperimentKind.RUNTIME_CURVE
        assert spec.t_values == (0, 2, 4)
        assert spec.workers == 1

    def test_profile(self, assets_dir):
        spec = load_experiment_spec(assets_dir / "runtime_spec.yml", profile="quick")
        assert spec.runs == 2
        assert spec.t_values == (0,)

    def test_profile_from_environment(self, assets_dir, monkeypatch):
        monkeypatch.setenv("TSAOM_PROFILE", "quick")
        assert load_experiment_spec(assets_dir / "runtime_spec.yml").runs == 2

    def test_bench_defaults_fill_gaps(self, tmp_path):
        path = tmp_path / "small.yml"
        path.write_text("default:\n  n: 5\n  algorithms: [rs]\n", encoding="utf-8")
        spec = load_experiment_spec(path)
        assert spec.runs == 20
        assert spec.runtime_cap == 100_000_000

    def test_invalid(self, tmp_path):
        path = tmp_path / "broken.yml"
        path.write_text("default:\n  n: 5\n  algorithms: [rs]\n  runs: 0\n", encoding="utf-8")
        with pytest.raises(InvalidSpecError, match="broken.yml"):
            load_experiment_spec(path)

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_experiment_spec(tmp_path / "absent.yml")
