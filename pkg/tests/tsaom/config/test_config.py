from pathlib import Path

import pytest

from tsaom.config import (
    MissingDefaultConfigError,
    find_config_file,
    get,
    load_defaults,
    replace_env_vars,
)

CONFIG_FILE = "tsaom.yml"


@pytest.fixture
def config_fixture_path(tmp_path: Path) -> Path:
    return tmp_path / CONFIG_FILE


class TestGet:
    @pytest.mark.parametrize(
        ("config_content", "key", "config_name", "env_var", "expected"),
        [
            ("default:\n  runs: 20\n  budget: 1000", "runs", None, None, 20),
            ("default:\n  runs: 20\n  budget: 1000", "seed", None, None, None),
            (
                "default:\n  runs: 20\n  budget: 1000\nquick:\n  budget: 10",
                "budget",
                "quick",
                None,
                10,
            ),
            (
                "default:\n  runs: 20\n  budget: 1000\nquick:\n  budget: 10",
                "budget",
                None,
                "quick",
                10,
            ),
            ("default: ~\nquick:\n  runs: 5", "runs", None, "quick", 5),
        ],
        ids=[
            "existing_value",
            "non_existing_value",
            "explicit_profile",
            "profile_from_environment",
            "null_default",
        ],
    )
    def test_get_scenarios(
        self,
        config_fixture_path,
        config_content,
        key,
        config_name,
        env_var,
        expected,
        monkeypatch,
    ):
        if env_var:
            monkeypatch.setenv("TSAOM_PROFILE", env_var)
        config_fixture_path.write_text(config_content)
        assert get(key, file=config_fixture_path, config=config_name) == expected

    def test_profile_is_merged_over_default(self, config_fixture_path):
        config_fixture_path.write_text("default:\n  a: 1\n  b: 2\nother:\n  b: 3\n")
        assert get(file=config_fixture_path, config="other") == {"a": 1, "b": 3}

    def test_missing_default_key(self, config_fixture_path):
        config_fixture_path.write_text("quick:\n  runs: 5\n")
        with pytest.raises(MissingDefaultConfigError):
            get(file=config_fixture_path)

    def test_non_mapping_file(self, config_fixture_path):
        config_fixture_path.write_text("- 1\n- 2\n")
        with pytest.raises(TypeError, match="dictionary"):
            get(file=config_fixture_path)

    def test_non_mapping_profile(self, config_fixture_path):
        config_fixture_path.write_text("default:\n  a: 1\nquick: 3\n")
        with pytest.raises(TypeError, match="quick"):
            get(file=config_fixture_path, config="quick")


class TestFindConfigFile:
    def test_absolute_path(self, config_fixture_path):
        config_fixture_path.write_text("default:\n  a: 1\n")
        assert find_config_file(config_fixture_path, use_parent=False) == config_fixture_path

    def test_missing_absolute_path(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            find_config_file(tmp_path / "missing.yml", use_parent=False)

    def test_searches_parent_directories(self, tmp_path, monkeypatch):
        (tmp_path / CONFIG_FILE).write_text("default:\n  a: 1\n")
        child = tmp_path / "a" / "b"
        child.mkdir(parents=True)
        monkeypatch.chdir(child)
        assert find_config_file(CONFIG_FILE, use_parent=True) == tmp_path / CONFIG_FILE
        with pytest.raises(FileNotFoundError):
            find_config_file(CONFIG_FILE, use_parent=False)


class TestReplaceEnvVars:
    @pytest.mark.parametrize(
        ("input_value", "env_vars", "expected"),
        [
            ("$RESULTS_DIR/fig6", {"RESULTS_DIR": "out"}, "out/fig6"),
            ("$A$B", {"A": "hello", "B": "world"}, "helloworld"),
            ("$SINGLE_VAR", {"SINGLE_VAR": "value"}, "value"),
            ("runs/$MISSING_VAR/x", {}, "runs//x"),
            ("plain", {}, "plain"),
        ],
    )
    def test_mixed_strings(self, input_value, env_vars, expected, monkeypatch):
        monkeypatch.delenv("MISSING_VAR", raising=False)
        for key, value in env_vars.items():
            monkeypatch.setenv(key, value)
        assert replace_env_vars({"key": input_value})["key"] == expected

    def test_nested(self, monkeypatch):
        monkeypatch.setenv("OUT", "results")
        data = {"out": "$OUT/a", "nested": {"x": ["$OUT", 3]}}
        assert replace_env_vars(data) == {"out": "results/a", "nested": {"x": ["results", 3]}}

    def test_missing_whole_variable_is_kept(self, monkeypatch):
        monkeypatch.delenv("MISSING_VAR", raising=False)
        assert replace_env_vars({"key": "$MISSING_VAR"})["key"] == "$MISSING_VAR"


class TestLoadDefaults:
    def test_sections(self):
        defaults = load_defaults()
        assert {"heuristics", "km", "solvers", "bench"} <= set(defaults)

    def test_heuristic_defaults(self):
        heuristics = load_defaults("heuristics")
        assert heuristics["budget"] == 300_000
        assert heuristics["sa"] == {"initial_temperature": 1.0, "cooling_rate": 0.999}
        assert heuristics["ga"]["population_size"] == 100
        assert heuristics["pbil"]["learning_rate"] == 0.1

    def test_bench_runtime_cap(self):
        assert load_defaults("bench")["runtime_cap"] == 100_000_000

    def test_quick_profile(self, monkeypatch):
        monkeypatch.setenv("TSAOM_PROFILE", "quick")
        assert load_defaults("heuristics")["budget"] == 10_000
        assert load_defaults("km")["m1_factor"] == 4
