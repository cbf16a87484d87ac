from pathlib import Path

import numpy as np
import pytest

collect_ignore_glob = ["assets/**"]
pytest_plugins = []


@pytest.fixture(scope="session")
def assets_dir() -> Path:
    """Return a path to the test assets directory."""
    return Path(__file__).parent / "assets"


@pytest.fixture
def rng() -> np.random.Generator:
    """A generator with a fixed seed, fresh for every test."""
    return np.random.default_rng(20240607)


@pytest.fixture(autouse=True)
def _default_profile(monkeypatch):
    """Tests read the packaged defaults, whatever profile the shell selects."""
    monkeypatch.delenv("TSAOM_PROFILE", raising=False)
