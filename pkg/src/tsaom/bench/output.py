"""Result files of an experiment.

For an experiment named ``name`` the output directory receives:

- ``name.csv``: one row per run, the contract other tools read.
- ``name_summary.csv``: mean, median and standard deviation per cell and algorithm.
- ``name_paired.csv``: the summary with one column per class (class comparisons).
- ``name_trajectories.csv`` and ``name_ecdf.csv``: when trajectories were recorded.
- ``name.meta.yml``: spec, seeds, algorithm parameters, defaults and versions.
- ``name_plot.py``: a matplotlib script drawing the summary.

Nothing time-dependent is written, so rerunning a spec reproduces every file.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import yaml

from tsaom import __version__
from tsaom.bench.ecdf import ecdf
from tsaom.bench.spec import ExperimentKind
from tsaom.config import load_defaults

if TYPE_CHECKING:
    import pandas as pd

    from tsaom.bench.experiments import ResultTable
    from tsaom.bench.spec import ExperimentSpec

logger = logging.getLogger(__name__)

_SUMMARY_PLOT = '''\
"""Mean {ylabel} per algorithm with a one standard deviation band."""

from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

here = Path(__file__).parent
summary = pd.read_csv(here / "{summary}")
several_classes = summary["function_class"].nunique() > 1

fig, ax = plt.subplots(figsize=(7, 4.5))
for (algorithm, function_class), group in summary.groupby(
    ["algorithm", "function_class"], sort=False
):
    group = group.sort_values("{x}")
    label = f"{{algorithm}} ({{function_class}})" if several_classes else algorithm
    std = group["std"].fillna(0)
    ax.plot(group["{x}"], group["mean"], marker="o", label=label)
    ax.fill_between(group["{x}"], group["mean"] - std, group["mean"] + std, alpha=0.2)
ax.set_xlabel("{x}")
ax.set_ylabel("{ylabel}")
ax.set_yscale("{yscale}")
ax.legend()
fig.tight_layout()
fig.savefig(here / "{stem}.pdf")
'''

_ECDF_PLOT = '''\
"""ECDF of target hits per algorithm."""

from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

here = Path(__file__).parent
curves = pd.read_csv(here / "{ecdf}")

fig, ax = plt.subplots(figsize=(7, 4.5))
for algorithm, group in curves.groupby("algorithm", sort=False):
    ax.step(group["evaluations"], group["fraction"], where="post", label=algorithm)
ax.set_xscale("log")
ax.set_xlabel("evaluations")
ax.set_ylabel("fraction of (run, target) pairs")
ax.set_ylim(0, 1)
ax.legend()
fig.tight_layout()
fig.savefig(here / "{stem}.pdf")
'''


def _write_csv(df: pd.DataFrame, path: Path) -> Path:
    df.to_csv(path, index=False, lineterminator="\n")
    return path


def metadata(table: ResultTable, spec: ExperimentSpec) -> dict[str, Any]:
    """Everything needed to rerun the experiment and read its results."""
    return {
        "name": spec.name,
        "tsaom_version": __version__,
        "numpy_version": np.__version__,
        "rows": len(table),
        "metric": table.metric,
        "seeds": {
            "seed": spec.seed,
            "instance_spawn_key": "(cell, 0, 0, instance)",
            "run_spawn_key": "(cell, 1, algorithm, run)",
        },
        "spec": spec.model_dump(mode="json"),
        "cells": [cell.model_dump() for cell in spec.cells()],
        "algorithms": [
            {"label": label, **config.parameters()}
            for label, config in zip(spec.labels(), spec.configs(), strict=True)
        ],
        "defaults": load_defaults(),
    }


def plot_script(table: ResultTable, spec: ExperimentSpec) -> str:
    """Text of the plot script for the experiment's outputs."""
    if table.trajectories is not None and spec.experiment is ExperimentKind.ECDF:
        return _ECDF_PLOT.format(ecdf=f"{spec.name}_ecdf.csv", stem=spec.name)
    x = "t" if table.rows["t"].nunique() > 1 else "n"
    runtime = table.metric == "runtime"
    return _SUMMARY_PLOT.format(
        summary=f"{spec.name}_summary.csv",
        x=x,
        ylabel="evaluations to the optimum" if runtime else "best value",
        yscale="log" if runtime else "linear",
        stem=spec.name,
    )


def write_outputs(table: ResultTable, spec: ExperimentSpec, out_dir: str | Path) -> dict[str, Path]:
    """Write the result files of an experiment.

    Args:
        table: The results.
        spec: The spec that produced them.
        out_dir: Directory to write into; created if missing.

    Returns:
        The written paths by kind: ``rows``, ``summary``, ``metadata``,
        ``plot`` and, when present, ``paired``, ``trajectories`` and ``ecdf``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = spec.name

    paths = {
        "rows": _write_csv(table.rows, out / f"{name}.csv"),
        "summary": _write_csv(table.summary(), out / f"{name}_summary.csv"),
    }
    if spec.experiment is ExperimentKind.CLASS_COMPARISON:
        paths["paired"] = _write_csv(table.paired(), out / f"{name}_paired.csv")
    if table.trajectories is not None:
        paths["trajectories"] = _write_csv(table.trajectories, out / f"{name}_trajectories.csv")
        paths["ecdf"] = _write_csv(ecdf(table, spec.targets), out / f"{name}_ecdf.csv")

    paths["metadata"] = out / f"{name}.meta.yml"
    paths["metadata"].write_text(
        yaml.safe_dump(metadata(table, spec), sort_keys=False), encoding="utf-8"
    )
    paths["plot"] = out / f"{name}_plot.py"
    paths["plot"].write_text(plot_script(table, spec), encoding="utf-8")

    logger.info(f"Wrote {len(paths)} result files for '{name}' to '{out}'.")
    return paths
