"""Running experiments: the grid of cells, algorithms and runs.

Every run is a pure function of the experiment seed and its position. The
function of a run is sampled from the spawn key ``(cell, 0, 0, instance)``
and the algorithm draws from ``(cell, 1, algorithm, run)``, so all
algorithms of a cell meet the same functions and results do not depend on
how runs are scheduled over worker processes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
import pandas as pd
from tqdm import tqdm

from tsaom.aom import CountingOracle, sample_function
from tsaom.bench.spec import Cell, ExperimentKind, ExperimentSpec
from tsaom.errors import InvalidSpecError
from tsaom.heuristics import AlgorithmConfig, run

logger = logging.getLogger(__name__)

CELL_COLUMNS = ["n", "function_class", "t"]
GROUP_COLUMNS = [*CELL_COLUMNS, "algorithm"]
INSTANCE_STREAM = 0
ALGORITHM_STREAM = 1


@dataclass
class ResultTable:
    """Raw rows of an experiment and their aggregates.

    Attributes:
        experiment: The kind of experiment that produced the rows.
        metric: Column summarized by :meth:`summary`.
        rows: One row per (cell, algorithm, run), in that order.
        trajectories: Long table of best-so-far values, when recorded.
    """

    experiment: ExperimentKind
    metric: str
    rows: pd.DataFrame
    trajectories: pd.DataFrame | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def summary(self) -> pd.DataFrame:
        """Mean, median and standard deviation of the metric per cell and algorithm.

        Capped runs enter the aggregates with the cap as their runtime.
        """
        grouped = self.rows.groupby(GROUP_COLUMNS, sort=False)[self.metric]
        summary = grouped.agg(["count", "mean", "median", "std"]).reset_index()
        summary = summary.rename(columns={"count": "runs"})
        summary["capped"] = self.rows.groupby(GROUP_COLUMNS, sort=False)["capped"].sum().to_numpy()
        return summary

    def paired(self) -> pd.DataFrame:
        """Summary with one column per function class, for class comparisons."""
        summary = self.summary()
        wide = summary.pivot_table(
            index=["n", "t", "algorithm"],
            columns="function_class",
            values=["mean", "median", "std"],
            sort=False,
        )
        wide.columns = [f"{stat}_{function_class}" for stat, function_class in wide.columns]
        return wide.reset_index()


@dataclass(frozen=True)
class _RunTask:
    cell: Cell
    algorithm_index: int
    label: str
    config: AlgorithmConfig
    run: int
    instance: int
    seed: int
    runtime: bool


def _generator(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn_key))


def _execute(task: _RunTask) -> tuple[dict[str, Any], tuple[tuple[int, int], ...] | None]:
    cell = task.cell
    function = sample_function(
        cell.n,
        cell.function_class,
        cell.t,
        _generator(task.seed, cell.index, INSTANCE_STREAM, 0, task.instance),
    )
    rng = _generator(task.seed, cell.index, ALGORITHM_STREAM, task.algorithm_index, task.run)
    record = run(task.config, CountingOracle(function), rng)

    capped = task.runtime and record.evaluations_to_optimum is None
    runtime = record.evaluations_to_optimum
    if capped:
        runtime = task.config.budget
    row = {
        "n": cell.n,
        "function_class": cell.function_class,
        "t": cell.t,
        "algorithm": task.label,
        "kind": str(task.config.kind),
        "run": task.run,
        "instance": task.instance,
        "best_value": record.best_value,
        "evaluations": record.evaluations,
        "evaluations_to_best": record.evaluations_to_best,
        "evaluations_to_optimum": record.evaluations_to_optimum,
        "runtime": runtime,
        "capped": capped,
    }
    return row, record.trajectory


def _tasks(spec: ExperimentSpec, *, runtime: bool) -> list[_RunTask]:
    configs = spec.configs(runtime=runtime)
    labels = spec.labels()
    tasks = []
    for cell in spec.cells():
        for algorithm_index, (label, config) in enumerate(zip(labels, configs, strict=True)):
            for run_index in range(spec.runs):
                instance = run_index
                if spec.instance_policy == "shared":
                    instance = run_index % spec.instances
                tasks.append(
                    _RunTask(
                        cell=cell,
                        algorithm_index=algorithm_index,
                        label=label,
                        config=config,
                        run=run_index,
                        instance=instance,
                        seed=spec.seed,
                        runtime=runtime,
                    )
                )
    return tasks


def _run_tasks(
    spec: ExperimentSpec, *, runtime: bool, metric: str, progress: bool
) -> ResultTable:
    tasks = _tasks(spec, runtime=runtime)
    logger.info(
        f"Running '{spec.name}': {len(tasks)} runs over {len(spec.cells())} cells "
        f"with {spec.workers} worker(s)."
    )

    bar = tqdm(total=len(tasks), desc=spec.name, unit="run", disable=not progress)
    if spec.workers == 1:
        results = []
        for task in tasks:
            results.append(_execute(task))
            bar.update()
    else:
        # map keeps submission order, so the reduce below is scheduling-independent.
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            results = []
            chunksize = max(1, len(tasks) // (4 * spec.workers))
            for result in executor.map(_execute, tasks, chunksize=chunksize):
                results.append(result)
                bar.update()
    bar.close()

    rows = pd.DataFrame([row for row, _ in results])
    rows["evaluations_to_optimum"] = rows["evaluations_to_optimum"].astype("Int64")
    rows["runtime"] = rows["runtime"].astype("Int64")

    capped = rows[rows["capped"]]
    if not capped.empty:
        logger.warning(
            f"{len(capped)} of {len(rows)} runs hit the runtime cap of {spec.runtime_cap} "
            "evaluations; they are reported with the cap as their runtime."
        )

    trajectories = None
    if spec.trajectories:
        trajectories = pd.DataFrame(
            [
                {
                    **{key: row[key] for key in [*GROUP_COLUMNS, "run"]},
                    "evaluation": at,
                    "best_value": best,
                }
                for row, trajectory in results
                for at, best in trajectory or ()
            ],
            columns=[*GROUP_COLUMNS, "run", "evaluation", "best_value"],
        )
    return ResultTable(
        experiment=spec.experiment, metric=metric, rows=rows, trajectories=trajectories
    )


def fixed_budget(spec: ExperimentSpec, *, progress: bool = False) -> ResultTable:
    """Best value reached within the budget, for every cell, algorithm and run.

    Raises:
        SequenceLengthError: If a cell's length is out of range for its class.
    """
    return _run_tasks(spec, runtime=False, metric="best_value", progress=progress)


def runtime_curve(spec: ExperimentSpec, *, progress: bool = False) -> ResultTable:
    """Evaluations until the optimum is first evaluated, for every cell, algorithm and run.

    Runs stop on the optimum. A run that reaches ``runtime_cap`` evaluations
    without it is flagged ``capped`` and reported with the cap as its runtime.

    Raises:
        SequenceLengthError: If a cell's length is out of range for its class.
    """
    return _run_tasks(spec, runtime=True, metric="runtime", progress=progress)


def class_comparison(spec: ExperimentSpec, *, progress: bool = False) -> ResultTable:
    """Runtime curves of two function classes on the same grid.

    Raises:
        InvalidSpecError: If the spec does not name exactly two classes.
    """
    if len(spec.classes) != 2:
        msg = f"A class comparison needs exactly two classes, got {list(spec.classes)}."
        raise InvalidSpecError(msg)
    return _run_tasks(spec, runtime=True, metric="runtime", progress=progress)


def run_experiment(spec: ExperimentSpec, *, progress: bool = False) -> ResultTable:
    """Run the experiment the spec describes."""
    match spec.experiment:
        case ExperimentKind.FIXED_BUDGET | ExperimentKind.ECDF:
            return fixed_budget(spec, progress=progress)
        case ExperimentKind.RUNTIME_CURVE:
            return runtime_curve(spec, progress=progress)
        case ExperimentKind.CLASS_COMPARISON:
            return class_comparison(spec, progress=progress)
