"""Experiment specifications.

An experiment spec file is YAML with a ``default`` section and optional
profiles, read through :func:`tsaom.config.get`::

    default:
      experiment: runtime_curve
      n: 11
      classes: [unconstrained]
      t_values: [0, 5, 10, 20, 40, 80, 160]
      algorithms: [ea]
      runs: 100
      seed: 1
    quick:
      runs: 10

Missing ``runs``, ``runtime_cap`` and ``workers`` come from the ``bench``
section of the packaged defaults.
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    field_validator,
    model_validator,
)

from tsaom import config
from tsaom.aom import CLASS_CHOICES, GENERAL
from tsaom.base import match_arg
from tsaom.errors import InvalidSpecError
from tsaom.heuristics import AlgorithmConfig
from tsaom.transvections import TransvectionClass, check_length, max_length

MAX_TOKEN = "max"


class ExperimentKind(str, Enum):
    """What an experiment measures."""

    FIXED_BUDGET = "fixed_budget"
    RUNTIME_CURVE = "runtime_curve"
    CLASS_COMPARISON = "class_comparison"
    ECDF = "ecdf"

    def __str__(self) -> str:
        return self.value

    @property
    def measures_runtime(self) -> bool:
        """Whether runs stop on the optimum and report the evaluations to reach it."""
        return self in {ExperimentKind.RUNTIME_CURVE, ExperimentKind.CLASS_COMPARISON}


class Cell(BaseModel):
    """One point of the experiment grid."""

    model_config = ConfigDict(frozen=True)

    index: int
    n: int
    function_class: str
    t: int


class ExperimentSpec(BaseModel):
    """Protocol of one experiment.

    Attributes:
        name: Stem of the output files.
        experiment: What is measured.
        n: Dimensions of the grid.
        classes: Function classes, ``general`` or a transvection class.
        t_values: Sequence lengths; ``max`` is the largest admissible length
            of the class at each ``n``. Ignored for ``general``.
        algorithms: Algorithm names, or mappings with a ``kind`` and
            parameter overrides.
        runs: Independent runs per cell and algorithm.
        budget: Evaluations per run of fixed-budget experiments; None takes
            the heuristics default.
        seed: Fixes the whole experiment.
        instance_policy: ``fresh`` samples a function per run index, ``shared``
            reuses ``instances`` functions per cell.
        instances: Functions per cell under the shared policy.
        targets: ECDF target values; None means every value from ``n/2`` to ``n``.
        runtime_cap: Evaluations after which a runtime run is stopped and
            reported as capped.
        workers: Worker processes; 1 runs everything in this process.
        record_trajectory: Keep best-so-far trajectories (always on for ECDF).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    experiment: ExperimentKind = ExperimentKind.FIXED_BUDGET
    n: tuple[PositiveInt, ...]
    classes: tuple[str, ...] = (GENERAL,)
    t_values: tuple[NonNegativeInt | Literal["max"], ...] = (0,)
    algorithms: tuple[str | dict[str, Any], ...] = Field(min_length=1)
    runs: PositiveInt = 20
    budget: PositiveInt | None = None
    seed: NonNegativeInt = 0
    instance_policy: Literal["fresh", "shared"] = "fresh"
    instances: PositiveInt = 1
    targets: tuple[int, ...] | None = None
    runtime_cap: PositiveInt = 100_000_000
    workers: PositiveInt = 1
    record_trajectory: bool = False

    @field_validator("n", "t_values", "classes", "targets", mode="before")
    @classmethod
    def _as_sequence(cls, value: Any) -> Any:
        if isinstance(value, int | str):
            return (value,)
        return value

    @field_validator("classes")
    @classmethod
    def _match_classes(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(match_arg(name, CLASS_CHOICES) for name in value)

    @model_validator(mode="after")
    def _check_protocol(self) -> ExperimentSpec:
        if self.experiment is ExperimentKind.CLASS_COMPARISON and len(self.classes) != 2:
            msg = f"A class comparison needs exactly two classes, got {list(self.classes)}."
            raise ValueError(msg)
        self.configs()
        return self

    @property
    def trajectories(self) -> bool:
        """Whether runs record their trajectories."""
        return self.record_trajectory or self.experiment is ExperimentKind.ECDF

    def configs(self, *, runtime: bool | None = None) -> list[AlgorithmConfig]:
        """The algorithm configurations of the experiment.

        Args:
            runtime: Configure for runtime measurement (stop on the optimum,
                budget = ``runtime_cap``); None follows the experiment kind.
        """
        if runtime is None:
            runtime = self.experiment.measures_runtime
        budget = self.runtime_cap if runtime else self.budget
        configs = []
        for entry in self.algorithms:
            overrides = {"kind": entry} if isinstance(entry, str) else dict(entry)
            kind = overrides.pop("kind")
            entry_budget = overrides.pop("budget", None)
            run_budget = budget if runtime or entry_budget is None else entry_budget
            if runtime:
                overrides["stop_on_optimum"] = True
            if self.trajectories:
                overrides["record_trajectory"] = True
            configs.append(AlgorithmConfig.for_kind(kind, run_budget, **overrides))
        return configs

    def labels(self) -> list[str]:
        """Algorithm names for the result table, numbered when a kind repeats."""
        labels = [algorithm.kind.label for algorithm in self.configs()]
        return [
            label if labels.count(label) == 1 else f"{label} #{labels[: k + 1].count(label)}"
            for k, label in enumerate(labels)
        ]

    def cells(self) -> list[Cell]:
        """The grid ``n x classes x t`` in spec order, ``max`` resolved.

        A ``general`` cell has ``t = 0`` and appears once per ``n``.

        Raises:
            SequenceLengthError: If a length is out of range for its class.
        """
        cells: list[Cell] = []
        seen: set[tuple[int, str, int]] = set()
        for n in self.n:
            for function_class in self.classes:
                for t in self.t_values:
                    length = _resolve_length(n, function_class, t)
                    key = (n, function_class, length)
                    if key in seen:
                        continue
                    seen.add(key)
                    cells.append(
                        Cell(index=len(cells), n=n, function_class=function_class, t=length)
                    )
        return cells


def _resolve_length(n: int, function_class: str, t: int | str) -> int:
    if function_class == GENERAL:
        return 0
    tag = TransvectionClass(function_class)
    if t == MAX_TOKEN:
        limit = max_length(n, tag)
        if limit is None:
            msg = f"Class '{tag}' has no largest length; give t explicitly."
            raise InvalidSpecError(msg)
        return limit
    check_length(n, int(t), tag)
    return int(t)


def load_experiment_spec(path: str | Path, profile: str | None = None) -> ExperimentSpec:
    """Read an experiment spec file.

    Args:
        path: The YAML file.
        profile: Profile merged over ``default``; None follows ``TSAOM_PROFILE``.

    Raises:
        InvalidSpecError: If the file does not describe a valid experiment.
        FileNotFoundError: If the file does not exist.
    """
    path = Path(path)
    data = config.get(config=profile, file=path.resolve(), use_parent=False)
    values = {"name": path.stem, **config.load_defaults("bench"), **data}
    try:
        return ExperimentSpec(**values)
    except ValueError as err:
        msg = f"Invalid experiment spec '{path}': {err}"
        raise InvalidSpecError(msg) from err
