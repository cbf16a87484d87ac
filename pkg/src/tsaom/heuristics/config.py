"""Algorithm kinds and their parameters.

Parameters default to the ``heuristics`` section of the packaged defaults
(see :func:`tsaom.config.load_defaults`) and can be overridden from the
command line or from a plain ``key = value`` run file.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from tsaom.base import match_enum
from tsaom.config import load_defaults
from tsaom.errors import InvalidSpecError


class AlgorithmKind(str, Enum):
    """The search algorithms of the benchmark."""

    RS = "rs"
    RLS = "rls"
    HC = "hc"
    SA = "sa"
    EA = "ea"
    EA10 = "ea10"
    GA = "ga"
    UMDA = "umda"
    PBIL = "pbil"

    def __str__(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        """Name used in tables and plots."""
        return _LABELS[self]


_LABELS = {
    AlgorithmKind.RS: "RS",
    AlgorithmKind.RLS: "RLS",
    AlgorithmKind.HC: "HC",
    AlgorithmKind.SA: "SA",
    AlgorithmKind.EA: "(1+1) EA",
    AlgorithmKind.EA10: "(10+1) EA",
    AlgorithmKind.GA: "GA",
    AlgorithmKind.UMDA: "UMDA",
    AlgorithmKind.PBIL: "PBIL",
}

# Section of the packaged defaults holding the parameters of each kind.
_DEFAULTS_SECTION = {
    AlgorithmKind.RS: "rs",
    AlgorithmKind.SA: "sa",
    AlgorithmKind.EA: "ea",
    AlgorithmKind.EA10: "ea",
    AlgorithmKind.GA: "ga",
    AlgorithmKind.UMDA: "umda",
    AlgorithmKind.PBIL: "pbil",
}

_DEFAULT_POPULATION = {
    AlgorithmKind.EA10: 10,
    AlgorithmKind.GA: 100,
    AlgorithmKind.UMDA: 100,
    AlgorithmKind.PBIL: 100,
}


class AlgorithmConfig(BaseModel):
    """Parameters of one search algorithm.

    Fields that a kind does not use are ignored by it.

    Attributes:
        kind: The algorithm.
        budget: Maximum number of evaluations.
        stop_on_optimum: Halt as soon as the value ``n`` is observed.
        record_trajectory: Keep the best-so-far value after every improvement.
        population_size: Population of the EA, GA, UMDA and PBIL; None picks
            the kind's usual size.
        mutation_rate: Per-bit flip probability; None means ``1/n``.
        crossover_rate: Probability that a GA child is produced by uniform crossover.
        tournament_size: Contenders per GA tournament.
        elitism: Best GA individuals copied into the next generation.
        selection_size: Individuals UMDA fits its marginals to; None means
            half the population, rounded up.
        learning_rate: PBIL step towards the best sample.
        initial_temperature: SA starting temperature.
        cooling_rate: SA geometric cooling factor per proposal.
        batch_size: RS samples evaluated per batch.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: AlgorithmKind
    budget: PositiveInt
    stop_on_optimum: bool = False
    record_trajectory: bool = False
    population_size: PositiveInt | None = None
    mutation_rate: float | None = Field(default=None, ge=0, le=1)
    crossover_rate: float = Field(default=0.8, ge=0, le=1)
    tournament_size: PositiveInt = 2
    elitism: NonNegativeInt = 1
    selection_size: PositiveInt | None = None
    learning_rate: float = Field(default=0.1, ge=0, le=1)
    initial_temperature: PositiveFloat = 1.0
    cooling_rate: float = Field(default=0.999, gt=0, le=1)
    batch_size: PositiveInt = 4096

    @model_validator(mode="after")
    def _check_population(self) -> AlgorithmConfig:
        if self.kind is AlgorithmKind.GA and self.elitism >= self.population:
            msg = (
                f"GA elitism ({self.elitism}) must be below "
                f"the population size ({self.population})."
            )
            raise ValueError(msg)
        if (
            self.kind is AlgorithmKind.UMDA
            and self.selection_size is not None
            and self.selection_size > self.population
        ):
            msg = "UMDA cannot select more individuals than it samples."
            raise ValueError(msg)
        return self

    @property
    def population(self) -> int:
        """Effective population size."""
        if self.population_size is not None:
            return self.population_size
        return _DEFAULT_POPULATION.get(self.kind, 1)

    @property
    def selected(self) -> int:
        """Effective UMDA selection size."""
        if self.selection_size is not None:
            return self.selection_size
        return math.ceil(self.population / 2)

    def rate(self, n: int) -> float:
        """Effective mutation rate at dimension ``n``."""
        return 1 / n if self.mutation_rate is None else self.mutation_rate

    @classmethod
    def for_kind(
        cls, kind: AlgorithmKind | str, budget: int | None = None, **overrides: Any
    ) -> AlgorithmConfig:
        """Configuration of ``kind`` filled from the packaged defaults.

        Args:
            kind: The algorithm, or a unique prefix of its name.
            budget: Evaluation budget; None takes the default budget.
            **overrides: Field values that replace the defaults.

        Raises:
            pydantic.ValidationError: If a value is out of range or unknown.
        """
        kind = match_enum(kind, AlgorithmKind)
        defaults = load_defaults("heuristics")
        values: dict[str, Any] = {
            "kind": kind,
            "budget": defaults["budget"] if budget is None else budget,
            "stop_on_optimum": defaults["stop_on_optimum"],
            "record_trajectory": defaults["record_trajectory"],
        }
        if (section := _DEFAULTS_SECTION.get(kind)) is not None:
            values.update(defaults.get(section) or {})
        if kind is AlgorithmKind.EA:
            values.pop("population_size", None)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def parameters(self) -> dict[str, Any]:
        """Plain-data parameters, as recorded in result metadata."""
        return self.model_dump(mode="json")


def parse_run_file(text: str) -> AlgorithmConfig:
    """Parse a run file: ``key = value`` lines, ``#`` starts a comment.

    ``kind`` is required; every other key is a field of
    :class:`AlgorithmConfig` and missing ones take the defaults.

    Raises:
        InvalidSpecError: If a line is malformed, ``kind`` is missing or a value
            is invalid.

    Examples:
        >>> parse_run_file("kind = ga\\nbudget = 1000  # short run\\n").population
        100
    """
    values: dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            msg = f"Line {number} of the run file is not of the form 'key = value': {raw!r}."
            raise InvalidSpecError(msg)
        values[key.strip()] = yaml.safe_load(value.strip()) if value.strip() else None

    if "kind" not in values:
        msg = "The run file does not name an algorithm 'kind'."
        raise InvalidSpecError(msg)

    kind = values.pop("kind")
    budget = values.pop("budget", None)
    try:
        return AlgorithmConfig.for_kind(str(kind), budget, **values)
    except ValueError as err:
        msg = f"Invalid run file: {err}"
        raise InvalidSpecError(msg) from err
