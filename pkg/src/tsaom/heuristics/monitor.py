"""Budget accounting and best-so-far tracking for one search run."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict

from tsaom.gf2 import BitVec

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from tsaom.aom import CountingOracle
    from tsaom.heuristics.config import AlgorithmConfig


class SearchStopped(Exception):  # noqa: N818
    """Raised inside an algorithm when its run is over."""


class RunRecord(BaseModel):
    """Outcome of one search run.

    Attributes:
        best_value: Best value evaluated.
        best_point: A point with the best value, the first one evaluated.
        evaluations: Evaluations the run used.
        evaluations_to_best: Evaluation index (1-based) of ``best_point``.
        evaluations_to_optimum: Evaluation index of the first point with value
            ``n``, None if the run never evaluated one.
        trajectory: ``(evaluation index, best-so-far value)`` at every
            improvement, when recorded.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best_value: int
    best_point: BitVec
    evaluations: int
    evaluations_to_best: int
    evaluations_to_optimum: int | None = None
    trajectory: tuple[tuple[int, int], ...] | None = None


class SearchMonitor:
    """Evaluates points for an algorithm while keeping its books.

    Every evaluation goes through the counting oracle. When the budget is
    spent, or the optimum has been seen and the run should stop on it,
    :class:`SearchStopped` is raised. A batch is cut to the remaining budget;
    points of a batch after the first optimum are still evaluated.
    """

    def __init__(self, oracle: CountingOracle, config: AlgorithmConfig) -> None:
        self.oracle = oracle
        self.n = oracle.n
        self.stop_on_optimum = config.stop_on_optimum
        self.limit = config.budget
        if oracle.remaining is not None:
            self.limit = min(self.limit, oracle.remaining)
        self.used = 0
        self.best_value = -1
        self.best_point: NDArray[np.uint8] | None = None
        self.evaluations_to_best = 0
        self.evaluations_to_optimum: int | None = None
        self.trajectory: list[tuple[int, int]] | None = [] if config.record_trajectory else None

    @property
    def remaining(self) -> int:
        """Evaluations left for this run."""
        return self.limit - self.used

    def evaluate(self, x: NDArray[np.uint8]) -> int:
        """Value of a single point.

        Raises:
            SearchStopped: If no budget is left, or after recording the point
                when it is the optimum under ``stop_on_optimum``.
        """
        if self.remaining <= 0:
            raise SearchStopped
        value = self.oracle.evaluate_point(x)
        self.used += 1
        if value > self.best_value:
            if self.trajectory is not None:
                self.trajectory.append((self.used, value))
            self.best_value = value
            # algorithms flip their current point in place
            self.best_point = x.copy()
            self.evaluations_to_best = self.used
        if value == self.n and self.evaluations_to_optimum is None:
            self.evaluations_to_optimum = self.used
        if self.stop_on_optimum and self.evaluations_to_optimum is not None:
            raise SearchStopped
        return value

    def evaluate_batch(self, X: ArrayLike) -> NDArray[np.int64]:
        """Values of every row of ``X``.

        Raises:
            SearchStopped: If no budget is left, or after recording this batch
                when it was cut short or reached the optimum under
                ``stop_on_optimum``.
        """
        points = np.asarray(X, dtype=np.uint8)
        if self.remaining <= 0:
            raise SearchStopped
        truncated = points.shape[0] > self.remaining
        points = points[: self.remaining]
        values = np.asarray(self.oracle.evaluate_batch(points), dtype=np.int64)
        self._record(points, values)
        if truncated or (self.stop_on_optimum and self.evaluations_to_optimum is not None):
            raise SearchStopped
        return values

    def _record(self, points: NDArray[np.uint8], values: NDArray[np.int64]) -> None:
        start = self.used
        self.used += values.size
        if values.size == 0:
            return

        best = int(np.argmax(values))
        if values[best] > self.best_value:
            if self.trajectory is not None:
                running = np.maximum.accumulate(np.concatenate(([self.best_value], values)))
                self.trajectory.extend(
                    (start + int(k) + 1, int(running[k + 1]))
                    for k in np.flatnonzero(running[1:] > running[:-1])
                )
            self.best_value = int(values[best])
            self.best_point = points[best].copy()
            self.evaluations_to_best = start + best + 1

        if self.evaluations_to_optimum is None:
            hits = np.flatnonzero(values == self.n)
            if hits.size:
                self.evaluations_to_optimum = start + int(hits[0]) + 1

    def record(self) -> RunRecord:
        """The run record so far.

        Raises:
            ValueError: If nothing was evaluated yet.
        """
        if self.best_point is None:
            msg = "No point has been evaluated."
            raise ValueError(msg)
        return RunRecord(
            best_value=self.best_value,
            best_point=BitVec(self.best_point),
            evaluations=self.used,
            evaluations_to_best=self.evaluations_to_best,
            evaluations_to_optimum=self.evaluations_to_optimum,
            trajectory=None if self.trajectory is None else tuple(self.trajectory),
        )
