"""Empirical cumulative distribution of target hits over evaluations."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from tsaom.bench.experiments import GROUP_COLUMNS, ResultTable

if TYPE_CHECKING:
    from collections.abc import Sequence

ECDF_COLUMNS = [*GROUP_COLUMNS, "evaluations", "fraction"]


def default_targets(n: int) -> list[int]:
    """Every value from ``n/2`` (rounded down) to ``n``."""
    return list(range(n // 2, n + 1))


def ecdf(results: ResultTable | pd.DataFrame, targets: Sequence[int] | None = None) -> pd.DataFrame:
    """Fraction of (run, target) pairs reached as a function of the evaluations.

    A run reaches a target at the first evaluation whose best-so-far value is
    at least the target. Curves are computed per cell and algorithm; each is a
    step function given by its jump points; a curve without any hit is left out.

    Args:
        results: A result table with trajectories, or a trajectory table with
            the columns ``n, function_class, t, algorithm, run, evaluation,
            best_value``.
        targets: Target values; None uses :func:`default_targets` per ``n``.

    Returns:
        Rows ``(n, function_class, t, algorithm, evaluations, fraction)``, with
        ``fraction`` non-decreasing in ``evaluations`` within each curve.

    Raises:
        ValueError: If no trajectories were recorded.
    """
    trajectories = results.trajectories if isinstance(results, ResultTable) else results
    if trajectories is None:
        msg = "The ECDF needs recorded trajectories; run the experiment with record_trajectory."
        raise ValueError(msg)

    curves = []
    for keys, group in trajectories.groupby(GROUP_COLUMNS, sort=False):
        n = int(keys[0])
        levels = sorted(targets) if targets is not None else default_targets(n)
        hits: list[int] = []
        runs = group.groupby("run", sort=False)
        for _, path in runs:
            values = path["best_value"].to_numpy()
            at = path["evaluation"].to_numpy()
            # Best-so-far values of a trajectory are strictly increasing.
            positions = np.searchsorted(values, levels, side="left")
            hits.extend(at[positions[positions < values.size]].tolist())

        evaluations, counts = np.unique(np.asarray(hits, dtype=np.int64), return_counts=True)
        curve = pd.DataFrame(
            {
                "evaluations": evaluations,
                "fraction": np.cumsum(counts) / (runs.ngroups * len(levels)),
            }
        )
        for column, value in zip(GROUP_COLUMNS, keys, strict=True):
            curve.insert(len(curve.columns) - 2, column, value)
        if not curve.empty:
            curves.append(curve)

    if not curves:
        return pd.DataFrame(columns=ECDF_COLUMNS)
    return pd.concat(curves, ignore_index=True)[ECDF_COLUMNS]
