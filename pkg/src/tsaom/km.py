"""Kushilevitz-Mansour learning and maximization of AOM functions.

The learner searches the binary tree of prefixes depth first. A prefix ``u``
is expanded when the energy ``E(g_u^2)`` of the restriction of
``g = 2f/n - 1`` exceeds a threshold (``1/(2n^2)`` by default). For an AOM
function this energy is either 0 or at least ``1/n^2``, and the leaves that
survive are exactly the rows of ``M``. The sign of the coefficient of
``h = 2f - n`` at each row then reveals ``b``, and the optimum follows as
``M^-1 (1^n + b)``.

Two modes are available:

- ``sampled`` estimates every energy and sign from fresh uniform samples.
- ``exact`` tabulates the oracle once (``2**n`` evaluations) and computes
  every quantity exactly, which makes the search deterministic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from tsaom.config import load_defaults
from tsaom.errors import NotFoundError, SingularMatrixError
from tsaom.gf2 import (
    BitMat,
    BitVec,
    all_points,
    complement,
    concat_bits,
    concat_points,
    invert,
    mat_vec,
    prefix_range,
    to_index,
)
from tsaom.spectrum import (
    MAX_RESTRICTED_DIMENSION,
    characters,
    g_normalize,
    h_normalize,
    walsh_coefficients,
)

if TYPE_CHECKING:
    from tsaom.aom import CountingOracle, Evaluator

logger = logging.getLogger(__name__)

KmMode = Literal["sampled", "exact"]


class KmParams(BaseModel):
    """Sample sizes and threshold of the learner.

    Attributes:
        m1: Number of suffixes averaged in an energy estimate.
        m2: Number of prefixes averaged in each inner coefficient estimate.
        m3: Number of points averaged in a sign estimate.
        delta: Failure probability the sample sizes were chosen for.
        threshold: Energy above which a prefix is expanded.
        mode: ``sampled`` or ``exact``.
    """

    model_config = ConfigDict(frozen=True)

    m1: PositiveInt
    m2: PositiveInt
    m3: PositiveInt
    delta: float = Field(default=0.5, gt=0, lt=1)
    threshold: float = Field(gt=0)
    mode: KmMode = "sampled"

    @model_validator(mode="after")
    def _threshold_is_finite(self) -> KmParams:
        if not math.isfinite(self.threshold):
            msg = "The threshold must be finite."
            raise ValueError(msg)
        return self


def default_threshold(n: int) -> float:
    """The expansion threshold ``1/(2n^2)``."""
    return 1 / (2 * n * n)


def theoretical_params(n: int, delta: float) -> KmParams:
    """Sample sizes that make one run succeed with probability at least ``1 - delta``.

    ``m1 = ceil(8 n^4 ln(8 n^2 / delta))``,
    ``m2 = ceil(128 n^4 ln(8 n^2 m1 / delta))`` and
    ``m3 = ceil(2 n^2 ln(4 n / delta))``.
    """
    if n < 2:
        msg = f"The learner needs n >= 2, got {n}."
        raise ValueError(msg)
    m1 = math.ceil(8 * n**4 * math.log(8 * n**2 / delta))
    m2 = math.ceil(128 * n**4 * math.log(8 * n**2 * m1 / delta))
    m3 = math.ceil(2 * n**2 * math.log(4 * n / delta))
    return KmParams(m1=m1, m2=m2, m3=m3, delta=delta, threshold=default_threshold(n))


def practical_params(n: int, **overrides: float) -> KmParams:
    """Desk-scale sample sizes ``m1 = 4n^2``, ``m2 = 16n^2`` and ``m3 = 8n^2``.

    The factors and ``delta`` come from the ``km`` section of the packaged
    defaults; keyword arguments override single fields.
    """
    defaults = load_defaults("km")
    values = {
        "m1": int(defaults["m1_factor"]) * n * n,
        "m2": int(defaults["m2_factor"]) * n * n,
        "m3": int(defaults["m3_factor"]) * n * n,
        "delta": float(defaults["delta"]),
        "threshold": default_threshold(n),
    }
    return KmParams(**{**values, **overrides})


def exact_params(n: int) -> KmParams:
    """Exact mode: sample sizes are unused, every expectation is computed exactly."""
    return KmParams(m1=1, m2=1, m3=1, threshold=default_threshold(n), mode="exact")


PRESETS = ("theoretical", "practical", "exact")


def preset_params(name: str, n: int, delta: float = 0.5) -> KmParams:
    """Parameters of a named preset: ``theoretical``, ``practical`` or ``exact``."""
    match name:
        case "theoretical":
            return theoretical_params(n, delta)
        case "practical":
            return practical_params(n, delta=delta)
        case "exact":
            return exact_params(n)
    msg = f"Unknown preset '{name}', expected one of {PRESETS}."
    raise ValueError(msg)


@dataclass
class KmStats:
    """Node counters of one tree search."""

    visited_nodes: int = 0
    expanded_nodes: int = 0


class KmReport(BaseModel):
    """Outcome of one learning attempt.

    Attributes:
        features: Recovered feature vectors, in the order the search found them.
        b_hat: Estimated translation, one bit per feature.
        candidate: ``M_hat^-1 (1^n + b_hat)``, absent when no candidate could be built.
        value: Oracle value of the candidate.
        evaluations_used: Oracle evaluations spent, the final check included.
        success: Whether the candidate reaches the maximum ``n``.
        expanded_nodes: Internal nodes of the prefix tree that were expanded.
        visited_nodes: Nodes whose energy was computed.
        diagnostic: Why the attempt failed, if it did.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    features: tuple[BitVec, ...]
    b_hat: BitVec | None = None
    candidate: BitVec | None = None
    value: int | None = None
    evaluations_used: int
    success: bool
    expanded_nodes: int = 0
    visited_nodes: int = 0
    diagnostic: str | None = None


def estimate_coefficient_inner(
    g: Evaluator, u: BitVec, x: BitVec, m2: int, rng: np.random.Generator
) -> float:
    """Estimate ``g_u(x) = E_y[g(yx) (-1)^(y.u)]`` from ``m2`` uniform prefixes ``y``."""
    prefixes = rng.integers(0, 2, size=(m2, u.n), dtype=np.uint8)
    values = np.asarray(g.evaluate_batch(concat_points(prefixes, x.bits[None, :])))
    return float(np.mean(values * characters(u, prefixes)))


def estimate_energy(
    g: Evaluator,
    u: BitVec,
    params: KmParams,
    rng: np.random.Generator,
    *,
    chunk_points: int | None = None,
) -> float:
    """Estimate ``E(g_u^2)`` as the mean of ``m1`` squared inner estimates.

    Each inner estimate uses a fresh suffix and ``m2`` fresh prefixes. Points
    are evaluated in batches of at most ``chunk_points`` rows.
    """
    n, k = g.n, u.n
    if chunk_points is None:
        chunk_points = int(load_defaults("km")["chunk_points"])
    per_chunk = max(1, chunk_points // params.m2)
    squares = []
    for start in range(0, params.m1, per_chunk):
        count = min(per_chunk, params.m1 - start)
        suffixes = rng.integers(0, 2, size=(count, 1, n - k), dtype=np.uint8)
        prefixes = rng.integers(0, 2, size=(count, params.m2, k), dtype=np.uint8)
        points = np.concatenate(
            [prefixes, np.broadcast_to(suffixes, (count, params.m2, n - k))], axis=2
        )
        values = np.asarray(g.evaluate_batch(points.reshape(-1, n))).reshape(count, params.m2)
        inner = np.mean(values * characters(u, prefixes), axis=1)
        squares.append(inner**2)
    return float(np.mean(np.concatenate(squares)))


def _sign_statistic(h: Evaluator, u: BitVec, m3: int, rng: np.random.Generator) -> float:
    points = rng.integers(0, 2, size=(m3, h.n), dtype=np.uint8)
    values = np.asarray(h.evaluate_batch(points))
    return float(np.mean(values * characters(u, points)))


def estimate_sign(h: Evaluator, u: BitVec, m3: int, rng: np.random.Generator) -> int:
    """Estimate the bit of ``b`` attached to feature ``u``: 1 if the sampled ``h^(u) > 0``."""
    return 1 if _sign_statistic(h, u, m3, rng) > 0 else 0


class _SampledMoments:
    def __init__(
        self, g: Evaluator, h: Evaluator | None, params: KmParams, rng: np.random.Generator
    ) -> None:
        self.g, self.h, self.params, self.rng = g, h, params, rng

    def energy(self, u: BitVec) -> float:
        return estimate_energy(self.g, u, self.params, self.rng)

    def sign(self, u: BitVec) -> int:
        if self.h is None:
            msg = "Sign estimation needs the h oracle."
            raise ValueError(msg)
        return estimate_sign(self.h, u, self.params.m3, self.rng)


class _ExactMoments:
    """Exact energies and signs from the spectrum of a tabulated function."""

    def __init__(self, n: int, g_table: np.ndarray, h_table: np.ndarray | None) -> None:
        self.n = n
        self.g_coefficients = walsh_coefficients(g_table)
        self.h_coefficients = None if h_table is None else walsh_coefficients(h_table)

    @classmethod
    def tabulate(cls, evaluator: Evaluator) -> _ExactMoments:
        """Tabulate ``f`` once and derive both ``g`` and ``h``."""
        n = _check_exact_size(evaluator.n)
        table = np.asarray(evaluator.evaluate_batch(all_points(n)), dtype=np.float64)
        return cls(n, 2 * table / n - 1, 2 * table - n)

    def energy(self, u: BitVec) -> float:
        block = prefix_range(u, self.n)
        return float(np.sum(self.g_coefficients[block.start : block.stop] ** 2))

    def sign(self, u: BitVec) -> int:
        if self.h_coefficients is None:
            msg = "Sign computation needs the h table."
            raise ValueError(msg)
        return 1 if self.h_coefficients[to_index(u)] > 0 else 0


def _check_exact_size(n: int) -> int:
    limit = min(int(load_defaults("km")["exact_max_n"]), MAX_RESTRICTED_DIMENSION)
    if n > limit:
        msg = f"Exact mode tabulates 2**n values and is limited to n <= {limit}, got {n}."
        raise ValueError(msg)
    return n


def _collect(
    moments: _SampledMoments | _ExactMoments, n: int, threshold: float, stats: KmStats
) -> list[BitVec]:
    features: list[BitVec] = []
    stack = [BitVec.zeros(0)]
    zero, one = BitVec([0]), BitVec([1])
    while stack:
        prefix = stack.pop()
        stats.visited_nodes += 1
        energy = moments.energy(prefix)
        if energy <= threshold:
            continue
        if prefix.n == n:
            features.append(prefix)
            continue
        stats.expanded_nodes += 1
        logger.debug(f"Expanding prefix '{prefix}' with energy {energy:.6g}.")
        # Push the 1-child first so the 0-child is searched first.
        stack.extend([concat_bits(prefix, one), concat_bits(prefix, zero)])
    return features


def km_collect(
    g: Evaluator,
    n: int,
    params: KmParams,
    rng: np.random.Generator,
    stats: KmStats | None = None,
) -> list[BitVec]:
    """Collect the leaves of the prefix tree whose energy exceeds the threshold.

    Args:
        g: The normalized oracle ``g = 2f/n - 1``.
        n: Dimension.
        params: Sample sizes, threshold and mode.
        rng: Randomness for the sampled mode.
        stats: Receives node counters when given.

    Returns:
        The feature vectors in depth-first order (0-child first).
    """
    stats = KmStats() if stats is None else stats
    if params.mode == "exact":
        _check_exact_size(n)
        g_table = np.asarray(g.evaluate_batch(all_points(n)), dtype=np.float64)
        moments: _SampledMoments | _ExactMoments = _ExactMoments(n, g_table, None)
    else:
        moments = _SampledMoments(g, None, params, rng)
    return _collect(moments, n, params.threshold, stats)


def km_maximize(f: CountingOracle, params: KmParams, rng: np.random.Generator) -> KmReport:
    """Learn ``M`` and ``b`` of an AOM function and return the implied optimum.

    Failure (a feature set of the wrong size or a singular recovered matrix)
    is reported, not raised.
    """
    n = f.n
    start = f.eval_count
    stats = KmStats()
    if params.mode == "exact":
        moments: _SampledMoments | _ExactMoments = _ExactMoments.tabulate(f)
    else:
        moments = _SampledMoments(g_normalize(f), h_normalize(f), params, rng)

    features = _collect(moments, n, params.threshold, stats)
    logger.debug(
        f"Collected {len(features)} feature(s) after expanding {stats.expanded_nodes} node(s)."
    )

    def failed(diagnostic: str, b_hat: BitVec | None = None) -> KmReport:
        return KmReport(
            features=tuple(features),
            b_hat=b_hat,
            evaluations_used=f.eval_count - start,
            success=False,
            expanded_nodes=stats.expanded_nodes,
            visited_nodes=stats.visited_nodes,
            diagnostic=diagnostic,
        )

    if len(features) != n:
        return failed(f"collected {len(features)} feature vectors instead of {n}")

    b_hat = BitVec([moments.sign(u) for u in features])
    try:
        inverse = invert(BitMat.from_rows(features))
    except SingularMatrixError:
        return failed("the recovered matrix is singular", b_hat)

    candidate = mat_vec(inverse, complement(b_hat))
    value = f(candidate)
    return KmReport(
        features=tuple(features),
        b_hat=b_hat,
        candidate=candidate,
        value=value,
        evaluations_used=f.eval_count - start,
        success=value == n,
        expanded_nodes=stats.expanded_nodes,
        visited_nodes=stats.visited_nodes,
        diagnostic=None if value == n else f"candidate value {value} is below {n}",
    )


def km_attempts(
    f: CountingOracle,
    params: KmParams,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> list[KmReport]:
    """Run :func:`km_maximize` until an attempt succeeds.

    Returns:
        The reports of every attempt; the last one succeeded.

    Raises:
        NotFoundError: If ``max_attempts`` attempts all failed.
    """
    reports: list[KmReport] = []
    while max_attempts is None or len(reports) < max_attempts:
        report = km_maximize(f, params, rng)
        reports.append(report)
        if report.success:
            logger.info(
                f"Learned the optimum in attempt {len(reports)} "
                f"({f.eval_count} evaluations in total)."
            )
            return reports
        logger.info(f"Attempt {len(reports)} failed: {report.diagnostic}.")
    msg = f"No attempt out of {max_attempts} recovered the optimum."
    raise NotFoundError(msg)


def km_maximize_repeated(
    f: CountingOracle,
    params: KmParams,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> BitVec:
    """Repeat learning until the optimum is found and return it.

    Raises:
        NotFoundError: If ``max_attempts`` is given and every attempt failed.
    """
    candidate = km_attempts(f, params, rng, max_attempts)[-1].candidate
    if candidate is None:
        raise AssertionError
    return candidate


def format_report(report: KmReport) -> str:
    """Report text: recovered rows, ``b_hat``, candidate, evaluations and success flag."""
    lines = ["features:"]
    lines += [f"  {u}" for u in report.features]
    lines += [
        f"b_hat: {'' if report.b_hat is None else report.b_hat}",
        f"candidate: {'' if report.candidate is None else report.candidate}",
        f"value: {'' if report.value is None else report.value}",
        f"evaluations: {report.evaluations_used}",
        f"expanded_nodes: {report.expanded_nodes}",
        f"success: {str(report.success).lower()}",
    ]
    if report.diagnostic:
        lines.append(f"diagnostic: {report.diagnostic}")
    return "\n".join(lines) + "\n"
