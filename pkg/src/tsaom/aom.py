"""Affine OneMax functions ``f(x) = onemax(Mx + b)`` and the counting oracle.

An AOM function has the maximum ``n``, reached only at
``x* = M^-1 (1^n + b)``, and exactly ``C(n, k)`` points with value ``k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal, Protocol

import numpy as np
import yaml

from tsaom.errors import BudgetExceededError, DimensionMismatchError, SingularMatrixError
from tsaom.gf2 import (
    BitMat,
    BitVec,
    all_points,
    complement,
    invert,
    is_invertible,
    mat_vec,
    onemax,
    sample_invertible,
)
from tsaom.transvections import (
    Transvection,
    TransvectionClass,
    TransvectionSequence,
    product,
    sample_sequence,
)

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

#: Largest dimension for which a full value table is built.
MAX_TABLE_DIMENSION = 24

#: Largest dimension for which :func:`functions_equal` compares exhaustively.
MAX_COMPARE_DIMENSION = 20

GENERAL = "general"
FunctionClass = TransvectionClass | Literal["general"]

#: Names accepted wherever a function class is chosen.
CLASS_CHOICES = [GENERAL, *(str(tag) for tag in TransvectionClass)]


class Evaluator(Protocol):
    """Anything that evaluates points of {0,1}^n one at a time or in batches."""

    @property
    def n(self) -> int: ...

    def __call__(self, x: BitVec) -> int | float: ...

    def evaluate_batch(self, X: ArrayLike) -> NDArray[Any]: ...


@dataclass(frozen=True, eq=False)
class AomFunction:
    """The function ``x -> onemax(Mx + b)`` for an invertible ``M``.

    Build instances through :func:`make_aom` or the samplers, which check
    invertibility.

    Attributes:
        M: The invertible linear part.
        b: The translation.
        provenance: The transvection sequence ``M`` was built from, if any.
    """

    M: BitMat
    b: BitVec
    provenance: TransvectionSequence | None = field(default=None)

    @property
    def n(self) -> int:
        """Dimension."""
        return self.M.n

    @cached_property
    def inverse(self) -> BitMat:
        """``M^-1``, computed on first use."""
        return invert(self.M)

    @cached_property
    def _transposed(self) -> NDArray[np.uint8]:
        return np.ascontiguousarray(self.M.array.T)

    def __call__(self, x: BitVec) -> int:
        return evaluate(self, x)

    def evaluate_batch(self, X: ArrayLike) -> NDArray[np.int64]:
        """Evaluate every row of the bit array ``X``."""
        return evaluate_batch(self, X)


def make_aom(
    M: BitMat, b: BitVec, provenance: TransvectionSequence | None = None
) -> AomFunction:
    """Build the AOM function ``onemax(Mx + b)``.

    Raises:
        DimensionMismatchError: If ``b`` or the provenance has the wrong dimension.
        SingularMatrixError: If ``M`` is not invertible.
        ValueError: If the provenance does not multiply out to ``M``.
    """
    if M.n != b.n:
        msg = f"Dimension mismatch: {M.n}x{M.n} matrix and translation of dimension {b.n}."
        raise DimensionMismatchError(msg)
    if not is_invertible(M):
        msg = "The linear part of an AOM function must be invertible."
        raise SingularMatrixError(msg)
    if provenance is not None:
        if provenance.n != M.n:
            msg = f"Provenance dimension {provenance.n} differs from n = {M.n}."
            raise DimensionMismatchError(msg)
        if product(provenance) != M:
            msg = "The provenance sequence does not multiply out to the matrix."
            raise ValueError(msg)
    return AomFunction(M=M, b=b, provenance=provenance)


def onemax_function(n: int) -> AomFunction:
    """OneMax itself, ``M = I`` and ``b = 0``."""
    return AomFunction(M=BitMat.identity(n), b=BitVec.zeros(n))


def evaluate(f: AomFunction, x: BitVec) -> int:
    """The value ``onemax(Mx + b)``.

    Raises:
        DimensionMismatchError: If ``x`` has the wrong dimension.
    """
    return onemax(mat_vec(f.M, x) + f.b)


def evaluate_bits(f: AomFunction, x: NDArray[np.uint8]) -> int:
    """The value of one point given as a ``uint8`` bit array.

    The hot path of the search algorithms: no :class:`BitVec` is built and
    no batch axis is added.

    Raises:
        DimensionMismatchError: If ``x`` does not have shape ``(n,)``.
    """
    if x.shape != (f.n,):
        msg = f"Expected a point of shape ({f.n},), got {x.shape}."
        raise DimensionMismatchError(msg)
    return int(np.count_nonzero(((f.M.array @ x) & 1) ^ f.b.bits))


def evaluate_batch(f: AomFunction, X: ArrayLike) -> NDArray[np.int64]:
    """Evaluate every row of the ``(m, n)`` bit array ``X``.

    Raises:
        DimensionMismatchError: If the rows do not have ``n`` columns.
    """
    points = np.asarray(X, dtype=np.uint8)
    if points.ndim != 2 or points.shape[1] != f.n:
        msg = f"Expected a batch of shape (m, {f.n}), got {points.shape}."
        raise DimensionMismatchError(msg)
    images = ((points @ f._transposed) & 1) ^ f.b.bits
    return np.count_nonzero(images, axis=1).astype(np.int64)


def optimum(f: AomFunction) -> BitVec:
    """The unique maximizer ``M^-1 (1^n + b)``."""
    return mat_vec(f.inverse, complement(f.b))


def value_table(f: AomFunction) -> NDArray[np.int64]:
    """All ``2**n`` values of ``f`` in index order (coordinate 1 most significant).

    Raises:
        ValueError: If ``n`` exceeds :data:`MAX_TABLE_DIMENSION`.
    """
    n = f.n
    if n > MAX_TABLE_DIMENSION:
        msg = f"Value tables are limited to n <= {MAX_TABLE_DIMENSION}, got n = {n}."
        raise ValueError(msg)
    weights = np.left_shift(1, np.arange(n - 1, -1, -1, dtype=np.int64))
    # Column k of M as an integer, row 1 in the most significant bit.
    columns = weights @ f.M.array.astype(np.int64)
    images = np.zeros(1, dtype=np.int64)
    for column in columns:
        images = np.stack([images, images ^ column], axis=1).ravel()
    images ^= int(weights @ f.b.bits.astype(np.int64))
    return np.bitwise_count(images).astype(np.int64)


def level_set_counts(f: AomFunction) -> list[int]:
    """The sizes ``|f^-1(k)|`` for ``k = 0..n``."""
    return np.bincount(value_table(f), minlength=f.n + 1).tolist()


def functions_equal(f: AomFunction, g: AomFunction) -> bool:
    """Whether ``f`` and ``g`` agree on every input.

    Raises:
        ValueError: If ``n`` exceeds :data:`MAX_COMPARE_DIMENSION`.
    """
    if f.n != g.n:
        return False
    if f.n > MAX_COMPARE_DIMENSION:
        msg = f"Exhaustive comparison is limited to n <= {MAX_COMPARE_DIMENSION}."
        raise ValueError(msg)
    return bool(np.array_equal(value_table(f), value_table(g)))


def brute_force_maximizers(f: AomFunction) -> list[BitVec]:
    """Every point with value ``n``, found by enumeration (small ``n`` only)."""
    table = value_table(f)
    points = all_points(f.n)
    return [BitVec(points[index]) for index in np.flatnonzero(table == f.n)]


def sample_aom(n: int, rng: np.random.Generator) -> AomFunction:
    """Sample ``M`` uniformly from ``GL(n, F_2)`` and ``b`` uniformly from ``{0,1}^n``."""
    M = sample_invertible(n, rng)
    b = BitVec(rng.integers(0, 2, size=n, dtype=np.uint8))
    return AomFunction(M=M, b=b)


def sample_ts_aom(
    n: int, t: int, class_tag: TransvectionClass | str, rng: np.random.Generator
) -> AomFunction:
    """Sample a TS-AOM function: ``M`` is the product of a sampled sequence.

    Raises:
        SequenceLengthError: If ``t`` is out of range for the class.
    """
    sequence = sample_sequence(n, t, class_tag, rng)
    b = BitVec(rng.integers(0, 2, size=n, dtype=np.uint8))
    return AomFunction(M=product(sequence), b=b, provenance=sequence)


def sample_function(
    n: int, function_class: FunctionClass | str, t: int, rng: np.random.Generator
) -> AomFunction:
    """Sample from the general class (``"general"``, ``t`` ignored) or a TS-AOM class."""
    if function_class == GENERAL:
        return sample_aom(n, rng)
    return sample_ts_aom(n, t, function_class, rng)


class CountingOracle:
    """Black-box access to an AOM function that counts every evaluation.

    Each evaluated point counts once, also inside a batch. When a budget is
    set, a request that would go past it raises before anything is counted.

    Attributes:
        function: The wrapped function.
        eval_count: Evaluations made so far.
        budget: Maximum number of evaluations, None for no limit.
        first_hit: The evaluation index (1-based) at which the value ``n``
            was first returned, None if not yet.
    """

    def __init__(self, function: AomFunction, budget: int | None = None) -> None:
        self.function = function
        self.budget = budget
        self.eval_count = 0
        self.first_hit: int | None = None

    @property
    def n(self) -> int:
        """Dimension of the wrapped function."""
        return self.function.n

    @property
    def remaining(self) -> int | None:
        """Evaluations left in the budget, None for no limit."""
        return None if self.budget is None else self.budget - self.eval_count

    def _reserve(self, count: int) -> None:
        if self.budget is not None and self.eval_count + count > self.budget:
            msg = (
                f"Evaluation budget of {self.budget} exceeded "
                f"({self.eval_count} used, {count} requested)."
            )
            raise BudgetExceededError(msg)

    def __call__(self, x: BitVec) -> int:
        return self.evaluate_point(x.bits)

    def evaluate_point(self, x: NDArray[np.uint8]) -> int:
        """Evaluate one ``uint8`` bit array, counting one evaluation."""
        self._reserve(1)
        value = evaluate_bits(self.function, x)
        self.eval_count += 1
        if value == self.n and self.first_hit is None:
            self.first_hit = self.eval_count
        return value

    def evaluate_batch(self, X: ArrayLike) -> NDArray[np.int64]:
        """Evaluate every row of ``X``, counting one evaluation per row."""
        points = np.asarray(X, dtype=np.uint8)
        self._reserve(points.shape[0])
        values = evaluate_batch(self.function, points)
        if self.first_hit is None:
            hits = np.flatnonzero(values == self.n)
            if hits.size:
                self.first_hit = self.eval_count + int(hits[0]) + 1
        self.eval_count += points.shape[0]
        return values

    def reset(self) -> None:
        """Forget all counted evaluations."""
        self.eval_count = 0
        self.first_hit = None


def instance_to_dict(f: AomFunction) -> dict[str, Any]:
    """Plain-data form of an instance: ``n``, ``b``, ``matrix`` and ``sequence``."""
    data: dict[str, Any] = {
        "n": f.n,
        "b": str(f.b),
        "matrix": [str(row) for row in f.M.rows],
    }
    if f.provenance is not None:
        data["sequence"] = {
            "class": str(f.provenance.class_tag),
            "transvections": [[tau.i, tau.j] for tau in f.provenance.seq],
        }
    return data


def instance_from_dict(data: dict[str, Any]) -> AomFunction:
    """Inverse of :func:`instance_to_dict`; validates the instance.

    Raises:
        ValueError: If a field is missing or inconsistent.
        SingularMatrixError: If the matrix is singular.
    """
    try:
        n = int(data["n"])
        b = BitVec.parse(str(data["b"]))
        M = BitMat.from_rows([str(row) for row in data["matrix"]])
    except KeyError as err:
        msg = f"Instance is missing the field {err}."
        raise ValueError(msg) from err
    if M.n != n or b.n != n:
        msg = f"Instance fields disagree with n = {n}."
        raise ValueError(msg)
    provenance = None
    if (sequence := data.get("sequence")) is not None:
        provenance = TransvectionSequence(
            n=n,
            seq=tuple(Transvection(i=i, j=j) for i, j in sequence.get("transvections", [])),
            class_tag=TransvectionClass(sequence.get("class", "unconstrained")),
        )
    return make_aom(M, b, provenance)


def dump_instance(f: AomFunction) -> str:
    """Instance text (YAML)."""
    return yaml.safe_dump(instance_to_dict(f), sort_keys=False, default_flow_style=None)


def load_instance(text: str) -> AomFunction:
    """Inverse of :func:`dump_instance`."""
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        msg = "Instance text must be a mapping."
        raise TypeError(msg)
    return instance_from_dict(data)


def write_instance(f: AomFunction, path: str | Path) -> None:
    """Write an instance file."""
    Path(path).write_text(dump_instance(f), encoding="utf-8")
    logger.debug(f"Wrote instance with n = {f.n} to '{path}'.")


def read_instance(path: str | Path) -> AomFunction:
    """Read an instance file written by :func:`write_instance`."""
    return load_instance(Path(path).read_text(encoding="utf-8"))
