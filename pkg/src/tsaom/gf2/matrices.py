"""Square matrices over GF(2), inversion and invertible-matrix sampling."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from pydantic import PositiveInt, validate_call

from tsaom.errors import DimensionMismatchError, SingularMatrixError
from tsaom.gf2.vectors import BitVec

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)


class BitMat:
    """Immutable ``n x n`` matrix over GF(2).

    Rows are stored as a read-only ``(n, n)`` numpy ``uint8`` array. Entry
    accessors taking coordinates (:meth:`entry`) are 1-based; ``array`` and
    ``rows`` are plain 0-based numpy/Python containers.
    """

    __slots__ = ("_array",)

    def __init__(self, rows: ArrayLike) -> None:
        array = np.array(rows, dtype=np.int64)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            msg = f"A bit matrix must be square, got shape {array.shape}."
            raise ValueError(msg)
        if array.size and (array.min() < 0 or array.max() > 1):
            msg = "Every entry of a bit matrix must be 0 or 1."
            raise ValueError(msg)
        packed = array.astype(np.uint8)
        packed.setflags(write=False)
        self._array = packed

    @classmethod
    def _wrap(cls, array: NDArray[np.uint8]) -> BitMat:
        mat = cls.__new__(cls)
        frozen = np.array(array, dtype=np.uint8)
        frozen.setflags(write=False)
        mat._array = frozen
        return mat

    @classmethod
    def identity(cls, n: int) -> BitMat:
        """The identity matrix ``I_n``."""
        return cls._wrap(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, n: int) -> BitMat:
        """The all-zero ``n x n`` matrix."""
        return cls._wrap(np.zeros((n, n), dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Sequence[str | BitVec]) -> BitMat:
        """Build a matrix from bit-string rows, e.g. ``["110", "010", "001"]``."""
        vecs = [row if isinstance(row, BitVec) else BitVec.parse(row) for row in rows]
        if not vecs:
            return cls.zeros(0)
        if any(vec.n != len(vecs) for vec in vecs):
            msg = f"Expected {len(vecs)} rows of length {len(vecs)}."
            raise ValueError(msg)
        return cls._wrap(np.stack([vec.bits for vec in vecs]))

    @property
    def n(self) -> int:
        """Side length."""
        return int(self._array.shape[0])

    @property
    def array(self) -> NDArray[np.uint8]:
        """Read-only ``(n, n)`` view of the entries."""
        return self._array

    @property
    def rows(self) -> tuple[BitVec, ...]:
        """The rows as bit vectors."""
        return tuple(BitVec._wrap(row) for row in self._array)

    @property
    def T(self) -> BitMat:  # noqa: N802
        """The transpose."""
        return transpose(self)

    def entry(self, i: int, j: int) -> int:
        """Entry at row ``i`` and column ``j`` (1-based)."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            msg = f"Entry ({i}, {j}) is out of range for a {self.n}x{self.n} matrix."
            raise IndexError(msg)
        return int(self._array[i - 1, j - 1])

    def __iter__(self) -> Iterator[BitVec]:
        return iter(self.rows)

    def __matmul__(self, other: BitMat | BitVec) -> BitMat | BitVec:
        if isinstance(other, BitVec):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __add__(self, other: BitMat) -> BitMat:
        _check_same_side(self, other)
        return BitMat._wrap(self._array ^ other._array)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMat):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._array, other._array))

    def __hash__(self) -> int:
        return hash((self.n, self._array.tobytes()))

    def __str__(self) -> str:
        return "\n".join(str(row) for row in self.rows)

    def __repr__(self) -> str:
        return f"BitMat.from_rows({[str(row) for row in self.rows]!r})"


def _check_same_side(A: BitMat, B: BitMat) -> None:
    if A.n != B.n:
        msg = f"Dimension mismatch: {A.n}x{A.n} vs {B.n}x{B.n}."
        raise DimensionMismatchError(msg)


def mat_vec(M: BitMat, x: BitVec) -> BitVec:
    """The product ``Mx``; component ``i`` is ``dot(row_i(M), x)``.

    Raises:
        DimensionMismatchError: If ``x`` does not have dimension ``M.n``.
    """
    if M.n != x.n:
        msg = f"Dimension mismatch: {M.n}x{M.n} matrix and vector of dimension {x.n}."
        raise DimensionMismatchError(msg)
    # uint8 sums may wrap around, but wrapping modulo 256 preserves parity.
    return BitVec._wrap((M.array @ x.bits) & 1)


def mat_mul(A: BitMat, B: BitMat) -> BitMat:
    """The product ``AB`` over GF(2).

    Raises:
        DimensionMismatchError: If the sides differ.
    """
    _check_same_side(A, B)
    return BitMat._wrap((A.array @ B.array) & 1)


def transpose(M: BitMat) -> BitMat:
    """The transpose ``M^T``."""
    return BitMat._wrap(M.array.T)


def _eliminate(array: NDArray[np.uint8]) -> tuple[NDArray[np.uint8], int]:
    """Reduce ``array`` to reduced row echelon form over GF(2).

    Pivots are chosen as the first row, from the top, with a nonzero bit in
    the current column, so the result only depends on the input.

    Returns:
        The reduced array and its rank.
    """
    work = np.array(array, dtype=np.uint8)
    rows, cols = work.shape
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        candidates = np.flatnonzero(work[pivot_row:, col])
        if candidates.size == 0:
            continue
        pivot = pivot_row + int(candidates[0])
        if pivot != pivot_row:
            work[[pivot_row, pivot]] = work[[pivot, pivot_row]]
        mask = work[:, col].astype(bool)
        mask[pivot_row] = False
        work[mask] ^= work[pivot_row]
        pivot_row += 1
    return work, pivot_row


def rank(M: BitMat) -> int:
    """Rank of ``M`` over GF(2)."""
    return _eliminate(M.array)[1]


def is_invertible(M: BitMat) -> bool:
    """Whether ``M`` has full rank over GF(2)."""
    return rank(M) == M.n


def invert(M: BitMat) -> BitMat:
    """Invert ``M`` by Gauss-Jordan elimination on ``[M | I]``.

    Raises:
        SingularMatrixError: If ``M`` is singular.

    Examples:
        >>> tau = BitMat.from_rows(["110", "010", "001"])
        >>> invert(tau) == tau
        True
    """
    n = M.n
    augmented = np.concatenate([M.array, np.eye(n, dtype=np.uint8)], axis=1)
    work = augmented.copy()
    for col in range(n):
        candidates = np.flatnonzero(work[col:, col])
        if candidates.size == 0:
            msg = f"Matrix is singular: no pivot in column {col + 1}."
            raise SingularMatrixError(msg)
        pivot = col + int(candidates[0])
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
        mask = work[:, col].astype(bool)
        mask[col] = False
        work[mask] ^= work[col]
    return BitMat._wrap(work[:, n:])


@validate_call
def permutation_matrix(perm: list[PositiveInt]) -> BitMat:
    """Matrix whose row ``i`` has a single 1 in column ``perm[i]``.

    Args:
        perm: A bijection on ``1..n`` given as the list ``[perm(1), ..., perm(n)]``.

    Raises:
        ValueError: If ``perm`` is not a bijection on ``1..n``.
    """
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        msg = f"Not a permutation of 1..{n}: {perm}."
        raise ValueError(msg)
    array = np.zeros((n, n), dtype=np.uint8)
    array[np.arange(n), np.asarray(perm) - 1] = 1
    return BitMat._wrap(array)


def sample_invertible_with_trials(n: int, rng: np.random.Generator) -> tuple[BitMat, int]:
    """Sample a uniform element of ``GL(n, F_2)`` by rejection.

    All ``n**2`` bits are drawn uniformly and the draw is rejected until the
    matrix has full rank. The expected number of trials is
    ``1 / invertible_probability(n)``, which is below 4 for every ``n``.

    Returns:
        The matrix and the number of trials it took.
    """
    if n < 1:
        msg = f"Dimension must be positive, got {n}."
        raise ValueError(msg)
    trials = 0
    while True:
        trials += 1
        candidate = BitMat._wrap(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
        if is_invertible(candidate):
            logger.debug(f"Sampled an invertible {n}x{n} matrix after {trials} trial(s).")
            return candidate, trials


def sample_invertible(n: int, rng: np.random.Generator) -> BitMat:
    """Sample a uniform element of ``GL(n, F_2)``; see :func:`sample_invertible_with_trials`."""
    return sample_invertible_with_trials(n, rng)[0]


@validate_call
def gl_order(n: PositiveInt) -> int:
    """Order of ``GL(n, F_2)``: ``(2^n - 1)(2^n - 2)...(2^n - 2^(n-1))``."""
    return math.prod(2**n - 2**k for k in range(n))


@validate_call
def invertible_probability(n: PositiveInt) -> float:
    """Probability that a uniform ``n x n`` bit matrix is invertible."""
    return math.prod(1 - 2.0 ** (-k) for k in range(1, n + 1))


def format_matrix(M: BitMat) -> str:
    """Matrix text format: a line with ``n``, then ``n`` rows of ``n`` bits."""
    body = "".join(f"{row}\n" for row in M.rows)
    return f"{M.n}\n{body}"


def parse_matrix(text: str) -> BitMat:
    """Inverse of :func:`format_matrix`.

    Raises:
        ValueError: If the header does not match the number or width of rows.
    """
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines:
        msg = "Empty matrix text."
        raise ValueError(msg)
    n = int(lines[0])
    rows = lines[1:]
    if len(rows) != n:
        msg = f"Matrix header announces {n} rows but {len(rows)} were given."
        raise ValueError(msg)
    return BitMat.from_rows(rows)
