"""Vectors over the field with two elements.

Bits are stored one per byte in read-only numpy ``uint8`` arrays, so that
batches of points can be evaluated with vectorized numpy operations.

Coordinates follow two conventions:

- Python indexing (``x[k]``, ``x.bits``) is 0-based.
- Domain helpers that take a coordinate number (``basis_vector``,
  transvection indices, permutations) are 1-based, as in the usual
  mathematical notation ``e_1, ..., e_n``.

Integer indices of vectors put coordinate 1 in the most significant bit.
This makes every prefix ``u`` of length ``k`` correspond to a contiguous
block of ``2**(n - k)`` indices, which the spectrum and learner modules rely
on through :func:`prefix_range`.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from tsaom.errors import DimensionMismatchError

if TYPE_CHECKING:
    from collections.abc import Iterator

    from numpy.typing import ArrayLike, NDArray


class BitVec:
    """Immutable vector over GF(2); addition is bitwise XOR.

    Bits are stored one per byte in a read-only ``uint8`` array, eight times
    the memory of packed words. In exchange a batch of points is a plain
    ``(k, n)`` array that products with a matrix evaluate in one numpy call.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: ArrayLike) -> None:
        array = np.array(bits, dtype=np.int64)
        if array.ndim != 1:
            msg = f"A bit vector must be one-dimensional, got shape {array.shape}."
            raise ValueError(msg)
        if array.size and (array.min() < 0 or array.max() > 1):
            msg = "Every element of a bit vector must be 0 or 1."
            raise ValueError(msg)
        packed = array.astype(np.uint8)
        packed.setflags(write=False)
        self._bits = packed

    @classmethod
    def _wrap(cls, bits: NDArray[np.uint8]) -> BitVec:
        # Trusted constructor: bits already validated uint8 in {0, 1}.
        vec = cls.__new__(cls)
        frozen = np.ascontiguousarray(bits, dtype=np.uint8)
        if frozen.flags.writeable:
            frozen = frozen.copy()
            frozen.setflags(write=False)
        vec._bits = frozen
        return vec

    @classmethod
    def zeros(cls, n: int) -> BitVec:
        """The zero vector of dimension ``n``."""
        return cls._wrap(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> BitVec:
        """The all-ones vector ``1^n``."""
        return cls._wrap(np.ones(n, dtype=np.uint8))

    @classmethod
    def parse(cls, text: str) -> BitVec:
        """Parse a line of ``0``/``1`` characters, e.g. ``"0110"``."""
        stripped = text.strip()
        if any(char not in "01" for char in stripped):
            msg = f"A bit string may only contain '0' and '1', got '{stripped}'."
            raise ValueError(msg)
        return cls._wrap(np.fromiter(map(int, stripped), dtype=np.uint8, count=len(stripped)))

    @property
    def n(self) -> int:
        """Dimension of the vector."""
        return int(self._bits.size)

    @property
    def bits(self) -> NDArray[np.uint8]:
        """Read-only view of the bits."""
        return self._bits

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits.tolist())

    def __getitem__(self, index: int) -> int:
        return int(self._bits[index])

    def __add__(self, other: BitVec) -> BitVec:
        _check_same_dimension(self, other)
        return BitVec._wrap(self._bits ^ other._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __lt__(self, other: BitVec) -> bool:
        return str(self) < str(other)

    def __str__(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        return f"BitVec('{self}')"


def _check_same_dimension(x: BitVec, y: BitVec) -> None:
    if x.n != y.n:
        msg = f"Dimension mismatch: {x.n} vs {y.n}."
        raise DimensionMismatchError(msg)


def onemax(x: BitVec) -> int:
    """Number of ones in ``x``.

    Examples:
        >>> onemax(BitVec.parse("1010"))
        2
    """
    return int(np.count_nonzero(x.bits))


def dot(x: BitVec, u: BitVec) -> int:
    """Inner product ``sum_i x_i u_i mod 2``.

    Raises:
        DimensionMismatchError: If the vectors have different dimensions.
    """
    _check_same_dimension(x, u)
    return int(np.count_nonzero(x.bits & u.bits) & 1)


def complement(x: BitVec) -> BitVec:
    """The vector ``x + 1^n``."""
    return BitVec._wrap(x.bits ^ 1)


def basis_vector(n: int, i: int) -> BitVec:
    """The unit vector ``e_i`` with a single one at coordinate ``i`` (1-based)."""
    if not 1 <= i <= n:
        msg = f"Coordinate {i} is out of range 1..{n}."
        raise IndexError(msg)
    bits = np.zeros(n, dtype=np.uint8)
    bits[i - 1] = 1
    return BitVec._wrap(bits)


def indicator(n: int, coordinates: list[int] | set[int] | range) -> BitVec:
    """Sum of the unit vectors ``e_k`` over the given 1-based coordinates."""
    bits = np.zeros(n, dtype=np.uint8)
    for k in coordinates:
        if not 1 <= k <= n:
            msg = f"Coordinate {k} is out of range 1..{n}."
            raise IndexError(msg)
        bits[k - 1] ^= 1
    return BitVec._wrap(bits)


def to_index(x: BitVec) -> int:
    """Integer index of ``x``, coordinate 1 being the most significant bit."""
    return int("".join(map(str, x)) or "0", 2)


def from_index(index: int, n: int) -> BitVec:
    """Inverse of :func:`to_index`."""
    if not 0 <= index < 2**n:
        msg = f"Index {index} does not fit in {n} bits."
        raise ValueError(msg)
    return BitVec.parse(format(index, f"0{n}b")) if n else BitVec.zeros(0)


def all_points(n: int) -> NDArray[np.uint8]:
    """Every point of ``{0,1}^n`` as rows of a ``(2**n, n)`` array, in index order."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    indices = np.arange(2**n, dtype=np.int64)[:, None]
    return ((indices >> shifts) & 1).astype(np.uint8)


def points_to_indices(points: NDArray[np.uint8]) -> NDArray[np.int64]:
    """Integer indices of the rows of ``points`` (see :func:`to_index`)."""
    n = points.shape[-1]
    weights = np.left_shift(1, np.arange(n - 1, -1, -1, dtype=np.int64))
    return points.astype(np.int64) @ weights


def concat_bits(u: BitVec, v: BitVec) -> BitVec:
    """The concatenation ``uv``: ``u`` occupies the first coordinates."""
    return BitVec._wrap(np.concatenate([u.bits, v.bits]))


def split_bits(x: BitVec, k: int) -> tuple[BitVec, BitVec]:
    """Split ``x`` into its prefix of length ``k`` and the remaining suffix."""
    if not 0 <= k <= x.n:
        msg = f"Prefix length {k} is out of range 0..{x.n}."
        raise ValueError(msg)
    return BitVec._wrap(x.bits[:k]), BitVec._wrap(x.bits[k:])


def concat_points(prefixes: NDArray[np.uint8], suffixes: NDArray[np.uint8]) -> NDArray[np.uint8]:
    """Row-wise concatenation of prefix and suffix batches (broadcasting rows)."""
    rows = max(prefixes.shape[0], suffixes.shape[0])
    prefixes = np.broadcast_to(prefixes, (rows, prefixes.shape[1]))
    suffixes = np.broadcast_to(suffixes, (rows, suffixes.shape[1]))
    return np.concatenate([prefixes, suffixes], axis=1)


def prefix_range(u: BitVec, n: int) -> range:
    """Indices of all points ``uv`` of ``{0,1}^n`` that start with the prefix ``u``."""
    if u.n > n:
        msg = f"Prefix of length {u.n} is longer than the dimension {n}."
        raise ValueError(msg)
    block = 2 ** (n - u.n)
    start = to_index(u) * block
    return range(start, start + block)


def format_vector(x: BitVec) -> str:
    """Vector text format: one line of ``n`` characters."""
    return f"{x}\n"


def parse_vector(text: str) -> BitVec:
    """Inverse of :func:`format_vector`."""
    return BitVec.parse(text)
