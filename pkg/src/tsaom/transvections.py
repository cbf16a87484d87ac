"""Elementary transvections, their commutation rules and sequence samplers.

The transvection ``tau_ij`` adds coordinate ``j`` (the source) to coordinate
``i`` (the destination). Its matrix is the identity with an extra 1 at entry
``(i, j)``. Products of ``t`` transvections give the TS-AOM function classes:

- ``unconstrained``: any sequence.
- ``commuting``: destination set ``I`` and source set ``J`` are disjoint, which
  is the same as every pair of elements commuting.
- ``unique_source``: commuting, each source index used at most once.
- ``unique_destination``: commuting, each destination index used at most once.
- ``disjoint``: all ``2t`` indices pairwise distinct.
- ``noncommuting_consecutive``: no two consecutive elements commute.

A sequence ``(tau_1, ..., tau_t)`` stands for the matrix
``tau_1 tau_2 ... tau_t``, so it acts on vectors from right to left.
"""

from __future__ import annotations

import itertools
import logging
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveInt, model_validator

from tsaom.errors import SequenceLengthError
from tsaom.gf2 import BitMat, BitVec

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)


class TransvectionClass(str, Enum):
    """Constraint classes for transvection sequences."""

    UNCONSTRAINED = "unconstrained"
    COMMUTING = "commuting"
    UNIQUE_SOURCE = "unique_source"
    UNIQUE_DESTINATION = "unique_destination"
    DISJOINT = "disjoint"
    NONCOMMUTING_CONSECUTIVE = "noncommuting_consecutive"

    def __str__(self) -> str:
        return self.value


class Transvection(BaseModel):
    """The elementary transvection ``tau_ij``: ``x_i <- x_i + x_j``.

    Attributes:
        i: Destination index (1-based).
        j: Source index (1-based).
    """

    model_config = ConfigDict(frozen=True)

    i: PositiveInt
    j: PositiveInt

    @model_validator(mode="after")
    def _distinct_indices(self) -> Transvection:
        if self.i == self.j:
            msg = f"A transvection needs distinct indices, got i = j = {self.i}."
            raise ValueError(msg)
        return self

    def __str__(self) -> str:
        return f"tau_{self.i}{self.j}" if max(self.i, self.j) < 10 else f"tau_{self.i},{self.j}"


class TransvectionSequence(BaseModel):
    """A tagged sequence of transvections in dimension ``n``.

    Construction checks the index range and that the sequence satisfies its
    class constraint (see :func:`classify`).
    """

    model_config = ConfigDict(frozen=True)

    n: PositiveInt
    seq: tuple[Transvection, ...] = ()
    class_tag: TransvectionClass = TransvectionClass.UNCONSTRAINED

    @model_validator(mode="after")
    def _check_indices_and_class(self) -> TransvectionSequence:
        for tau in self.seq:
            if max(tau.i, tau.j) > self.n:
                msg = f"Transvection {tau} is out of range for n = {self.n}."
                raise ValueError(msg)
        if self.class_tag not in _classify(self.n, self.seq):
            msg = f"Sequence does not satisfy the '{self.class_tag}' constraint."
            raise ValueError(msg)
        return self

    @property
    def t(self) -> int:
        """Length of the sequence."""
        return len(self.seq)

    def __len__(self) -> int:
        return len(self.seq)


def _check_range(tau: Transvection, n: int) -> None:
    if max(tau.i, tau.j) > n:
        msg = f"Transvection {tau} is out of range for n = {n}."
        raise IndexError(msg)


def apply(tau: Transvection, x: BitVec) -> BitVec:
    """Apply ``tau_ij`` to ``x``: bit ``i`` becomes ``x_i + x_j``.

    Raises:
        IndexError: If an index of ``tau`` exceeds the dimension of ``x``.
    """
    _check_range(tau, x.n)
    if x[tau.j - 1] == 0:
        return x
    bits = x.bits.copy()
    bits[tau.i - 1] ^= 1
    return BitVec(bits)


def matrix_of(tau: Transvection, n: int) -> BitMat:
    """The matrix ``I_n + B_ij`` of ``tau_ij``.

    Raises:
        IndexError: If an index of ``tau`` exceeds ``n``.
    """
    _check_range(tau, n)
    array = np.eye(n, dtype=np.uint8)
    array[tau.i - 1, tau.j - 1] = 1
    return BitMat(array)


def commute(a: Transvection, b: Transvection) -> bool:
    """Whether ``a`` and ``b`` commute.

    ``tau_ij`` and ``tau_kl`` commute unless the source of one is the
    destination of the other.

    Examples:
        >>> commute(Transvection(i=1, j=2), Transvection(i=1, j=3))
        True
        >>> commute(Transvection(i=1, j=2), Transvection(i=2, j=3))
        False
    """
    return a.j != b.i and b.j != a.i


def product(s: TransvectionSequence) -> BitMat:
    """The matrix ``tau_1 tau_2 ... tau_t``; the identity for the empty sequence."""
    array = np.eye(s.n, dtype=np.uint8)
    for tau in s.seq:
        # Right multiplication by I + B_ij adds column i to column j.
        array[:, tau.j - 1] ^= array[:, tau.i - 1]
    return BitMat(array)


def apply_sequence(s: TransvectionSequence, x: BitVec) -> BitVec:
    """Compute ``product(s) x`` by applying the transvections right to left."""
    for tau in reversed(s.seq):
        x = apply(tau, x)
    return x


def all_transvections(n: int) -> list[Transvection]:
    """All ``n(n-1)`` transvections in dimension ``n``, ordered by ``(i, j)``."""
    return [Transvection(i=i, j=j) for i, j in itertools.permutations(range(1, n + 1), 2)]


def max_length(n: int, class_tag: TransvectionClass) -> int | None:
    """Largest admissible sequence length for a class, None when unbounded."""
    match class_tag:
        case TransvectionClass.COMMUTING:
            return n * n // 4
        case TransvectionClass.UNIQUE_SOURCE | TransvectionClass.UNIQUE_DESTINATION:
            return n - 1
        case TransvectionClass.DISJOINT:
            return n // 2
        case _:
            return None if n >= 2 else 0


def check_length(n: int, t: int, class_tag: TransvectionClass) -> None:
    """Raise if ``t`` is not an admissible length for the class in dimension ``n``.

    Raises:
        SequenceLengthError: If ``t`` is negative or exceeds :func:`max_length`.
    """
    limit = max_length(n, class_tag)
    if t < 0 or (limit is not None and t > limit):
        bound = "unbounded" if limit is None else f"0..{limit}"
        msg = f"Length t = {t} is out of range for class '{class_tag}' at n = {n} ({bound})."
        raise SequenceLengthError(msg)


def _classify(n: int, seq: tuple[Transvection, ...]) -> frozenset[TransvectionClass]:
    tags = {TransvectionClass.UNCONSTRAINED}
    t = len(seq)
    destinations = [tau.i for tau in seq]
    sources = [tau.j for tau in seq]

    if all(not commute(a, b) for a, b in itertools.pairwise(seq)):
        tags.add(TransvectionClass.NONCOMMUTING_CONSECUTIVE)

    commuting = set(destinations).isdisjoint(sources)
    if commuting and t <= n * n // 4:
        tags.add(TransvectionClass.COMMUTING)
        if len(set(sources)) == t:
            tags.add(TransvectionClass.UNIQUE_SOURCE)
        if len(set(destinations)) == t:
            tags.add(TransvectionClass.UNIQUE_DESTINATION)
        if len(set(destinations) | set(sources)) == 2 * t:
            tags.add(TransvectionClass.DISJOINT)
    return frozenset(tags)


def classify(
    s: TransvectionSequence | Iterable[Transvection], n: int | None = None
) -> frozenset[TransvectionClass]:
    """Every class constraint the raw sequence satisfies, whatever its tag.

    Args:
        s: A tagged sequence, or any iterable of transvections together with ``n``.
        n: Dimension, required when ``s`` is not a :class:`TransvectionSequence`.
    """
    if isinstance(s, TransvectionSequence):
        return _classify(s.n, s.seq)
    seq = tuple(s)
    if n is None:
        n = max((max(tau.i, tau.j) for tau in seq), default=1)
    return _classify(n, seq)


def sample_sequence(
    n: PositiveInt,
    t: NonNegativeInt,
    class_tag: TransvectionClass | str,
    rng: np.random.Generator,
) -> TransvectionSequence:
    """Sample a sequence of ``t`` transvections satisfying a class constraint.

    The constrained samplers are constructive: index pools are drawn first and
    assignments afterwards, each uniformly. The induced distribution on
    products is not uniform on the class.

    - ``unconstrained``: every element uniform over the ``n(n-1)`` transvections.
    - ``disjoint``: ``2t`` distinct indices from a random permutation, paired up.
    - ``unique_source``: ``t`` distinct sources, a disjoint pool of ``d``
      destinations with ``d`` uniform in ``1..n-t``, each source sent to a
      uniform destination of the pool.
    - ``unique_destination``: the mirror image of ``unique_source``.
    - ``commuting``: a uniform destination pool size ``d`` with
      ``d(n-d) >= t``, the other indices being sources, and ``t`` distinct
      pairs drawn uniformly from the pool product.
    - ``noncommuting_consecutive``: the first element uniform, each next one
      uniform over the ``2n-3`` transvections not commuting with its predecessor.

    Raises:
        SequenceLengthError: If ``t`` is out of range for the class.
    """
    class_tag = TransvectionClass(class_tag)
    check_length(n, t, class_tag)

    match class_tag:
        case TransvectionClass.UNCONSTRAINED:
            pairs = _sample_unconstrained(n, t, rng)
        case TransvectionClass.DISJOINT:
            perm = rng.permutation(n) + 1
            pairs = [(int(perm[2 * k]), int(perm[2 * k + 1])) for k in range(t)]
        case TransvectionClass.UNIQUE_SOURCE:
            pairs = [(i, j) for j, i in _sample_unique(n, t, rng)]
        case TransvectionClass.UNIQUE_DESTINATION:
            pairs = _sample_unique(n, t, rng)
        case TransvectionClass.COMMUTING:
            pairs = _sample_commuting(n, t, rng)
        case TransvectionClass.NONCOMMUTING_CONSECUTIVE:
            pairs = _sample_noncommuting(n, t, rng)

    logger.debug(f"Sampled a '{class_tag}' sequence with n = {n}, t = {t}.")
    return TransvectionSequence(
        n=n, seq=tuple(Transvection(i=i, j=j) for i, j in pairs), class_tag=class_tag
    )


def _sample_unconstrained(n: int, t: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    destinations = rng.integers(1, n + 1, size=t)
    # The source is uniform over the n - 1 indices other than the destination.
    offsets = rng.integers(1, n, size=t)
    sources = (destinations - 1 + offsets) % n + 1
    return [(int(i), int(j)) for i, j in zip(destinations, sources, strict=True)]


def _sample_unique(n: int, t: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Pairs ``(unique, pooled)``: ``t`` distinct indices, each mapped into a disjoint pool."""
    if t == 0:
        return []
    pool_size = int(rng.integers(1, n - t + 1))
    perm = rng.permutation(n) + 1
    unique, pool = perm[:t], perm[t : t + pool_size]
    partners = rng.choice(pool, size=t, replace=True)
    return [(int(u), int(p)) for u, p in zip(unique, partners, strict=True)]


def _sample_commuting(n: int, t: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if t == 0:
        return []
    feasible = [d for d in range(1, n) if d * (n - d) >= t]
    d = int(rng.choice(feasible))
    perm = rng.permutation(n) + 1
    destinations, sources = perm[:d], perm[d:]
    cells = rng.choice(d * (n - d), size=t, replace=False)
    return [(int(destinations[c // (n - d)]), int(sources[c % (n - d)])) for c in cells]


def _sample_noncommuting(n: int, t: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    pairs = _sample_unconstrained(n, min(t, 1), rng)
    while len(pairs) < t:
        i, j = pairs[-1]
        # Transvections sharing the previous source as destination, or its destination as source.
        candidates = [(j, k) for k in range(1, n + 1) if k != j]
        candidates += [(k, i) for k in range(1, n + 1) if k != i and (k, i) != (j, i)]
        pairs.append(candidates[int(rng.integers(len(candidates)))])
    return pairs


def format_sequence(s: TransvectionSequence) -> str:
    """Sequence text format: a line ``n t class_tag``, then ``t`` lines ``i j``."""
    body = "".join(f"{tau.i} {tau.j}\n" for tau in s.seq)
    return f"{s.n} {s.t} {s.class_tag}\n{body}"


def parse_sequence(text: str) -> TransvectionSequence:
    """Inverse of :func:`format_sequence`.

    Raises:
        ValueError: If the header is malformed or announces a different length.
    """
    lines = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not lines or len(lines[0]) != 3:
        msg = "A sequence header must read 'n t class_tag'."
        raise ValueError(msg)
    n, t, class_tag = int(lines[0][0]), int(lines[0][1]), lines[0][2]
    pairs = lines[1:]
    if len(pairs) != t:
        msg = f"Sequence header announces {t} transvections but {len(pairs)} were given."
        raise ValueError(msg)
    return TransvectionSequence(
        n=n,
        seq=tuple(Transvection(i=int(i), j=int(j)) for i, j in pairs),
        class_tag=TransvectionClass(class_tag),
    )
