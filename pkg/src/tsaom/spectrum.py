"""Walsh analysis of pseudo-Boolean functions.

The coefficient of ``f`` at ``u`` is ``2^-n sum_x f(x) (-1)^(x.u)``. The
spectrum of an AOM function ``onemax(Mx + b)`` has ``n + 1`` nonzero entries:
``n/2`` at ``u = 0`` and ``-(-1)^(b_i)/2`` at row ``i`` of ``M``.

The normalized functions ``g = 2f/n - 1`` and ``h = 2f - n`` feed the
learner in :mod:`tsaom.km`. Restrictions ``g_u`` split points as ``uv`` with
the prefix ``u`` on the first coordinates, using the index helpers of
:mod:`tsaom.gf2`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from tsaom.aom import AomFunction, Evaluator, value_table
from tsaom.errors import SpectrumSizeError
from tsaom.gf2 import BitVec, all_points, concat_points, dot, from_index, prefix_range, to_index

if TYPE_CHECKING:
    from collections.abc import Iterator

    from numpy.typing import ArrayLike, NDArray

#: Largest dimension accepted by the brute-force transform.
MAX_TRANSFORM_DIMENSION = 24

#: Largest dimension accepted by the exact restricted-energy computations.
MAX_RESTRICTED_DIMENSION = 16


@dataclass(frozen=True)
class Spectrum:
    """Sparse Walsh spectrum: only nonzero coefficients are stored.

    Attributes:
        n: Dimension.
        coeffs: Map from feature vector ``u`` to its coefficient.
    """

    n: int
    coeffs: dict[BitVec, float] = field(default_factory=dict)

    def __getitem__(self, u: BitVec) -> float:
        return self.coeffs.get(u, 0.0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[BitVec]:
        return iter(sorted(self.coeffs))

    @property
    def support(self) -> set[BitVec]:
        """Feature vectors with a nonzero coefficient."""
        return set(self.coeffs)

    def energy(self) -> float:
        """Sum of squared coefficients, ``E(f^2)`` by Parseval."""
        return float(sum(value**2 for value in self.coeffs.values()))

    def to_dense(self) -> NDArray[np.float64]:
        """Coefficients as a ``2**n`` array in index order."""
        dense = np.zeros(2**self.n, dtype=np.float64)
        for u, value in self.coeffs.items():
            dense[to_index(u)] = value
        return dense

    def dump(self) -> str:
        """Spectrum text: lines ``u_bits coefficient`` sorted by ``u``."""
        return "".join(f"{u} {self.coeffs[u]!r}\n" for u in self)

    def isclose(self, other: Spectrum, atol: float = 1e-12) -> bool:
        """Whether both spectra have the same support and coefficients within ``atol``."""
        if self.n != other.n:
            return False
        keys = self.support | other.support
        return all(abs(self[u] - other[u]) <= atol for u in keys)


def _fwht(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Unnormalized fast Walsh-Hadamard transform of a ``2**n`` vector."""
    size = values.size
    out = np.array(values, dtype=np.float64)
    half = 1
    while half < size:
        blocks = out.reshape(-1, 2, half)
        left, right = blocks[:, 0, :], blocks[:, 1, :]
        out = np.stack([left + right, left - right], axis=1).reshape(size)
        half *= 2
    return out


def _dimension_of(size: int) -> int:
    n = size.bit_length() - 1
    if size < 1 or 2**n != size:
        msg = f"A function table must have 2**n entries, got {size}."
        raise ValueError(msg)
    return n


def walsh_coefficients(table: ArrayLike) -> NDArray[np.float64]:
    """Dense coefficients ``2^-n sum_x f(x) (-1)^(x.u)`` for every ``u``, in index order.

    Args:
        table: The ``2**n`` function values in index order.
    """
    values = np.asarray(table, dtype=np.float64).ravel()
    _dimension_of(values.size)
    return _fwht(values) / values.size


def inverse_transform(spectrum: Spectrum) -> NDArray[np.float64]:
    """Rebuild the ``2**n`` function values from a spectrum."""
    return _fwht(spectrum.to_dense())


def _table_of(source: ArrayLike | Evaluator, n: int | None) -> NDArray[np.float64]:
    if isinstance(source, AomFunction):
        return value_table(source).astype(np.float64)
    if hasattr(source, "evaluate_batch"):
        dimension = source.n if n is None else n
        return np.asarray(source.evaluate_batch(all_points(dimension)), dtype=np.float64)
    return np.asarray(source, dtype=np.float64).ravel()


def _check_transform_size(n: int) -> None:
    if n > MAX_TRANSFORM_DIMENSION:
        msg = f"The brute-force transform is limited to n <= {MAX_TRANSFORM_DIMENSION}, got {n}."
        raise SpectrumSizeError(msg)


def walsh_transform(
    source: ArrayLike | Evaluator, n: int | None = None, *, tol: float = 1e-12
) -> Spectrum:
    """Brute-force spectrum of a function given by its table or by evaluation access.

    Args:
        source: A table of ``2**n`` values, an AOM function or any evaluator.
        n: Dimension; inferred from the source when omitted.
        tol: Coefficients with magnitude at most ``tol`` are dropped.

    Raises:
        SpectrumSizeError: If ``n`` exceeds :data:`MAX_TRANSFORM_DIMENSION`.
    """
    if n is not None:
        _check_transform_size(n)
    elif hasattr(source, "evaluate_batch"):
        _check_transform_size(source.n)
    table = _table_of(source, n)
    dimension = _dimension_of(table.size)
    _check_transform_size(dimension)
    dense = walsh_coefficients(table)
    support = np.flatnonzero(np.abs(dense) > tol)
    return Spectrum(
        n=dimension,
        coeffs={from_index(int(index), dimension): float(dense[index]) for index in support},
    )


def analytic_spectrum(f: AomFunction) -> Spectrum:
    """The spectrum of an AOM function read off ``M`` and ``b``: exactly ``n + 1`` entries."""
    coeffs = {BitVec.zeros(f.n): f.n / 2}
    for row, b_i in zip(f.M.rows, f.b, strict=True):
        coeffs[row] = -0.5 if b_i == 0 else 0.5
    return Spectrum(n=f.n, coeffs=coeffs)


def character(u: BitVec, x: BitVec) -> int:
    """The Walsh character ``(-1)^(x.u)``."""
    return 1 - 2 * dot(x, u)


def characters(u: BitVec, X: NDArray[np.uint8]) -> NDArray[np.int64]:
    """The characters ``(-1)^(x.u)`` of every row ``x`` of ``X``."""
    parity = np.count_nonzero(X & u.bits, axis=-1) & 1
    return 1 - 2 * parity.astype(np.int64)


class ScaledFunction:
    """The affine rescaling ``x -> scale * f(x) + shift`` of an evaluator.

    Evaluations go through the wrapped evaluator, so a wrapped counting
    oracle keeps counting.
    """

    def __init__(self, base: Evaluator, scale: float, shift: float) -> None:
        self.base = base
        self.scale = scale
        self.shift = shift

    @property
    def n(self) -> int:
        """Dimension of the wrapped function."""
        return self.base.n

    def __call__(self, x: BitVec) -> float:
        return self.scale * self.base(x) + self.shift

    def evaluate_batch(self, X: ArrayLike) -> NDArray[np.float64]:
        """Rescaled values of every row of ``X``."""
        values = np.asarray(self.base.evaluate_batch(X), dtype=np.float64)
        return self.scale * values + self.shift


def g_normalize(f: Evaluator) -> ScaledFunction:
    """``g = 2f/n - 1``: bounded by 1, with ``n`` coefficients of magnitude ``1/n``."""
    return ScaledFunction(f, scale=2 / f.n, shift=-1.0)


def h_normalize(f: Evaluator) -> ScaledFunction:
    """``h = 2f - n``: coefficients ``+-1`` on the features, positive exactly when ``b_i = 1``."""
    return ScaledFunction(f, scale=2.0, shift=-float(f.n))


def _check_restricted_size(n: int) -> None:
    if n > MAX_RESTRICTED_DIMENSION:
        msg = f"Exact restricted energies are limited to n <= {MAX_RESTRICTED_DIMENSION}, got {n}."
        raise SpectrumSizeError(msg)


def restricted_energy(g: Evaluator, u: BitVec, spectrum: Spectrum | None = None) -> float:
    """Exact ``E(g_u^2)``: the sum of ``g^(uv)^2`` over all suffixes ``v``.

    Args:
        g: The function, evaluated on all ``2**n`` points unless ``spectrum`` is given.
        u: The prefix.
        spectrum: A precomputed spectrum of ``g``, to avoid recomputing it.

    Raises:
        SpectrumSizeError: If ``n`` exceeds :data:`MAX_RESTRICTED_DIMENSION`.
    """
    n = g.n if spectrum is None else spectrum.n
    _check_restricted_size(n)
    dense = (walsh_transform(g) if spectrum is None else spectrum).to_dense()
    block = prefix_range(u, n)
    return float(np.sum(dense[block.start : block.stop] ** 2))


def restricted_value(g: Evaluator, u: BitVec, x: BitVec) -> float:
    """Exact ``g_u(x) = E_y[g(yx) (-1)^(y.u)]`` by enumerating ``y`` over ``{0,1}^|u|``.

    Raises:
        SpectrumSizeError: If ``n`` exceeds :data:`MAX_RESTRICTED_DIMENSION`.
    """
    _check_restricted_size(g.n)
    prefixes = all_points(u.n)
    values = np.asarray(g.evaluate_batch(concat_points(prefixes, x.bits[None, :])))
    return float(np.mean(values * characters(u, prefixes)))
