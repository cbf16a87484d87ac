"""Deterministic exact maximizers for TS-AOM sub-classes.

Each solver queries the oracle at chosen points and reads the structure of
the function off the differences of the answers:

- :func:`solve_f1_0` for ``onemax o tau_ij``, by two binary searches.
- :func:`solve_f1` for ``onemax o T_b o tau_ij``, in exactly ``2(n+1)`` evaluations.
- :func:`solve_ft_delta` for commuting sequences with unique source indices.
- :func:`solve_ft_enumerate` for any sequence of length ``t``, by undoing all
  candidate products of ``t - 1`` transvections and calling :func:`solve_f1`.

A query answered with a value the assumed class cannot produce raises
:class:`~tsaom.errors.ClassViolationError`. Only the enumeration verifies its
final answer; the direct solvers trust their class.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, ConfigDict

from tsaom.config import load_defaults
from tsaom.errors import BudgetExceededError, ClassViolationError, NotFoundError
from tsaom.gf2 import BitMat, BitVec, complement, indicator, mat_vec
from tsaom.transvections import (
    Transvection,
    TransvectionSequence,
    all_transvections,
    apply,
    apply_sequence,
    product,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)


class SolveResult(BaseModel):
    """Answer of an exact solver.

    Attributes:
        solution: The point returned by the solver.
        evaluations: Oracle evaluations the solver made.
        recovered: The learned structure, e.g. ``i``, ``j``, ``b`` or the map ``delta``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    solution: BitVec
    evaluations: int
    recovered: dict[str, Any] = {}


class _Query:
    """Counts the evaluations a solver makes through it."""

    def __init__(self, oracle: Callable[[BitVec], int], n: int) -> None:
        self.oracle = oracle
        self.n = n
        self.count = 0

    def __call__(self, x: BitVec) -> int:
        self.count += 1
        return int(self.oracle(x))

    def at(self, coordinates: Sequence[int] | set[int]) -> int:
        return self(indicator(self.n, coordinates))


def split_candidates(candidates: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split a candidate set into halves: the first ``ceil(|K|/2)`` sorted indices, and the rest."""
    ordered = sorted(candidates)
    middle = math.ceil(len(ordered) / 2)
    return ordered[:middle], ordered[middle:]


def _binary_search_index(query: _Query, candidates: list[int], fixed: list[int], c: int) -> int:
    """Find the index of a transvection of ``onemax o tau_ij`` by halving the candidates.

    With ``eps`` the indicator of the first half plus ``fixed``, the answer
    ``onemax(eps) + c`` sends the search to the second half. Any other
    allowed answer sends it to the first half.
    """
    while len(candidates) > 1:
        first, second = split_candidates(candidates)
        eps = set(first) | set(fixed)
        value = query.at(eps)
        weight = len(eps)
        if value == weight + c:
            candidates = second
        elif value in {weight - 1, weight + 1} - {weight + c}:
            candidates = first
        else:
            msg = f"Query at {sorted(eps)} returned {value}, outside the values the class allows."
            raise ClassViolationError(msg)
    return candidates[0]


def solve_f1_0(oracle: Callable[[BitVec], int], n: int) -> SolveResult:
    """Maximize ``onemax o tau_ij`` with at most ``2 ceil(log2 n)`` evaluations.

    The source ``j`` is found first, then the destination ``i`` among the
    other indices. The maximizer is ``1^n + e_i``.

    Raises:
        ClassViolationError: If an answer contradicts the class.
    """
    if n < 2:
        msg = f"The class needs n >= 2, got {n}."
        raise ValueError(msg)
    query = _Query(oracle, n)
    j = _binary_search_index(query, list(range(1, n + 1)), [], 0)
    i = _binary_search_index(query, [k for k in range(1, n + 1) if k != j], [j], 1)
    solution = complement(indicator(n, [i]))
    logger.debug(f"Recovered tau_{i},{j} with {query.count} evaluation(s).")
    return SolveResult(solution=solution, evaluations=query.count, recovered={"i": i, "j": j})


def _sign_bit(difference: int, k: int) -> int:
    """``b_k`` from ``f(e_k) - f(0)``: 0 for +1 and 1 for -1."""
    if difference == 1:
        return 0
    if difference == -1:
        return 1
    msg = f"f(e_{k}) - f(0) = {difference}, expected +-1."
    raise ClassViolationError(msg)


def _first_queries(query: _Query, n: int) -> tuple[int, dict[int, int]]:
    alpha0 = query(BitVec.zeros(n))
    differences = {k: query.at([k]) - alpha0 for k in range(1, n + 1)}
    return alpha0, differences


def solve_f1(oracle: Callable[[BitVec], int], n: int) -> SolveResult:
    """Maximize ``onemax o T_b o tau_ij`` with exactly ``2(n + 1)`` evaluations.

    The source ``j`` is the only index whose response ``f(e_j) - f(0)`` is
    even. The other responses give ``b`` off ``j``, one more query gives
    ``b_j``, and ``i`` is the index ``k`` for which moving from
    ``e_j + eps`` to ``e_j + e_k + eps`` lowers the value.

    Raises:
        ClassViolationError: If the even responders are not exactly one index,
            or another answer contradicts the class.
    """
    if n < 2:
        msg = f"The class needs n >= 2, got {n}."
        raise ValueError(msg)
    query = _Query(oracle, n)
    _, differences = _first_queries(query, n)

    even = [k for k, difference in differences.items() if difference % 2 == 0]
    if len(even) != 1:
        msg = f"Expected exactly one index with an even response, found {even}."
        raise ClassViolationError(msg)
    j = even[0]

    b = {k: _sign_bit(differences[k], k) for k in range(1, n + 1) if k != j}
    eps = [k for k, bit in b.items() if bit]
    b_j = query.at(eps)
    if b_j not in (0, 1):
        msg = f"f(eps) = {b_j}, expected the bit b_{j}."
        raise ClassViolationError(msg)
    b[j] = b_j

    beta_j = query.at([*eps, j])
    drops = []
    for k in range(1, n + 1):
        if k == j:
            continue
        step = query.at([*eps, j, k]) - beta_j
        if step == -1:
            drops.append(k)
        elif step != 1:
            msg = f"Moving along e_{k} changed the value by {step}, expected +-1."
            raise ClassViolationError(msg)
    if len(drops) != 1:
        msg = f"Expected exactly one destination candidate, found {drops}."
        raise ClassViolationError(msg)
    i = drops[0]

    b_vec = BitVec([b[k] for k in range(1, n + 1)])
    solution = apply(Transvection(i=i, j=j), complement(b_vec))
    logger.debug(f"Recovered tau_{i},{j} and b = {b_vec} with {query.count} evaluations.")
    return SolveResult(
        solution=solution,
        evaluations=query.count,
        recovered={"i": i, "j": j, "b": str(b_vec)},
    )


def _search_destination(
    query: _Query, eps: list[int], j: int, beta_j: int, candidates: list[int]
) -> int:
    while len(candidates) > 1:
        first, second = split_candidates(candidates)
        value = query.at([*eps, j, *first]) - beta_j
        if value == len(first):
            candidates = second
        elif value == len(first) - 2:
            candidates = first
        else:
            msg = (
                f"Destination search for source {j} saw a change of {value}, "
                f"expected {len(first)} or {len(first) - 2}."
            )
            raise ClassViolationError(msg)
    return candidates[0]


def solve_ft_delta(oracle: Callable[[BitVec], int], n: int) -> SolveResult:
    """Maximize a TS-AOM function whose sequence commutes and uses each source once.

    The length ``t`` is not needed: the sources ``J`` are the indices with an
    even response ``f(e_k) - f(0)``. At most ``n + t(ceil(log2(n - t)) + 1) + 2``
    evaluations are made.

    Raises:
        ClassViolationError: If an answer contradicts the class.
    """
    query = _Query(oracle, n)
    _, differences = _first_queries(query, n)

    sources = [k for k, difference in differences.items() if difference % 2 == 0]
    others = [k for k in range(1, n + 1) if k not in sources]
    if sources and not others:
        msg = "Every index responded as a source; no destination is left."
        raise ClassViolationError(msg)

    b = {k: _sign_bit(differences[k], k) for k in others}
    eps = [k for k in others if b[k]]
    beta0 = query.at(eps)

    delta: dict[int, int] = {}
    for j in sources:
        beta_j = query.at([*eps, j])
        match beta_j - beta0:
            case 2:
                b[j] = 0
            case 0:
                b[j] = 1
            case step:
                msg = f"f(eps + e_{j}) - f(eps) = {step}, expected 2 or 0."
                raise ClassViolationError(msg)
        delta[j] = _search_destination(query, eps, j, beta_j, others)

    b_vec = BitVec([b[k] for k in range(1, n + 1)])
    sequence = TransvectionSequence(
        n=n, seq=tuple(Transvection(i=delta[j], j=j) for j in sources)
    )
    solution = apply_sequence(sequence, complement(b_vec))
    logger.debug(
        f"Recovered {len(sources)} transvection(s) and b = {b_vec} "
        f"with {query.count} evaluations."
    )
    return SolveResult(
        solution=solution,
        evaluations=query.count,
        recovered={"J": sources, "delta": delta, "b": str(b_vec)},
    )


def ft_delta_bound(n: int, t: int) -> int:
    """Evaluation bound ``n + t(ceil(log2(n - t)) + 1) + 2`` of :func:`solve_ft_delta`."""
    log_term = math.ceil(math.log2(n - t)) if n - t > 1 else 0
    return n + t * (log_term + 1) + 2


def enumeration_bound(n: int, t: int) -> int:
    """Worst-case evaluations of :func:`solve_ft_enumerate`: ``(n(n-1))^(t-1) (2(n+1) + 1)``."""
    return (n * (n - 1)) ** (t - 1) * (2 * (n + 1) + 1)


class _Composed:
    """The oracle ``y -> f(P y)``."""

    def __init__(self, oracle: Callable[[BitVec], int], P: BitMat) -> None:
        self.oracle = oracle
        self.P = P

    def __call__(self, y: BitVec) -> int:
        return self.oracle(mat_vec(self.P, y))


def solve_ft_enumerate(
    oracle: Callable[[BitVec], int], n: int, t: int, cap: int | None = None
) -> SolveResult:
    """Maximize a TS-AOM function of sequence length ``t`` by enumeration.

    For ``f = onemax o T_b o tau_1 ... tau_t`` and ``P = tau_t ... tau_2``,
    ``f o P`` is in the one-transvection class. Every product ``P`` of
    ``t - 1`` transvections is tried in turn: :func:`solve_f1` runs on
    ``f o P`` and its answer ``y`` is accepted when ``f(P y) = n``.

    Args:
        oracle: The function to maximize.
        n: Dimension.
        t: Sequence length, at least 1.
        cap: Largest admissible worst-case evaluation count; defaults to
            ``solvers.enumeration_cap`` of the packaged defaults.

    Raises:
        BudgetExceededError: If the worst case exceeds ``cap``; nothing is evaluated.
        NotFoundError: If no product led to a verified optimum.
    """
    if t < 1:
        msg = f"The enumeration needs t >= 1, got {t}."
        raise ValueError(msg)
    if cap is None:
        cap = int(load_defaults("solvers")["enumeration_cap"])
    bound = enumeration_bound(n, t)
    if bound > cap:
        msg = f"Enumeration may need {bound} evaluations, above the cap of {cap}."
        raise BudgetExceededError(msg)

    query = _Query(oracle, n)
    transvections = all_transvections(n)
    for prefix in itertools.product(transvections, repeat=t - 1):
        P = product(TransvectionSequence(n=n, seq=prefix))
        try:
            inner = solve_f1(_Composed(query, P), n)
        except ClassViolationError:
            continue
        candidate = mat_vec(P, inner.solution)
        if query(candidate) == n:
            logger.debug(
                f"Verified optimum after {query.count} evaluations with prefix "
                f"{[str(tau) for tau in prefix]}."
            )
            return SolveResult(
                solution=candidate,
                evaluations=query.count,
                recovered={
                    **inner.recovered,
                    "prefix": [[tau.i, tau.j] for tau in prefix],
                },
            )
    msg = f"No product of {t - 1} transvection(s) led to an optimum ({query.count} evaluations)."
    raise NotFoundError(msg)


SOLVERS = {
    "f1_0": solve_f1_0,
    "f1": solve_f1,
    "ft_delta": solve_ft_delta,
}


def format_result(result: SolveResult, value: int | None = None) -> str:
    """Result text: solution, value, evaluations and the recovered structure."""
    lines = [f"solution: {result.solution}"]
    if value is not None:
        lines.append(f"value: {value}")
    lines.append(f"evaluations: {result.evaluations}")
    lines += [f"{key}: {val}" for key, val in result.recovered.items()]
    return "\n".join(lines) + "\n"
