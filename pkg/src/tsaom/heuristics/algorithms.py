"""The nine black-box search algorithms.

Every algorithm loops until its :class:`~tsaom.heuristics.monitor.SearchMonitor`
stops it. Points are ``uint8`` arrays; each run draws all its randomness
from the generator it is given, so a seed fixes the run.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from tsaom.heuristics.config import AlgorithmConfig, AlgorithmKind
from tsaom.heuristics.monitor import RunRecord, SearchMonitor, SearchStopped

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from tsaom.aom import CountingOracle

logger = logging.getLogger(__name__)

Algorithm = Callable[[SearchMonitor, AlgorithmConfig, np.random.Generator], None]


def _uniform(rng: np.random.Generator, *shape: int) -> NDArray[np.uint8]:
    return rng.integers(0, 2, size=shape, dtype=np.uint8)


def _mutate(x: NDArray[np.uint8], rate: float, rng: np.random.Generator) -> NDArray[np.uint8]:
    """Standard bit mutation: flip every bit independently with probability ``rate``."""
    return x ^ (rng.random(x.shape) < rate).astype(np.uint8)


def _clamp_bounds(n: int) -> tuple[float, float]:
    low = min(1 / n, 0.5)
    return low, 1 - low


def random_search(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """Independent uniform samples, evaluated in batches."""
    while True:
        size = min(config.batch_size, max(monitor.remaining, 1))
        monitor.evaluate_batch(_uniform(rng, size, monitor.n))


def random_local_search(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """Single-bit-flip local search with restarts.

    Each sweep tries the ``n`` bits in random order and keeps a flip whose value
    is not worse. A sweep without a strict improvement restarts the search
    from a uniform point.
    """
    del config
    n = monitor.n
    while True:
        x = _uniform(rng, n)
        fx = monitor.evaluate(x)
        improved = True
        while improved:
            improved = False
            for i in rng.permutation(n):
                x[i] ^= 1
                fy = monitor.evaluate(x)
                if fy >= fx:
                    improved = improved or fy > fx
                    fx = fy
                else:
                    x[i] ^= 1
        logger.debug(f"RLS restart after reaching {fx}.")


def hill_climbing(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """Steepest ascent over the ``n`` single-bit neighbors, restarting at strict local optima.

    The climber moves to a best neighbor, chosen uniformly among ties, as long
    as it is not worse than the current point; a tying neighbor is a move, not
    a stop. It restarts from a uniform point only when every neighbor is
    strictly worse.
    """
    del config
    n = monitor.n
    flips = np.eye(n, dtype=np.uint8)
    while True:
        x = _uniform(rng, n)
        fx = monitor.evaluate(x)
        while True:
            neighbors = x ^ flips
            values = monitor.evaluate_batch(neighbors)
            top = int(values.max())
            if top < fx:
                break
            choice = rng.choice(np.flatnonzero(values == top))
            x, fx = neighbors[choice].copy(), top


def simulated_annealing(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """Single-bit-flip proposals accepted with probability ``min(1, exp(delta / T))``.

    The temperature starts at ``initial_temperature`` and is multiplied by
    ``cooling_rate`` after every proposal.
    """
    n = monitor.n
    x = _uniform(rng, n)
    fx = monitor.evaluate(x)
    temperature = config.initial_temperature
    while True:
        i = rng.integers(n)
        x[i] ^= 1
        fy = monitor.evaluate(x)
        delta = fy - fx
        if delta >= 0 or (temperature > 0 and rng.random() < math.exp(delta / temperature)):
            fx = fy
        else:
            x[i] ^= 1
        temperature *= config.cooling_rate


def one_plus_one_ea(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """(1+1) EA: standard bit mutation, the offspring replaces the parent if not worse."""
    rate = config.rate(monitor.n)
    x = _uniform(rng, monitor.n)
    fx = monitor.evaluate(x)
    while True:
        y = _mutate(x, rate, rng)
        fy = monitor.evaluate(y)
        if fy >= fx:
            x, fx = y, fy


def mu_plus_one_ea(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """(mu+1) EA: mutate a uniformly chosen parent, replace a worst individual if not worse."""
    mu = config.population
    rate = config.rate(monitor.n)
    population = _uniform(rng, mu, monitor.n)
    fitness = monitor.evaluate_batch(population).copy()
    while True:
        child = _mutate(population[rng.integers(mu)], rate, rng)
        value = monitor.evaluate(child)
        worst = int(np.argmin(fitness))
        if value >= fitness[worst]:
            population[worst] = child
            fitness[worst] = value


def genetic_algorithm(
    monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator
) -> None:
    """Generational GA with tournament selection, uniform crossover, bit mutation and elitism."""
    n = monitor.n
    size = config.population
    elite_count = config.elitism
    offspring = size - elite_count
    rate = config.rate(n)
    rows = np.arange(2 * offspring)

    population = _uniform(rng, size, n)
    fitness = monitor.evaluate_batch(population)
    while True:
        elite = np.argsort(-fitness, kind="stable")[:elite_count]

        contenders = rng.integers(0, size, size=(2 * offspring, config.tournament_size))
        winners = contenders[rows, np.argmax(fitness[contenders], axis=1)]
        parents = population[winners].reshape(offspring, 2, n)

        mask = rng.random((offspring, n)) < 0.5
        crossed = np.where(mask, parents[:, 0], parents[:, 1])
        cross = rng.random(offspring) < config.crossover_rate
        children = _mutate(np.where(cross[:, None], crossed, parents[:, 0]), rate, rng)

        values = monitor.evaluate_batch(children)
        population = np.concatenate([population[elite], children])
        fitness = np.concatenate([fitness[elite], values])


def umda(monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator) -> None:
    """UMDA: fit the marginals to the best half of each sample, clamped to ``[1/n, 1 - 1/n]``."""
    n = monitor.n
    low, high = _clamp_bounds(n)
    probabilities = np.full(n, 0.5)
    while True:
        samples = (rng.random((config.population, n)) < probabilities).astype(np.uint8)
        values = monitor.evaluate_batch(samples)
        selected = samples[np.argsort(-values, kind="stable")[: config.selected]]
        probabilities = np.clip(selected.mean(axis=0), low, high)


def pbil(monitor: SearchMonitor, config: AlgorithmConfig, rng: np.random.Generator) -> None:
    """PBIL: move the probability vector towards the best sample of each generation."""
    n = monitor.n
    low, high = _clamp_bounds(n)
    rho = config.learning_rate
    probabilities = np.full(n, 0.5)
    while True:
        samples = (rng.random((config.population, n)) < probabilities).astype(np.uint8)
        values = monitor.evaluate_batch(samples)
        best = samples[int(np.argmax(values))]
        probabilities = np.clip((1 - rho) * probabilities + rho * best, low, high)


ALGORITHMS: dict[AlgorithmKind, Algorithm] = {
    AlgorithmKind.RS: random_search,
    AlgorithmKind.RLS: random_local_search,
    AlgorithmKind.HC: hill_climbing,
    AlgorithmKind.SA: simulated_annealing,
    AlgorithmKind.EA: one_plus_one_ea,
    AlgorithmKind.EA10: mu_plus_one_ea,
    AlgorithmKind.GA: genetic_algorithm,
    AlgorithmKind.UMDA: umda,
    AlgorithmKind.PBIL: pbil,
}


def run(config: AlgorithmConfig, oracle: CountingOracle, rng: np.random.Generator) -> RunRecord:
    """Run one algorithm on an oracle until its budget is spent or it stops on the optimum.

    Args:
        config: The algorithm and its parameters.
        oracle: The function to maximize. Its own budget, if any, also bounds the run.
        rng: Source of every random decision of the run.

    Returns:
        The record of the run.
    """
    monitor = SearchMonitor(oracle, config)
    try:
        ALGORITHMS[config.kind](monitor, config, rng)
    except SearchStopped:
        pass
    record = monitor.record()
    logger.debug(
        f"{config.kind.label} finished: best {record.best_value} after "
        f"{record.evaluations_to_best} of {record.evaluations} evaluations."
    )
    return record
