"""Black-box search algorithms for the benchmark."""

from tsaom.heuristics.algorithms import ALGORITHMS, run
from tsaom.heuristics.config import AlgorithmConfig, AlgorithmKind, parse_run_file
from tsaom.heuristics.monitor import RunRecord, SearchMonitor, SearchStopped

__all__ = [
    "ALGORITHMS",
    "AlgorithmConfig",
    "AlgorithmKind",
    "RunRecord",
    "SearchMonitor",
    "SearchStopped",
    "parse_run_file",
    "run",
]
