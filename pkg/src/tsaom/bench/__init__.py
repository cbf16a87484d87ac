"""Experiment harness: fixed-budget tables, runtime curves, ECDFs and result files."""

from tsaom.bench.ecdf import default_targets, ecdf
from tsaom.bench.experiments import (
    ResultTable,
    class_comparison,
    fixed_budget,
    run_experiment,
    runtime_curve,
)
from tsaom.bench.output import write_outputs
from tsaom.bench.spec import Cell, ExperimentKind, ExperimentSpec, load_experiment_spec

__all__ = [
    "Cell",
    "ExperimentKind",
    "ExperimentSpec",
    "ResultTable",
    "class_comparison",
    "default_targets",
    "ecdf",
    "fixed_budget",
    "load_experiment_spec",
    "run_experiment",
    "runtime_curve",
    "write_outputs",
]
