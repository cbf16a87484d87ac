"""The ``tsaom`` command.

Subcommands: ``gen``, ``eval``, ``spectrum``, ``solve``, ``km-solve``,
``run``, ``bench`` and ``ecdf``. Data goes to stdout or to ``--out``; status
messages and logs go to stderr.

Exit codes:

- 0: success (for solvers, the returned point is optimal).
- 1: usage error, unreadable input or invalid spec.
- 2: class or range violation, including a non-optimal solver answer.
- 3: budget or cap exceeded, or no optimum found within the attempts.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

import numpy as np
import pandas as pd

from tsaom import __version__
from tsaom.aom import (
    CLASS_CHOICES,
    CountingOracle,
    dump_instance,
    evaluate,
    optimum,
    read_instance,
    sample_function,
)
from tsaom.base import match_arg
from tsaom.bench import ecdf, load_experiment_spec, run_experiment, write_outputs
from tsaom.cli.elements import alert_danger, alert_info, alert_success, alert_warning, bullets, h2
from tsaom.errors import (
    BudgetExceededError,
    ClassViolationError,
    NotFoundError,
    SequenceLengthError,
    SpectrumSizeError,
    TsaomError,
)
from tsaom.gf2 import BitVec
from tsaom.heuristics import parse_run_file, run
from tsaom.km import PRESETS, KmParams, format_report, km_attempts, preset_params
from tsaom.solvers import SOLVERS, format_result, solve_ft_enumerate
from tsaom.spectrum import analytic_spectrum, walsh_transform

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_BUDGET = 3

SOLVER_CHOICES = [*SOLVERS, "ft_enum", "km"]


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        alert_danger(message)
        sys.exit(EXIT_USAGE)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
        alert_success(f"Wrote '{out}'.")


def _generator(args: argparse.Namespace) -> np.random.Generator:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy)
        alert_info(f"seed: {args.seed}")
    return np.random.default_rng(args.seed)


def cmd_gen(args: argparse.Namespace) -> int:
    """Sample an instance and write it."""
    function_class = match_arg(args.function_class, CLASS_CHOICES)
    rng = _generator(args)
    f = sample_function(args.n, function_class, args.t, rng)
    _write(dump_instance(f), args.out)
    if args.reveal_optimum:
        alert_info(f"optimum: {optimum(f)}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Print the value of every given point."""
    f = read_instance(args.instance)
    points = list(args.points)
    if args.points_file is not None:
        text = Path(args.points_file).read_text(encoding="utf-8")
        points += [line.strip() for line in text.splitlines() if line.strip()]
    lines = [f"{x} {evaluate(f, BitVec.parse(x))}\n" for x in points]
    _write("".join(lines), args.out)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Dump the Walsh spectrum of an instance."""
    f = read_instance(args.instance)
    mode = match_arg(args.mode, ["analytic", "bruteforce"])
    spectrum = analytic_spectrum(f) if mode == "analytic" else walsh_transform(f)
    _write(spectrum.dump(), args.out)
    return EXIT_OK


def _km_params(args: argparse.Namespace, n: int) -> KmParams:
    params = preset_params(match_arg(args.preset, list(PRESETS)), n, args.delta)
    overrides = {
        key: getattr(args, key, None) for key in ("m1", "m2", "m3", "threshold")
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    return params.model_copy(update=overrides) if overrides else params


def _solve_km(args: argparse.Namespace, oracle: CountingOracle) -> int:
    params = _km_params(args, oracle.n)
    reports = km_attempts(oracle, params, _generator(args), args.max_attempts)
    _write(format_report(reports[-1]) + f"attempts: {len(reports)}\n", args.out)
    alert_success(f"Optimum found with {oracle.eval_count} evaluations.")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    """Maximize an instance with one of the exact solvers or the KM learner."""
    f = read_instance(args.instance)
    solver = match_arg(args.solver, SOLVER_CHOICES)
    oracle = CountingOracle(f, budget=args.budget)

    if solver == "km":
        return _solve_km(args, oracle)
    if solver == "ft_enum":
        if args.t is None:
            msg = "The ft_enum solver needs --t."
            raise ValueError(msg)
        result = solve_ft_enumerate(oracle, f.n, args.t, cap=args.cap)
    else:
        result = SOLVERS[solver](oracle, f.n)

    value = evaluate(f, result.solution)
    _write(format_result(result, value), args.out)
    if value != f.n:
        alert_danger(f"The {solver} solver returned a point of value {value} < {f.n}.")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_km_solve(args: argparse.Namespace) -> int:
    """Maximize an instance with the KM learner."""
    f = read_instance(args.instance)
    return _solve_km(args, CountingOracle(f, budget=args.budget))


def cmd_run(args: argparse.Namespace) -> int:
    """Run one search algorithm on an instance."""
    f = read_instance(args.instance)
    lines = []
    if args.run_file is not None:
        lines.append(Path(args.run_file).read_text(encoding="utf-8"))
    if args.algorithm is not None:
        lines.append(f"kind = {args.algorithm}")
    if args.budget is not None:
        lines.append(f"budget = {args.budget}")
    if args.stop_on_optimum:
        lines.append("stop_on_optimum = true")
    lines += list(args.set)
    config = parse_run_file("\n".join(lines))

    record = run(config, CountingOracle(f), _generator(args))
    to_optimum = record.evaluations_to_optimum
    _write(
        f"algorithm: {config.kind.label}\n"
        f"best_value: {record.best_value}\n"
        f"best_point: {record.best_point}\n"
        f"evaluations: {record.evaluations}\n"
        f"evaluations_to_best: {record.evaluations_to_best}\n"
        f"evaluations_to_optimum: {'' if to_optimum is None else to_optimum}\n",
        args.out,
    )
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Run an experiment spec and write its result files."""
    spec = load_experiment_spec(args.spec, args.profile)
    if args.workers is not None:
        spec = spec.model_copy(update={"workers": args.workers})
    h2(spec.name)
    table = run_experiment(spec, progress=args.progress)
    out = Path(args.out) if args.out is not None else Path("results") / spec.name
    paths = write_outputs(table, spec, out)
    capped = int(table.rows["capped"].sum())
    if capped:
        alert_warning(f"{capped} run(s) reached the runtime cap.")
    alert_success(f"{len(table)} runs written to '{out}'.")
    bullets({kind: str(path) for kind, path in paths.items()})
    return EXIT_OK


def cmd_ecdf(args: argparse.Namespace) -> int:
    """Compute ECDF curves from a trajectory table written by ``bench``."""
    trajectories = pd.read_csv(args.trajectories)
    curves = ecdf(trajectories, args.targets)
    _write(curves.to_csv(index=False, lineterminator="\n"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``tsaom`` command."""
    parser = _Parser(
        prog="tsaom",
        description="Affine OneMax functions over GF(2): generate, solve, learn and benchmark.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="log INFO (-v) or DEBUG (-vv) to stderr"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def with_seed(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--seed", type=int, help="random seed; generated and printed if omitted")

    def with_out(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--out", help="output file (default: stdout)")

    gen = commands.add_parser("gen", help="sample an AOM or TS-AOM instance")
    gen.add_argument("--n", type=int, required=True, help="dimension")
    gen.add_argument(
        "--class",
        dest="function_class",
        default="general",
        help=f"function class: {', '.join(CLASS_CHOICES)} (prefixes accepted)",
    )
    gen.add_argument("--t", type=int, default=0, help="sequence length (TS-AOM classes)")
    gen.add_argument("--reveal-optimum", action="store_true", help="print the optimum to stderr")
    with_seed(gen)
    with_out(gen)
    gen.set_defaults(handler=cmd_gen)

    evaluate_ = commands.add_parser("eval", help="evaluate points of an instance")
    evaluate_.add_argument("instance", help="instance file")
    evaluate_.add_argument("points", nargs="*", help="points as bit strings")
    evaluate_.add_argument("--points-file", help="file with one bit string per line")
    with_out(evaluate_)
    evaluate_.set_defaults(handler=cmd_eval)

    spectrum = commands.add_parser("spectrum", help="dump the Walsh spectrum of an instance")
    spectrum.add_argument("instance", help="instance file")
    spectrum.add_argument("--mode", default="analytic", help="analytic or bruteforce")
    with_out(spectrum)
    spectrum.set_defaults(handler=cmd_spectrum)

    def with_km(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--preset", default="practical", help=f"KM preset: {', '.join(PRESETS)}")
        sub.add_argument("--delta", type=float, default=0.5, help="KM failure probability")
        sub.add_argument(
            "--max-attempts", type=int, default=10, help="KM attempts before giving up"
        )

    solve = commands.add_parser("solve", help="maximize an instance with an exact solver")
    solve.add_argument("instance", help="instance file")
    solve.add_argument("--solver", required=True, help=f"one of {', '.join(SOLVER_CHOICES)}")
    solve.add_argument("--t", type=int, help="sequence length for ft_enum")
    solve.add_argument("--cap", type=int, help="worst-case evaluation cap for ft_enum")
    solve.add_argument("--budget", type=int, help="oracle evaluation budget")
    with_km(solve)
    with_seed(solve)
    with_out(solve)
    solve.set_defaults(handler=cmd_solve)

    km_solve = commands.add_parser("km-solve", help="learn and maximize with the KM learner")
    km_solve.add_argument("instance", help="instance file")
    km_solve.add_argument("--m1", type=int, help="suffix samples per energy estimate")
    km_solve.add_argument("--m2", type=int, help="prefix samples per inner estimate")
    km_solve.add_argument("--m3", type=int, help="samples per sign estimate")
    km_solve.add_argument("--threshold", type=float, help="expansion threshold")
    km_solve.add_argument("--budget", type=int, help="oracle evaluation budget")
    with_km(km_solve)
    with_seed(km_solve)
    with_out(km_solve)
    km_solve.set_defaults(handler=cmd_km_solve)

    run_ = commands.add_parser("run", help="run one search algorithm on an instance")
    run_.add_argument("instance", help="instance file")
    run_.add_argument("--algorithm", help="rs, rls, hc, sa, ea, ea10, ga, umda or pbil")
    run_.add_argument("--budget", type=int, help="evaluation budget")
    run_.add_argument("--run-file", help="file of 'key = value' parameter lines")
    run_.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE", help="override a parameter"
    )
    run_.add_argument("--stop-on-optimum", action="store_true", help="stop at value n")
    with_seed(run_)
    with_out(run_)
    run_.set_defaults(handler=cmd_run)

    bench = commands.add_parser("bench", help="run an experiment spec")
    bench.add_argument("spec", help="experiment spec file (YAML)")
    bench.add_argument("--profile", help="spec profile merged over 'default'")
    bench.add_argument("--out", help="output directory (default: results/<name>)")
    bench.add_argument("--workers", type=int, help="worker processes")
    bench.add_argument("--progress", action="store_true", help="show a progress bar")
    bench.set_defaults(handler=cmd_bench)

    ecdf_ = commands.add_parser("ecdf", help="ECDF curves from a trajectory table")
    ecdf_.add_argument("trajectories", help="trajectory CSV written by bench")
    ecdf_.add_argument("--targets", type=int, nargs="+", help="target values")
    with_out(ecdf_)
    ecdf_.set_defaults(handler=cmd_ecdf)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``tsaom`` command; returns the exit code."""
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )

    try:
        return args.handler(args)
    except (ClassViolationError, SequenceLengthError, SpectrumSizeError) as err:
        alert_danger(str(err))
        return EXIT_VIOLATION
    except (BudgetExceededError, NotFoundError) as err:
        alert_danger(str(err))
        return EXIT_BUDGET
    except (TsaomError, ValueError, TypeError, OSError) as err:
        alert_danger(str(err))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
