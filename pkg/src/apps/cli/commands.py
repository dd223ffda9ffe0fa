"""
Command line interface: `rjd-nest {run,sequence,radius-scaling,check}`.

Exit status: 0 when the result is accepted, 2 when a rerun with more steps
is recommended, 1 on any error (including invalid arguments).
"""

import argparse
import logging
import sys
from pathlib import Path

from apps.cli import experiments
from apps.cli.models import ExitStatus
from apps.core.exceptions import PreconditionError, RjdError
from apps.core.models import RunConfig
from apps.diagnostics.insertion import insertion_order_ks
from apps.diagnostics.models import Recommendation
from apps.diagnostics.rjd import summarize
from apps.problems.catalog import available_problems, get_problem
from apps.report.writers import (
    atomic_write,
    read_trace,
    write_radius_scaling,
    write_sequence_table,
)
from config import settings

logger = logging.getLogger(__name__)


class CommandError(Exception):
    """Invalid command line usage."""


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message):
        raise CommandError(f"{self.prog}: {message}")


def _int_list(value):
    try:
        items = [int(item) for item in value.split(",") if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"not a comma separated list: {value}") from err
    if not items:
        raise argparse.ArgumentTypeError("the list is empty")
    return items


def _add_common_arguments(parser):
    parser.add_argument(
        "--nlive", type=int, default=settings.NUM_LIVE, help="Number of live points K."
    )
    parser.add_argument("--seed", type=int, default=1, help="Root random seed.")
    parser.add_argument(
        "--output-dir",
        type=Path,
        default=settings.OUTPUT_DIR,
        help="Directory receiving one sub-directory per run (env RJD_OUTPUT_DIR).",
    )
    parser.add_argument(
        "--log-level", default=None, help="Overrides RJD_LOG_LEVEL for this command."
    )


def _add_run_arguments(parser):
    parser.add_argument(
        "--problem", required=True, help=f"One of {', '.join(available_problems())}."
    )
    parser.add_argument(
        "--bins-per-decade", type=int, default=settings.BINS_PER_DECADE
    )
    parser.add_argument("--radius-update-interval", type=int, default=None)
    parser.add_argument(
        "--bootstrap-rounds", type=int, default=settings.BOOTSTRAP_ROUNDS
    )
    parser.add_argument(
        "--termination-frac", type=float, default=settings.TERMINATION_FRAC
    )
    parser.add_argument("--max-iterations", type=int, default=None)


def create_parser():
    parser = CommandParser(
        prog="rjd-nest",
        description="Nested sampling with the relative jump distance diagnostic.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="Single nested sampling run.")
    _add_common_arguments(run_parser)
    _add_run_arguments(run_parser)
    run_parser.add_argument(
        "--nsteps", type=int, default=None, help="Slice steps M (default: d)."
    )
    run_parser.set_defaults(handler=cmd_run)

    sequence_parser = subparsers.add_parser(
        "sequence", help="Runs with d, 2d, 4d, ... steps and the rerun decision."
    )
    _add_common_arguments(sequence_parser)
    _add_run_arguments(sequence_parser)
    sequence_parser.add_argument(
        "--nsteps", type=int, default=None, help="First schedule entry (default: d)."
    )
    sequence_parser.add_argument("--num-runs", type=int, default=4)
    sequence_parser.add_argument(
        "--schedule",
        type=_int_list,
        default=None,
        help="Explicit doubling schedule, e.g. 10,20,40.",
    )
    sequence_parser.add_argument("--max-steps", type=int, default=None)
    sequence_parser.add_argument(
        "--jobs", type=int, default=1, help="Runs executed in parallel processes."
    )
    sequence_parser.set_defaults(handler=cmd_sequence)

    scaling_parser = subparsers.add_parser(
        "radius-scaling", help="Reference radius of synthetic live sets."
    )
    _add_common_arguments(scaling_parser)
    scaling_parser.add_argument("--nlive-list", type=_int_list, default=[100, 400])
    scaling_parser.add_argument(
        "--ndim-list", type=_int_list, default=[2, 4, 8, 16, 128]
    )
    scaling_parser.add_argument("--repeats", type=int, default=40)
    scaling_parser.add_argument(
        "--distribution", choices=experiments.DISTRIBUTIONS, default="ball"
    )
    scaling_parser.add_argument(
        "--bootstrap-rounds", type=int, default=settings.BOOTSTRAP_ROUNDS
    )
    scaling_parser.set_defaults(handler=cmd_radius_scaling)

    check_parser = subparsers.add_parser(
        "check", help="Recompute the verdict of an existing trace file."
    )
    check_parser.add_argument("trace", type=Path, help="trace.csv of a run.")
    check_parser.add_argument("--log-level", default=None)
    check_parser.set_defaults(handler=cmd_check)
    return parser


def _run_config(args, problem, num_steps, seed):
    return RunConfig(
        num_steps=num_steps,
        num_live=args.nlive,
        termination_frac=args.termination_frac,
        bootstrap_rounds=args.bootstrap_rounds,
        seed=seed,
        radius_update_interval=args.radius_update_interval,
        max_iterations=args.max_iterations,
    ).clean(problem.ndim)


def _verdict_line(result, recommendation):
    summary = result.summary
    test = result.insertion_test
    diagnostics = (
        f"gm_rjd={summary.geometric_mean_rjd:.3f} "
        f"f(rjd>1)={summary.frac_rjd_above_1:.3f} {summary.verdict.value}"
        if summary
        else "no jumps recorded"
    )
    ks = f" ks_p={test.p_value:.3g}" if test else ""
    return (
        f"{result.problem_name} K={result.num_live} M={result.num_steps} "
        f"seed={result.seed}: logz={result.logz:.3f} +- {result.logz_err:.3f} "
        f"{diagnostics}{ks} -> {recommendation.value}"
    )


def _exit_status(recommendation):
    if recommendation is Recommendation.RERUN_DOUBLED:
        return ExitStatus.RERUN
    return ExitStatus.ACCEPT


def cmd_run(args):
    problem = get_problem(args.problem)
    config = _run_config(args, problem, args.nsteps or problem.ndim, args.seed)
    result = experiments.perform_run(problem.name, config)
    recommendation = experiments.recommend(result)
    experiments.save_run(
        result, problem, args.output_dir, args.bins_per_decade, recommendation
    )
    print(_verdict_line(result, recommendation))
    return _exit_status(recommendation)


def _sequence_schedule(args, problem):
    if args.schedule:
        return experiments.check_schedule(args.schedule, args.max_steps)
    return experiments.doubling_schedule(
        args.nsteps or problem.ndim, args.num_runs, args.max_steps
    )


def cmd_sequence(args):
    problem = get_problem(args.problem)
    schedule = _sequence_schedule(args, problem)
    configs = experiments.sequence_configs(
        _run_config(args, problem, schedule[0], args.seed), schedule
    )
    for config in configs:
        config.clean(problem.ndim)

    table_path = (
        args.output_dir
        / f"{problem.name}-K{args.nlive}-sequence-s{args.seed}"
        / experiments.SEQUENCE_FILE
    )
    results = []
    recommendation = None
    try:
        for result in experiments.iter_sequence(
            problem.name, configs, jobs=args.jobs, log_level=args.log_level
        ):
            previous = results[-1] if results else None
            recommendation = experiments.recommend(result, previous)
            experiments.save_run(
                result, problem, args.output_dir, args.bins_per_decade, recommendation
            )
            print(_verdict_line(result, recommendation))
            results.append(result)
    finally:
        if results:
            with atomic_write(table_path) as sink:
                write_sequence_table(results, sink)
            logger.info("sequence table written to %s", table_path)

    print(f"recommendation: {recommendation.value}")
    return _exit_status(recommendation)


def cmd_radius_scaling(args):
    rows = experiments.radius_scaling(
        args.nlive_list,
        args.ndim_list,
        repeats=args.repeats,
        distribution=args.distribution,
        bootstrap_rounds=args.bootstrap_rounds,
        seed=args.seed,
    )
    path = args.output_dir / f"radius-scaling-{args.distribution}-s{args.seed}.csv"
    with atomic_write(path) as sink:
        write_radius_scaling(rows, sink)
    logger.info("radius scaling table written to %s", path)
    for row in rows:
        print(
            f"K={row.num_live} d={row.ndim}: r={row.mean_r:.3f} +- {row.std_r:.3f} "
            f"predicted={row.predicted_r:.3f}"
        )
    return ExitStatus.ACCEPT


def cmd_check(args):
    with open(args.trace, "rb") as source:
        trace = read_trace(source)
    records = [line.to_iteration() for line in trace]
    if not any(record.r > 0 for record in records):
        raise PreconditionError(f"{args.trace}: no jump with a positive radius")

    summary = summarize(records)
    test = insertion_order_ks(records, trace[0].num_live)
    print(
        f"{args.trace}: {summary.num_jumps} jumps, "
        f"gm_rjd={summary.geometric_mean_rjd:.3f} "
        f"f(rjd>1)={summary.frac_rjd_above_1:.3f} esjd={summary.esjd:.3g} "
        f"ks_p={test.p_value:.3g} -> {summary.verdict.value}"
    )
    return ExitStatus.ACCEPT if summary.trustworthy else ExitStatus.RERUN


def execute_from_command_line(argv=None):
    """
    Parse `argv` (without the program name) and run the chosen subcommand.

    Returns:
        int: The exit status.
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except CommandError as err:
        print(err, file=sys.stderr)
        return ExitStatus.ERROR

    settings.configure_logging(args.log_level)
    try:
        return int(args.handler(args))
    except (RjdError, OSError) as err:
        logger.error("%s failed: %s", args.command, err)
        print(f"error: {err}", file=sys.stderr)
        return ExitStatus.ERROR


def main():
    sys.exit(execute_from_command_line(sys.argv[1:]))
