"""
Reproducible experiments behind the command line subcommands.
"""

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from apps.cli.models import RadiusScalingRow
from apps.core.exceptions import PreconditionError
from apps.diagnostics.models import Recommendation, RunOutcome
from apps.diagnostics.rjd import decision_rule
from apps.engine.nested import run
from apps.geometry.models import predicted_radius
from apps.geometry.radius import compute_reference_radius
from apps.problems.catalog import get_problem
from apps.report.writers import (
    atomic_write,
    validate_schedule,
    write_histogram,
    write_summary_json,
    write_trace,
    write_trace_jsonl,
    write_weighted_samples,
)
from config import settings

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("ball", "normal")

TRACE_FILE = "trace.csv"
TRACE_JSONL_FILE = "trace.jsonl"
HISTOGRAM_FILE = "histogram.csv"
SUMMARY_FILE = "summary.json"
SAMPLES_FILE = "samples.csv"
SEQUENCE_FILE = "sequence.csv"
RADIUS_SCALING_FILE = "radius_scaling.csv"


def run_directory(output_dir, problem_name, num_live, num_steps, seed):
    return Path(output_dir) / f"{problem_name}-K{num_live}-M{num_steps}-s{seed}"


def perform_run(problem_name, config):
    """Build the problem by name and run it; top level so worker processes can call it."""
    return run(get_problem(problem_name), config)


def save_run(result, problem, output_dir, bins_per_decade, recommendation=None):
    """
    Write the artefacts of one run into its own directory.

    Files: trace.csv, trace.jsonl, histogram.csv, summary.json, samples.csv.
    Each file is written atomically.

    Returns:
        Path: The run directory.
    """
    directory = run_directory(
        output_dir, result.problem_name, result.num_live, result.num_steps, result.seed
    )
    with atomic_write(directory / TRACE_FILE) as sink:
        write_trace(result, sink)
    with atomic_write(directory / TRACE_JSONL_FILE) as sink:
        write_trace_jsonl(result, sink)
    with atomic_write(directory / HISTOGRAM_FILE) as sink:
        write_histogram(result.records, bins_per_decade, sink)
    with atomic_write(directory / SAMPLES_FILE) as sink:
        write_weighted_samples(result, problem, sink)
    with atomic_write(directory / SUMMARY_FILE) as sink:
        write_summary_json(
            result, sink, true_logz=problem.true_logz, recommendation=recommendation
        )
    logger.info("artefacts of %s written to %s", result.problem_name, directory)
    return directory


def recommend(result, previous=None):
    """
    Apply the decision rule to `result` given the run before it.

    A run without any recorded jump cannot be judged and is sent back for
    more steps.
    """
    if result.summary is None:
        return Recommendation.RERUN_DOUBLED
    outcome = None
    if previous is not None and previous.summary is not None:
        outcome = RunOutcome(previous.summary, previous.logz, previous.logz_err)
    return decision_rule(result.summary, outcome, result.logz, result.logz_err)


def doubling_schedule(start, num_runs, max_steps=None):
    """[start, 2 start, 4 start, ...] with `num_runs` entries, capped at `max_steps`."""
    if start < 1 or num_runs < 1:
        raise PreconditionError("a schedule needs start >= 1 and at least one run")
    schedule = [start * 2**index for index in range(num_runs)]
    if max_steps is not None:
        schedule = [steps for steps in schedule if steps <= max_steps]
    if not schedule:
        raise PreconditionError(f"no schedule entry at or below max_steps={max_steps}")
    return schedule


def check_schedule(schedule, max_steps=None):
    """Validate an explicit schedule; entries above `max_steps` are dropped."""
    schedule = sorted(schedule)
    if max_steps is not None:
        schedule = [steps for steps in schedule if steps <= max_steps]
    if not schedule or schedule[0] < 1:
        raise PreconditionError("the schedule must contain positive step counts")
    validate_schedule(schedule)
    return schedule


def sequence_configs(base_config, schedule):
    """One RunConfig per schedule entry with seed = root seed + index."""
    return [
        dataclasses.replace(base_config, num_steps=steps, seed=base_config.seed + index)
        for index, steps in enumerate(schedule)
    ]


def iter_sequence(problem_name, configs, jobs=1, log_level=None):
    """
    Yield the RunResults of `configs` in schedule order.

    With `jobs > 1` the runs execute in a process pool; results are still
    yielded in order and the first failure stops the iteration (queued runs
    are cancelled).
    """
    if jobs <= 1:
        for config in configs:
            yield perform_run(problem_name, config)
        return

    with ProcessPoolExecutor(
        max_workers=jobs,
        initializer=settings.configure_logging,
        initargs=(log_level,),
    ) as pool:
        futures = [pool.submit(perform_run, problem_name, config) for config in configs]
        try:
            for future in futures:
                yield future.result()
        finally:
            for future in futures:
                future.cancel()


def sample_points(rng, num_points, ndim, distribution):
    """Points from the unit d-ball (uniformly) or the standard normal."""
    if distribution == "normal":
        return rng.standard_normal((num_points, ndim))
    if distribution == "ball":
        directions = rng.standard_normal((num_points, ndim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = rng.random(num_points) ** (1.0 / ndim)
        return directions * radii[:, None]
    raise PreconditionError(
        f"unknown distribution {distribution!r}, expected one of {DISTRIBUTIONS}"
    )


def radius_scaling(
    nlive_list,
    ndim_list,
    repeats=40,
    distribution="ball",
    bootstrap_rounds=None,
    seed=1,
):
    """
    Measure the reference radius of synthetic live sets.

    Each (K, d) cell draws `repeats` independent sets of K points and reports
    the mean and standard deviation of the radius in axis units, next to the
    empirical prediction (20/K)^(1/d) (d/2)^0.1. Sets with K <= d are
    whitened on the regularised covariance.

    Returns:
        list[RadiusScalingRow]
    """
    if not nlive_list or not ndim_list:
        raise PreconditionError("radius scaling needs at least one K and one d")
    if repeats < 1:
        raise PreconditionError("repeats must be at least 1")
    bootstrap_rounds = bootstrap_rounds or settings.BOOTSTRAP_ROUNDS

    rows = []
    for ndim in ndim_list:
        for num_live in nlive_list:
            rng = np.random.default_rng([seed, num_live, ndim])
            radii = np.array(
                [
                    compute_reference_radius(
                        sample_points(rng, num_live, ndim, distribution),
                        bootstrap_rounds,
                        rng,
                        allow_rank_deficient=num_live <= ndim,
                    )[0].r_axis
                    for _ in range(repeats)
                ]
            )
            row = RadiusScalingRow(
                num_live=num_live,
                ndim=ndim,
                distribution=distribution,
                repeats=repeats,
                mean_r=float(radii.mean()),
                std_r=float(radii.std(ddof=1)) if repeats > 1 else 0.0,
                predicted_r=predicted_radius(num_live, ndim),
            )
            logger.info(
                "K=%d d=%d: r=%.3f +- %.3f (predicted %.3f)",
                num_live,
                ndim,
                row.mean_r,
                row.std_r,
                row.predicted_r,
            )
            rows.append(row)
    return rows
