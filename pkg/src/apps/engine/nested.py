"""
Nested sampling main loop with per-iteration jump distance bookkeeping.
"""

import logging
import math
import time

import numpy as np
from scipy.special import logsumexp

from apps.core.exceptions import PreconditionError, SamplingError
from apps.core.models import evaluate, sample_unit_cube
from apps.core.rng import spawn_streams
from apps.diagnostics.insertion import insertion_order_ks
from apps.diagnostics.rjd import summarize
from apps.engine.models import IterationRecord, RunResult
from apps.geometry.radius import compute_reference_radius
from apps.geometry.whitening import mahalanobis_distance
from apps.sampler.slice import random_walk
from config import settings

logger = logging.getLogger(__name__)


def insertion_rank(live_logls, new_logl):
    """Number of live points with log-likelihood strictly below `new_logl`."""
    if math.isnan(new_logl):
        raise PreconditionError("insertion rank of a NaN log-likelihood")
    return int(np.count_nonzero(np.asarray(live_logls) < new_logl))


def information(records, remainder=()):
    """
    Posterior information H (KL divergence of posterior from prior), in nats.

    Args:
        records (Sequence[IterationRecord]): Dead points.
        remainder (Iterable[tuple[float, float]]): Extra (logl, logw) pairs,
            e.g. the final live points.

    Returns:
        tuple[float, float]: (H, ln Z) of the combined weights.
    """
    pairs = [(record.logl, record.logw) for record in records]
    pairs.extend((float(logl), float(logw)) for logl, logw in remainder)
    if not pairs:
        raise PreconditionError("information of an empty run")
    logl, logw = np.array(pairs, dtype=float).T
    logz = float(logsumexp(logw))
    weights = np.exp(logw - logz)
    carried = weights > 0.0
    h = float(np.sum(weights[carried] * (logl[carried] - logz)))
    return h, logz


def logz_uncertainty(records, num_live, remainder=()):
    """
    Standard nested sampling error on ln Z, sqrt(H / K).

    Args:
        records (Sequence[IterationRecord]): Non-empty dead point trace.
        num_live (int): K.
        remainder (Iterable[tuple[float, float]]): Optional (logl, logw) pairs
            included in the weights.
    """
    h, _ = information(records, remainder)
    return math.sqrt(max(h, 0.0) / num_live)


def run(problem, config, sampler=random_walk):
    """
    Run nested sampling on `problem`.

    Each iteration discards the lowest-likelihood live point, walks a
    randomly chosen survivor for `config.num_steps` steps under its
    likelihood and records the jump distance against the current reference
    radius.

    Args:
        problem (ProblemDefinition): What to integrate.
        config (RunConfig): Validated against the problem dimension.
        sampler (callable): `(problem, start, threshold, num_steps, rng) ->
            WalkResult`; the slice-sampler random walk by default.

    Returns:
        RunResult: Trace, evidence and diagnostics.

    Raises:
        ConfigValidationError: Invalid configuration.
        SamplingError: Stuck walk or degenerate geometry, with `iteration` set.
    """
    config.clean(problem.ndim)
    num_live = config.num_live
    ndim = problem.ndim
    streams = spawn_streams(config.seed)
    interval = config.resolve_radius_update_interval(ndim)
    log_shrink = math.log1p(-1.0 / num_live)
    log_delta = -math.log(num_live)

    logger.info(
        "run %s: K=%d M=%d seed=%d radius interval=%d",
        problem.name,
        num_live,
        config.num_steps,
        config.seed,
        interval,
    )
    started = time.perf_counter()

    live = [
        evaluate(problem, sample_unit_cube(streams.init, ndim)) for _ in range(num_live)
    ]
    live_u = np.array([point.u for point in live])
    live_logl = np.array([point.logl for point in live])
    ncall = num_live

    records = []
    dead_u = []
    logz = -math.inf
    radius = space = None
    it = 0
    while config.max_iterations is None or it < config.max_iterations:
        if it % interval == 0:
            try:
                radius, space = compute_reference_radius(
                    live_u, config.bootstrap_rounds, streams.bootstrap
                )
            except SamplingError as err:
                raise err.with_iteration(it)
            logger.debug("iteration %d: reference radius %.4g", it, radius.r)

        worst = int(np.argmin(live_logl))
        threshold = float(live_logl[worst])
        eligible = np.flatnonzero(live_logl > threshold)
        if eligible.size == 0:
            logger.warning(
                "iteration %d: all live points share logl=%g, closing the run",
                it,
                threshold,
            )
            break

        logv = log_delta + it * log_shrink
        logw = threshold + logv
        logz = np.logaddexp(logz, logw)

        start = live[int(eligible[streams.start.integers(eligible.size)])]
        try:
            walk = sampler(problem, start, threshold, config.num_steps, streams.walk)
        except SamplingError as err:
            raise err.with_iteration(it)
        ncall += walk.likelihood_calls
        end = walk.end

        jd = mahalanobis_distance(space, start.u, end.u)
        records.append(
            IterationRecord(
                iter=it,
                logl=threshold,
                logv=logv,
                logw=logw,
                insertion_rank=insertion_rank(np.delete(live_logl, worst), end.logl),
                jd=jd,
                r=radius.r,
                rjd=jd / radius.r if radius.r > 0 else math.nan,
            )
        )
        dead_u.append(live_u[worst].copy())
        live[worst] = end
        live_u[worst] = end.u
        live_logl[worst] = end.logl
        it += 1

        logz_remain = float(live_logl.max()) + it * log_shrink
        remain_frac = math.exp(logz_remain - np.logaddexp(logz, logz_remain))
        if it % settings.LOG_INTERVAL == 0:
            logger.info(
                "iteration %d: logl=%.4g logz=%.4g remainder=%.3g r=%.3g ncall=%d",
                it,
                threshold,
                logz,
                remain_frac,
                radius.r,
                ncall,
            )
        if remain_frac < config.termination_frac:
            break

    live_logw = live_logl + it * log_shrink - math.log(num_live)
    remainder = list(zip(live_logl, live_logw))
    h, logz = information(records, remainder)
    logz_err = math.sqrt(max(h, 0.0) / num_live)

    summary = None
    if any(record.r > 0 for record in records):
        summary = summarize(records)
    insertion_test = insertion_order_ks(records, num_live) if records else None

    wall_time = time.perf_counter() - started
    logger.info(
        "run %s finished: %d iterations, %d calls, logz=%.3f +- %.3f (%.1fs)",
        problem.name,
        it,
        ncall,
        logz,
        logz_err,
        wall_time,
    )
    return RunResult(
        records=tuple(records),
        logz=logz,
        logz_err=logz_err,
        information=h,
        num_live=num_live,
        num_steps=config.num_steps,
        problem_name=problem.name,
        seed=config.seed,
        radius_update_interval=interval,
        summary=summary,
        insertion_test=insertion_test,
        dead_u=np.array(dead_u).reshape(-1, ndim),
        live_u=live_u,
        live_logl=live_logl,
        live_logw=live_logw,
        ncall=ncall,
        wall_time_s=wall_time,
    )
