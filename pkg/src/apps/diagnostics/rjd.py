"""
Relative jump distance statistics and the rerun decision.
"""

import math
import sys

import numpy as np

from apps.core.exceptions import PreconditionError
from apps.diagnostics.models import (
    DiagnosticSummary,
    Recommendation,
    RjdHistogram,
    Verdict,
)

# ln of a zero jump is replaced by ln of this value
SMALLEST_RJD = sys.float_info.min

CAUTION_SIGMA = 2.0
CAUTION_RELATIVE_CHANGE = 0.1


def _jumps(records):
    """(jd, rjd) arrays of the records with a positive reference radius."""
    pairs = [(record.jd, record.r) for record in records if record.r > 0]
    if not pairs:
        return np.empty(0), np.empty(0)
    jd, r = np.array(pairs, dtype=float).T
    return jd, jd / r


def summarize(records):
    """
    Summarise the relative jump distances of a run.

    Args:
        records (Sequence[IterationRecord]): Trace; records with r == 0 are
            ignored.

    Returns:
        DiagnosticSummary: Geometric mean, fraction above one, ESJD and the
            majority-rule verdict.

    Raises:
        PreconditionError: No record has a positive reference radius.
    """
    jd, rjd = _jumps(records)
    if rjd.size == 0:
        raise PreconditionError("no jump with a positive reference radius")

    zero = rjd <= 0.0
    geometric_mean = math.exp(np.mean(np.log(np.where(zero, SMALLEST_RJD, rjd))))
    frac_above_1 = float(np.count_nonzero(rjd > 1.0)) / rjd.size
    trustworthy = frac_above_1 > 0.5 and geometric_mean > 1.0
    return DiagnosticSummary(
        geometric_mean_rjd=geometric_mean,
        frac_rjd_above_1=frac_above_1,
        num_jumps=int(rjd.size),
        esjd=float(np.mean(jd**2)),
        verdict=(
            Verdict.TRUSTWORTHY if trustworthy else Verdict.RERUN_WITH_DOUBLED_STEPS
        ),
        num_zero_jumps=int(np.count_nonzero(zero)),
    )


def rjd_histogram(records, bins_per_decade):
    """
    Histogram of log10(rjd) on the grid k / bins_per_decade.

    The bins span the observed range; zero jumps are counted in the lowest
    bin so that the counts always add up to the number of jumps.

    Args:
        records (Sequence[IterationRecord]): Trace.
        bins_per_decade (int): At least 1.

    Returns:
        RjdHistogram: Empty (no bins) when no record has r > 0.
    """
    if bins_per_decade < 1:
        raise PreconditionError("bins_per_decade must be at least 1")

    _, rjd = _jumps(records)
    positive = rjd[rjd > 0.0]
    if rjd.size == 0:
        return RjdHistogram(np.zeros(1), np.zeros(0, dtype=int), bins_per_decade)
    if positive.size == 0:
        edges = np.array([-1.0, 0.0]) / bins_per_decade
        counts = np.array([rjd.size])
        return RjdHistogram(edges, counts, bins_per_decade)

    scaled = np.floor(np.log10(positive) * bins_per_decade).astype(int)
    low, high = int(scaled.min()), int(scaled.max())
    num_bins = high - low + 1
    counts = np.bincount(scaled - low, minlength=num_bins)
    counts[0] += rjd.size - positive.size
    edges = np.arange(low, high + 2) / bins_per_decade
    return RjdHistogram(edges, counts, bins_per_decade)


def decision_rule(current, previous, logz, logz_err):
    """
    Decide whether a run can be accepted.

    1. A trustworthy RJD summary is accepted.
    2. Otherwise, without a previous run, rerun with twice the steps.
    3. With a previous run, accept with caution only if neither the
       evidence (within two combined standard errors) nor the geometric
       mean RJD (within 10%) moved; else rerun with twice the steps.

    Args:
        current (DiagnosticSummary): Summary of the latest run.
        previous (RunOutcome | None): Run with half the steps, if any.
        logz (float): Evidence of the latest run.
        logz_err (float): Its uncertainty.

    Returns:
        Recommendation
    """
    if current.trustworthy:
        return Recommendation.ACCEPT
    if previous is None:
        return Recommendation.RERUN_DOUBLED

    combined_err = math.hypot(logz_err, previous.logz_err)
    logz_stable = abs(logz - previous.logz) <= CAUTION_SIGMA * combined_err
    previous_mean = previous.summary.geometric_mean_rjd
    rjd_stable = (
        abs(current.geometric_mean_rjd - previous_mean)
        <= CAUTION_RELATIVE_CHANGE * previous_mean
    )
    if logz_stable and rjd_stable:
        return Recommendation.ACCEPT_WITH_CAUTION
    return Recommendation.RERUN_DOUBLED
