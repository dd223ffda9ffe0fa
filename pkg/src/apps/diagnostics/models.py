from dataclasses import dataclass
from enum import StrEnum

import numpy as np


class Verdict(StrEnum):
    """Majority-rule reading of a run's relative jump distances."""

    # More than half the jumps left the typical neighbour distance
    TRUSTWORTHY = "trustworthy"
    RERUN_WITH_DOUBLED_STEPS = "rerun_with_doubled_steps"


class Recommendation(StrEnum):
    """What to do after comparing a run with its predecessor in a sequence."""

    ACCEPT = "accept"
    RERUN_DOUBLED = "rerun_doubled"
    ACCEPT_WITH_CAUTION = "accept_with_caution"


@dataclass(frozen=True)
class DiagnosticSummary:
    """
    Summary statistics of the relative jump distances of one run.

    Fields:
    - `geometric_mean_rjd`: exp(mean ln rjd) over the jumps with r > 0.
    - `frac_rjd_above_1`: share of those jumps with rjd > 1.
    - `num_jumps`: number of jumps with r > 0.
    - `esjd`: mean squared jump distance (whitened units squared).
    - `verdict`: TRUSTWORTHY iff both fraction > 0.5 and geometric mean > 1.
    - `num_zero_jumps`: jumps that ended exactly at their start.
    """

    geometric_mean_rjd: float
    frac_rjd_above_1: float
    num_jumps: int
    esjd: float
    verdict: Verdict
    num_zero_jumps: int = 0

    @property
    def trustworthy(self):
        return self.verdict is Verdict.TRUSTWORTHY

    def as_dict(self):
        return {
            "geometric_mean_rjd": self.geometric_mean_rjd,
            "frac_rjd_above_1": self.frac_rjd_above_1,
            "num_jumps": self.num_jumps,
            "esjd": self.esjd,
            "verdict": self.verdict.value,
            "num_zero_jumps": self.num_zero_jumps,
        }


@dataclass(frozen=True)
class InsertionOrderTest:
    """
    One-sample Kolmogorov-Smirnov test of normalised insertion ranks.

    Fields:
    - `ks_statistic`: sup distance between empirical and uniform CDF.
    - `p_value`: asymptotic p-value in [0, 1].
    - `num_samples`: number of ranks tested.
    """

    ks_statistic: float
    p_value: float
    num_samples: int


@dataclass(frozen=True)
class RunOutcome:
    """A previous run as seen by `decision_rule`."""

    summary: DiagnosticSummary
    logz: float
    logz_err: float


@dataclass(frozen=True, eq=False)
class RjdHistogram:
    """
    Counts of log10(rjd) in bins of equal width.

    Fields:
    - `log10_edges`: len(counts) + 1 increasing edges on the log10 scale.
    - `counts`: jumps per bin.
    - `bins_per_decade`: bins per factor of ten.
    """

    log10_edges: np.ndarray
    counts: np.ndarray
    bins_per_decade: int

    @property
    def total(self):
        return int(self.counts.sum())

    def edges(self):
        """Bin edges in rjd units."""
        return 10.0**self.log10_edges
