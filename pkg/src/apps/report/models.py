import math
from dataclasses import astuple, dataclass, fields

from apps.engine.models import IterationRecord


@dataclass(frozen=True)
class TraceRecord:
    """
    One line of a run trace: an IterationRecord with the run it belongs to.

    The field order is the column order of the trace file.
    """

    problem: str
    num_live: int
    num_steps: int
    seed: int
    iter: int
    logl: float
    logv: float
    logw: float
    insertion_rank: int
    jd: float
    r: float
    rjd: float

    @classmethod
    def from_iteration(cls, record, problem, num_live, num_steps, seed):
        return cls(problem, num_live, num_steps, seed, *astuple(record))

    def to_iteration(self):
        return IterationRecord(
            iter=self.iter,
            logl=self.logl,
            logv=self.logv,
            logw=self.logw,
            insertion_rank=self.insertion_rank,
            jd=self.jd,
            r=self.r,
            rjd=self.rjd,
        )


TRACE_FIELDS = tuple(f.name for f in fields(TraceRecord))
TRACE_TYPES = {f.name: f.type for f in fields(TraceRecord)}


@dataclass(frozen=True)
class SequenceRow:
    """Per-run line of a sequence table; diagnostics are NaN for runs without jumps."""

    num_steps: int
    seed: int
    logz: float
    logz_err: float
    geometric_mean_rjd: float
    frac_rjd_above_1: float
    ks_p_value: float
    wall_time_s: float

    @classmethod
    def from_result(cls, result):
        summary = result.summary
        test = result.insertion_test
        return cls(
            num_steps=result.num_steps,
            seed=result.seed,
            logz=result.logz,
            logz_err=result.logz_err,
            geometric_mean_rjd=summary.geometric_mean_rjd if summary else math.nan,
            frac_rjd_above_1=summary.frac_rjd_above_1 if summary else math.nan,
            ks_p_value=test.p_value if test else math.nan,
            wall_time_s=result.wall_time_s,
        )


SEQUENCE_FIELDS = tuple(f.name for f in fields(SequenceRow))


@dataclass(frozen=True)
class SequenceTable:
    """
    Runs of one problem and K with doubling numbers of steps.

    Fields:
    - `problem`: shared problem name.
    - `num_live`: shared K.
    - `rows`: sorted by ascending `num_steps`.
    """

    problem: str
    num_live: int
    rows: tuple[SequenceRow, ...]

    @property
    def schedule(self):
        return tuple(row.num_steps for row in self.rows)
