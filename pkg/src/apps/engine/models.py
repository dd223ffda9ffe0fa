from dataclasses import dataclass, field

import numpy as np

from apps.diagnostics.models import DiagnosticSummary, InsertionOrderTest


@dataclass(frozen=True)
class IterationRecord:
    """
    One dead point of a nested sampling run.

    Fields:
    - `iter`: iteration index i, starting at 0.
    - `logl`: log-likelihood of the dead point, the threshold of iteration i.
    - `logv`: ln V_i = ln(1/K) + i * ln(1 - 1/K), prior mass discarded.
    - `logw`: logl + logv.
    - `insertion_rank`: survivors with logl below the new point, in [0, K).
    - `jd`: whitened jump distance from walk start to walk end.
    - `r`: reference radius in force at this iteration.
    - `rjd`: jd / r (NaN when r == 0).
    """

    iter: int
    logl: float
    logv: float
    logw: float
    insertion_rank: int
    jd: float
    r: float
    rjd: float


@dataclass(frozen=True, eq=False)
class RunResult:
    """
    Outcome of `apps.engine.nested.run`.

    Besides the trace and the evidence this keeps what is needed to export
    weighted posterior samples: unit-cube coordinates of the dead points and
    the final live set with the log-weights of its remainder share.
    """

    records: tuple[IterationRecord, ...]
    logz: float
    logz_err: float
    information: float
    num_live: int
    num_steps: int
    problem_name: str
    seed: int
    radius_update_interval: int
    summary: DiagnosticSummary | None
    insertion_test: InsertionOrderTest | None
    dead_u: np.ndarray = field(repr=False)
    live_u: np.ndarray = field(repr=False)
    live_logl: np.ndarray = field(repr=False)
    live_logw: np.ndarray = field(repr=False)
    ncall: int = 0
    wall_time_s: float = 0.0

    @property
    def num_iterations(self):
        return len(self.records)

    def samples_u(self):
        """Unit-cube coordinates of dead points followed by the final live points."""
        return np.vstack([self.dead_u.reshape(-1, self.live_u.shape[1]), self.live_u])

    def log_weights(self):
        dead = np.array([record.logw for record in self.records], dtype=float)
        return np.concatenate([dead, self.live_logw])

    def posterior_weights(self):
        """Normalised posterior weights, aligned with `samples_u()`."""
        return np.exp(self.log_weights() - self.logz)
