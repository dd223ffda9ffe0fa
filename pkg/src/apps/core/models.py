import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from apps.core.exceptions import (
    ConfigValidationError,
    LikelihoodError,
    PreconditionError,
)
from config import settings


@dataclass(frozen=True, eq=False)
class UnitPoint:
    """
    A position in the unit hypercube together with its cached log-likelihood.

    Fields:
    - `u`: read-only vector of d coordinates in [0, 1].
    - `logl`: log-likelihood of the problem at `prior_transform(u)`; may be -inf.

    Instances are only built by `evaluate()`, which keeps `logl` coherent
    with `u`.
    """

    u: np.ndarray
    logl: float

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        u.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "logl", float(self.logl))

    @property
    def ndim(self):
        return self.u.shape[0]


@dataclass(frozen=True)
class ProblemDefinition:
    """
    A benchmark inference problem.

    Fields:
    - `name`: catalog identifier, e.g. "gauss-4".
    - `ndim`: dimensionality d.
    - `prior_transform`: maps a unit-cube vector to physical parameters.
    - `log_likelihood`: maps physical parameters to a real (never NaN).
      Both callables also accept arrays with the parameters on the last axis.
    - `true_logz`: analytic ln Z when known.
    - `param_names`: labels of the physical parameters.
    """

    name: str
    ndim: int
    prior_transform: Callable[[np.ndarray], np.ndarray]
    log_likelihood: Callable[[np.ndarray], float]
    true_logz: float | None = None
    param_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.ndim < 1:
            raise PreconditionError(f"{self.name}: ndim must be positive")
        if not self.param_names:
            names = tuple(f"theta{i + 1}" for i in range(self.ndim))
            object.__setattr__(self, "param_names", names)


@dataclass
class RunConfig:
    """
    Settings of one nested sampling run.

    Defaults come from `config.settings` (environment overridable).
    `radius_update_interval=None` selects the automatic rule, see
    `resolve_radius_update_interval()`.
    """

    num_steps: int
    num_live: int = field(default_factory=lambda: settings.NUM_LIVE)
    termination_frac: float = field(default_factory=lambda: settings.TERMINATION_FRAC)
    bootstrap_rounds: int = field(default_factory=lambda: settings.BOOTSTRAP_ROUNDS)
    seed: int = 1
    radius_update_interval: int | None = None
    max_iterations: int | None = None

    def clean(self, ndim=None):
        """
        Validate the configuration, optionally against a problem dimension.

        Args:
            ndim (int, optional): Problem dimensionality; enables the
                `num_live >= 2 * ndim` check.

        Returns:
            RunConfig: self, to allow chaining.

        Raises:
            ConfigValidationError: If any rule fails.
        """
        errors = {}
        if ndim is not None and self.num_live < 2 * ndim:
            errors["num_live"] = f"must be at least 2*d = {2 * ndim}"
        elif self.num_live < 2:
            errors["num_live"] = "must be at least 2"
        if self.num_steps < 1:
            errors["num_steps"] = "must be at least 1"
        if not 0.0 < self.termination_frac < 1.0:
            errors["termination_frac"] = "must lie strictly between 0 and 1"
        if self.bootstrap_rounds < 1:
            errors["bootstrap_rounds"] = "must be at least 1"
        if self.radius_update_interval is not None and self.radius_update_interval < 1:
            errors["radius_update_interval"] = "must be at least 1"
        if self.max_iterations is not None and self.max_iterations < 0:
            errors["max_iterations"] = "must not be negative"
        if errors:
            raise ConfigValidationError(errors)
        return self

    def resolve_radius_update_interval(self, ndim):
        """Every iteration for cheap geometries, else every ceil(K/10) iterations."""
        if self.radius_update_interval is not None:
            return self.radius_update_interval
        if self.num_live * ndim <= settings.RADIUS_COST_LIMIT:
            return 1
        return math.ceil(self.num_live / 10)


def evaluate(problem, u):
    """
    Evaluate `problem` at unit-cube position `u`.

    Args:
        problem (ProblemDefinition): The problem.
        u (array_like): d coordinates in [0, 1].

    Returns:
        UnitPoint: The point with its log-likelihood.

    Raises:
        PreconditionError: If `u` has the wrong shape or leaves the cube.
        LikelihoodError: If the likelihood is NaN or +inf.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (problem.ndim,):
        raise PreconditionError(
            f"{problem.name}: expected {problem.ndim} coordinates, got shape {u.shape}"
        )
    if not np.all((u >= 0.0) & (u <= 1.0)):
        raise PreconditionError(f"{problem.name}: point {u} outside the unit cube")
    logl = float(problem.log_likelihood(problem.prior_transform(u)))
    if math.isnan(logl) or logl == math.inf:
        raise LikelihoodError(f"{problem.name}: log-likelihood {logl} at u={u}")
    return UnitPoint(u, logl)


def sample_unit_cube(rng, ndim):
    """Draw one point uniformly from [0, 1]^ndim."""
    if ndim < 1:
        raise PreconditionError("ndim must be at least 1")
    return rng.random(ndim)
