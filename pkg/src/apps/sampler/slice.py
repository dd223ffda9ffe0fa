"""
Axis-aligned slice sampling inside the likelihood constraint.

The slice along an axis is {x : logl(x) > threshold} clipped to [0, 1]. The
bracket starts with width 1 placed at random around the current coordinate,
steps out until both ends fail the constraint or reach the cube boundary,
and shrinks towards the current coordinate on every rejection.
"""

import numpy as np

from apps.core.exceptions import PreconditionError, StuckWalkError
from apps.core.models import evaluate
from apps.sampler.models import WalkResult

INITIAL_WIDTH = 1.0
MIN_WIDTH = 1e-30


class _CountingEvaluator:
    """Evaluates candidates that differ from a base point along one axis."""

    def __init__(self, problem):
        self.problem = problem
        self.calls = 0

    def __call__(self, base, axis, value):
        u = np.array(base, dtype=float)
        u[axis] = value
        self.calls += 1
        return evaluate(self.problem, u)


def _slice_step(evaluator, current, threshold, axis, rng):
    x0 = current.u[axis]
    left = x0 - rng.random() * INITIAL_WIDTH
    right = left + INITIAL_WIDTH
    left = max(left, 0.0)
    right = min(right, 1.0)

    while left > 0.0 and evaluator(current.u, axis, left).logl > threshold:
        left = max(left - INITIAL_WIDTH, 0.0)
    while right < 1.0 and evaluator(current.u, axis, right).logl > threshold:
        right = min(right + INITIAL_WIDTH, 1.0)

    while True:
        if right - left < MIN_WIDTH:
            raise StuckWalkError(
                f"slice on axis {axis} shrank to width {right - left:.3g} around "
                f"u={x0!r} (threshold {threshold!r})"
            )
        x = left + rng.random() * (right - left)
        candidate = evaluator(current.u, axis, x)
        if candidate.logl > threshold:
            return candidate
        if x < x0:
            left = x
        else:
            right = x


def slice_step(problem, current, threshold, axis, rng):
    """
    Move `current` along one unit-cube axis by slice sampling.

    Args:
        problem (ProblemDefinition): Problem being sampled.
        current (UnitPoint): Start point, `current.logl > threshold`.
        threshold (float): Likelihood constraint (may be -inf).
        axis (int): Coordinate to move, 0 <= axis < d.
        rng (numpy.random.Generator): Walk stream.

    Returns:
        UnitPoint: New point differing from `current` only along `axis`.

    Raises:
        PreconditionError: Constraint not met at the start or bad axis.
        StuckWalkError: The bracket collapsed below 1e-30.
    """
    _check_start(current, threshold)
    if not 0 <= axis < problem.ndim:
        raise PreconditionError(f"axis {axis} outside [0, {problem.ndim})")
    return _slice_step(_CountingEvaluator(problem), current, threshold, axis, rng)


def random_walk(problem, start, threshold, num_steps, rng):
    """
    Apply `num_steps` slice steps, each along a uniformly drawn axis.

    Returns:
        WalkResult: Final point and the number of likelihood calls.
    """
    _check_start(start, threshold)
    if num_steps < 1:
        raise PreconditionError("a walk needs at least one step")

    evaluator = _CountingEvaluator(problem)
    current = start
    for _ in range(num_steps):
        axis = int(rng.integers(problem.ndim))
        current = _slice_step(evaluator, current, threshold, axis, rng)
    return WalkResult(
        start=start,
        end=current,
        steps_taken=num_steps,
        likelihood_calls=evaluator.calls,
    )


def _check_start(point, threshold):
    if not point.logl > threshold:
        raise PreconditionError(
            f"start point logl={point.logl!r} does not exceed threshold {threshold!r}"
        )
