from dataclasses import dataclass

from apps.core.models import UnitPoint


@dataclass(frozen=True)
class WalkResult:
    """
    Outcome of one likelihood-constrained random walk.

    Fields:
    - `start`: live point the walk began from.
    - `end`: final point, strictly above the walk threshold.
    - `steps_taken`: number of slice steps (M).
    - `likelihood_calls`: likelihood evaluations spent, at least `steps_taken`.
    """

    start: UnitPoint
    end: UnitPoint
    steps_taken: int
    likelihood_calls: int
