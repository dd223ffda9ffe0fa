from dataclasses import dataclass
from enum import IntEnum


class ExitStatus(IntEnum):
    """Process exit codes of the command line tool."""

    ACCEPT = 0
    ERROR = 1
    RERUN = 2


@dataclass(frozen=True)
class RadiusScalingRow:
    """
    Reference radius statistics of one (K, d) cell.

    Radii are in axis units of the sampled ellipsoid (`MLFriendsRadius.r_axis`).
    `std_r` is 0 for a single repeat.
    """

    num_live: int
    ndim: int
    distribution: str
    repeats: int
    mean_r: float
    std_r: float
    predicted_r: float

    @property
    def relative_deviation(self):
        return self.mean_r / self.predicted_r - 1.0
