import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class WhitenedSpace:
    """
    Affine map from unit-cube coordinates to decorrelated coordinates.

    `whiten(x) = (x - mean) @ transform.T`. `transform` is lower triangular
    and `inverse_transform` is the Cholesky factor of the (regularised)
    covariance, so `transform @ inverse_transform == I`.

    Fields:
    - `mean`: d-vector.
    - `transform`: d x d matrix.
    - `inverse_transform`: d x d matrix.
    - `num_clusters`: clusters used for the covariance estimate (1 if none).
    """

    mean: np.ndarray
    transform: np.ndarray
    inverse_transform: np.ndarray
    num_clusters: int = 1

    @property
    def ndim(self):
        return self.mean.shape[0]

    def whiten(self, points):
        """Map points (..., d) into whitened coordinates."""
        return (np.asarray(points, dtype=float) - self.mean) @ self.transform.T


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """
    Partition of the live points into single-linkage clusters.

    Fields:
    - `labels`: integer id in [0, num_clusters) per point.
    - `num_clusters`: number of distinct ids.
    """

    labels: np.ndarray
    num_clusters: int

    def sizes(self):
        return np.bincount(self.labels, minlength=self.num_clusters)


@dataclass(frozen=True)
class MLFriendsRadius:
    """
    Bootstrapped maximum nearest-neighbour distance (whitened units).

    Fields:
    - `r`: the radius, a distance (not squared).
    - `bootstrap_rounds`: number of rounds B that produced it.
    - `ndim`: dimensionality of the space it was measured in.
    """

    r: float
    bootstrap_rounds: int
    ndim: int

    @property
    def r_axis(self):
        """
        Radius in axis units of the uniformly filled ellipsoid.

        A uniform d-ball of radius 1 has per-axis variance 1/(d+2), so whitened
        distances shrink by sqrt(d+2) when expressed in its axis length.
        """
        return self.r / math.sqrt(self.ndim + 2)


def predicted_radius(num_live, ndim):
    """Empirical scaling of the radius for ellipsoidal live sets, in axis units."""
    return (20.0 / num_live) ** (1.0 / ndim) * (ndim / 2.0) ** 0.1
