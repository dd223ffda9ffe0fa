"""
MLFriends reference radius.

The radius is the largest distance from a held-out live point to its
nearest retained neighbour, maximised over bootstrap rounds. It is computed
twice: once in the plain whitened space, then again after re-whitening with
the clusters found at the first radius.
"""

import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from apps.core.exceptions import PreconditionError
from apps.geometry.models import ClusterAssignment, MLFriendsRadius
from apps.geometry.whitening import build_whitened_space

logger = logging.getLogger(__name__)


def _distance_matrix(points):
    return squareform(pdist(points))


def _distinct(distances):
    """Mask of first occurrences; exact duplicates of an earlier point are dropped."""
    duplicate = np.triu(distances == 0.0, k=1).any(axis=0)
    return ~duplicate


def _bootstrap_from_distances(distances, bootstrap_rounds, rng, ndim):
    distinct = _distinct(distances)
    distances = distances[np.ix_(distinct, distinct)]
    npoints = distances.shape[0]
    if npoints < 2:
        return MLFriendsRadius(0.0, bootstrap_rounds, ndim)

    radius = 0.0
    for round_rng in rng.spawn(bootstrap_rounds):
        while True:
            selected = np.zeros(npoints, dtype=bool)
            selected[round_rng.integers(0, npoints, size=npoints)] = True
            if not selected.all():
                break
        nearest = distances[np.ix_(~selected, selected)].min(axis=1)
        radius = max(radius, float(nearest.max()))
    return MLFriendsRadius(radius, bootstrap_rounds, ndim)


def _clusters_from_distances(distances, linking_radius):
    adjacency = csr_matrix(distances <= linking_radius)
    num_clusters, labels = connected_components(adjacency, directed=False)
    return ClusterAssignment(labels=labels.astype(int), num_clusters=int(num_clusters))


def bootstrap_radius(points, bootstrap_rounds, rng):
    """
    Out-of-bag bootstrapped maximum nearest-neighbour distance.

    Each round resamples the points with replacement as the training set;
    the points never drawn form the test set (a round without test points is
    redrawn). The radius is the maximum over rounds of the largest
    test-to-nearest-training distance.

    Args:
        points (array_like): (n, d) whitened coordinates.
        bootstrap_rounds (int): Number of rounds B.
        rng (numpy.random.Generator): Each round draws from its own child stream.

    Returns:
        MLFriendsRadius: r is 0 only when all points coincide.

    Raises:
        PreconditionError: Fewer than 2 points or B < 1.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 2:
        raise PreconditionError("bootstrap radius needs at least 2 points")
    if bootstrap_rounds < 1:
        raise PreconditionError("bootstrap_rounds must be at least 1")
    return _bootstrap_from_distances(
        _distance_matrix(points), bootstrap_rounds, rng, points.shape[1]
    )


def single_linkage_clusters(points, linking_radius):
    """
    Connected components of the graph "distance <= linking_radius".

    Args:
        points (array_like): (n, d) whitened coordinates.
        linking_radius (float): Positive linking distance.

    Returns:
        ClusterAssignment: The transitive closure partition.
    """
    if not linking_radius > 0:
        raise PreconditionError("linking_radius must be positive")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return _clusters_from_distances(_distance_matrix(points), linking_radius)


def compute_reference_radius(
    live, bootstrap_rounds, rng, allow_rank_deficient=False
):
    """
    Two-pass MLFriends radius of a live set.

    Pass 1 whitens without clusters and bootstraps r1. Pass 2 clusters the
    pass-1 whitened points at r1, re-whitens cluster-aware and bootstraps r2.

    Args:
        live (array_like): (K, d) unit-cube coordinates of the live points.
        bootstrap_rounds (int): B.
        rng (numpy.random.Generator): Bootstrap stream.
        allow_rank_deficient (bool): Passed to `build_whitened_space`.

    Returns:
        tuple[MLFriendsRadius, WhitenedSpace]: r2 and the pass-2 space.
    """
    live = np.asarray(live, dtype=float)
    first_space = build_whitened_space(
        live, allow_rank_deficient=allow_rank_deficient
    )
    first_distances = _distance_matrix(first_space.whiten(live))
    first = _bootstrap_from_distances(
        first_distances, bootstrap_rounds, rng, live.shape[1]
    )

    clusters = None
    if first.r > 0.0:
        clusters = _clusters_from_distances(first_distances, first.r)
    space = build_whitened_space(
        live, clusters, allow_rank_deficient=allow_rank_deficient
    )
    radius = _bootstrap_from_distances(
        _distance_matrix(space.whiten(live)), bootstrap_rounds, rng, live.shape[1]
    )
    logger.debug(
        "reference radius r1=%.4g r2=%.4g clusters=%d",
        first.r,
        radius.r,
        clusters.num_clusters if clusters is not None else 1,
    )
    return radius, space
