import logging

import numpy as np
import scipy.linalg

from apps.core.exceptions import DegenerateGeometryError, PreconditionError
from apps.geometry.models import WhitenedSpace

logger = logging.getLogger(__name__)

REGULARISATION_START = 1e-10
REGULARISATION_MAX = 1e-6


def _pooled_covariance(points, clusters):
    """
    Covariance of points centred on their own cluster mean.

    Singleton clusters carry no spread and are left out. Falls back to the
    plain covariance when too few degrees of freedom remain.
    """
    ndim = points.shape[1]
    if clusters is None or clusters.num_clusters <= 1:
        return np.atleast_2d(np.cov(points, rowvar=False)), 1

    sizes = clusters.sizes()
    keep = sizes[clusters.labels] > 1
    members = points[keep]
    labels = clusters.labels[keep]
    groups = int(np.count_nonzero(sizes > 1))
    dof = members.shape[0] - groups
    if dof < ndim + 1:
        logger.debug(
            "only %d degrees of freedom across %d clusters, using unclustered "
            "covariance",
            dof,
            clusters.num_clusters,
        )
        return np.atleast_2d(np.cov(points, rowvar=False)), 1

    sums = np.zeros((clusters.num_clusters, ndim))
    np.add.at(sums, labels, members)
    means = sums / np.maximum(sizes, 1)[:, None]
    centred = members - means[labels]
    return centred.T @ centred / dof, groups


def build_whitened_space(points, clusters=None, allow_rank_deficient=False):
    """
    Build the affine whitening map of a live set.

    Args:
        points (array_like): (n, d) unit-cube coordinates.
        clusters (ClusterAssignment, optional): When given, each point is
            centred on its own cluster mean before the pooled covariance is
            estimated.
        allow_rank_deficient (bool): Accept fewer than d+1 points and rely on
            the diagonal regularisation alone.

    Returns:
        WhitenedSpace: whitened points have zero mean and, in the unclustered
        case, identity sample covariance.

    Raises:
        PreconditionError: Too few points or mismatched cluster labels.
        DegenerateGeometryError: The covariance stays singular after the
            regularisation is escalated to its maximum.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise PreconditionError(f"expected an (n, d) array, got shape {points.shape}")
    npoints, ndim = points.shape
    minimum = 2 if allow_rank_deficient else ndim + 1
    if npoints < minimum:
        raise PreconditionError(
            f"need at least {minimum} points to whiten {ndim} dimensions, "
            f"got {npoints}"
        )
    if clusters is not None and clusters.labels.shape != (npoints,):
        raise PreconditionError("cluster labels do not match the points")

    cov, num_clusters = _pooled_covariance(points, clusters)
    scale = np.trace(cov) / ndim
    if not np.isfinite(scale) or scale <= 0.0:
        raise DegenerateGeometryError(
            "live points coincide, covariance has zero trace",
            direction=np.eye(ndim)[0],
        )

    epsilon = REGULARISATION_START
    while epsilon <= REGULARISATION_MAX * (1 + 1e-9):
        try:
            factor = scipy.linalg.cholesky(
                cov + epsilon * scale * np.eye(ndim), lower=True
            )
            break
        except np.linalg.LinAlgError:
            logger.debug("covariance not positive definite at eps=%g", epsilon)
            epsilon *= 10.0
    else:
        eigval, eigvec = np.linalg.eigh(cov)
        direction = eigvec[:, np.argmin(eigval)]
        raise DegenerateGeometryError(
            f"covariance singular along direction {np.round(direction, 6).tolist()} "
            f"(variance {eigval.min():.3g})",
            direction=direction,
        )

    transform = scipy.linalg.solve_triangular(factor, np.eye(ndim), lower=True)
    return WhitenedSpace(
        mean=points.mean(axis=0),
        transform=transform,
        inverse_transform=factor,
        num_clusters=num_clusters,
    )


def mahalanobis_distance(space, a, b):
    """
    Distance between unit-cube vectors `a` and `b` measured in `space`.

    Raises:
        PreconditionError: On dimension mismatch.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (space.ndim,) or b.shape != (space.ndim,):
        raise PreconditionError(
            f"expected vectors of dimension {space.ndim}, got {a.shape} and {b.shape}"
        )
    return float(np.linalg.norm(space.transform @ (a - b)))
