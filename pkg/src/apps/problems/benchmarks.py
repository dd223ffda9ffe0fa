"""
Analytic benchmark problems.

Priors are expressed as transforms of the unit hypercube; likelihoods and
transforms accept a single parameter vector or an array with the parameters
on the last axis.
"""

import math

import numpy as np
import scipy.linalg
from scipy.special import logsumexp, ndtr, ndtri

from apps.core.exceptions import PreconditionError
from apps.core.models import ProblemDefinition

LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)

# Normal quantiles of exactly 0 or 1 are infinite
_U_LOW = np.finfo(float).tiny
_U_HIGH = 1.0 - np.finfo(float).eps

EIGHT_SCHOOLS_Y = np.array([28.0, 8.0, -3.0, 7.0, -1.0, 1.0, 18.0, 12.0])
EIGHT_SCHOOLS_SIGMA = np.array([15.0, 10.0, 16.0, 11.0, 9.0, 11.0, 10.0, 18.0])


def normal_logpdf(x, loc, scale):
    z = (x - loc) / scale
    return -0.5 * z**2 - np.log(scale) - LOG_SQRT_2PI


def loggamma_logpdf(x, loc, scale):
    """Log density of the shape-1 log-gamma distribution, exp(z - e^z) / scale."""
    z = (x - loc) / scale
    return z - np.exp(z) - np.log(scale)


def standard_normal_quantile(u):
    return ndtri(np.clip(u, _U_LOW, _U_HIGH))


def _uniform(low, high):
    def transform(u):
        return low + (high - low) * np.asarray(u, dtype=float)

    return transform


def _require(condition, message):
    if not condition:
        raise PreconditionError(message)


def gaussian_parameters(ndim):
    """Per-axis (mu, sigma) of the Gaussian problem; sigma spans 1e-1 .. 1e-9."""
    index = np.arange(ndim, dtype=float)
    exponent = -8.0 * index / (ndim - 1) if ndim > 1 else np.zeros(1)
    sigma = 0.1 * 10.0**exponent
    mu = 0.5 + (1.0 - 5.0 * sigma) / 2.0 * np.sin(index / (2.0 * ndim))
    return mu, sigma


def gaussian(ndim):
    """Product of normals with very different widths, off-centre in the unit cube."""
    _require(ndim >= 1, "gaussian needs ndim >= 1")
    mu, sigma = gaussian_parameters(ndim)

    def log_likelihood(theta):
        return np.sum(normal_logpdf(np.asarray(theta), mu, sigma), axis=-1)

    return ProblemDefinition(
        name=f"gauss-{ndim}",
        ndim=ndim,
        prior_transform=_uniform(0.0, 1.0),
        log_likelihood=log_likelihood,
        true_logz=0.0,
    )


def box_log_evidence(ndim, width=0.1, bonus=100.0):
    """Exact ln Z of the box problem on the centred unit cube."""
    inner = width * math.sqrt(2 * math.pi) * (2 * ndtr(1.0) - 1)
    outer = width * math.sqrt(2 * math.pi) * (2 * ndtr(0.5 / width) - 1)
    # Z = outer^d + (e^bonus - 1) * inner^d
    log_excess = bonus + math.log(-math.expm1(-bonus))
    return float(np.logaddexp(ndim * math.log(outer), log_excess + ndim * math.log(inner)))


def box(ndim):
    """Gaussian bump with a sharp +100 step inside the central box |theta_i| < 0.1."""
    _require(ndim >= 1, "box needs ndim >= 1")

    def prior_transform(u):
        return np.asarray(u, dtype=float) - 0.5

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        inside = np.max(np.abs(theta), axis=-1) < 0.1
        return -0.5 * np.sum((theta / 0.1) ** 2, axis=-1) + 100.0 * inside

    return ProblemDefinition(
        name=f"box-{ndim}",
        ndim=ndim,
        prior_transform=prior_transform,
        log_likelihood=log_likelihood,
        true_logz=box_log_evidence(ndim),
    )


def rosenbrock(ndim):
    """Curved banana degeneracy on [-10, 10]^d."""
    _require(ndim >= 2, "rosenbrock needs ndim >= 2")

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        head, tail = theta[..., :-1], theta[..., 1:]
        return -2.0 * np.sum(100.0 * (tail - head**2) ** 2 + (1.0 - head) ** 2, axis=-1)

    return ProblemDefinition(
        name=f"rosenbrock-{ndim}",
        ndim=ndim,
        prior_transform=_uniform(-10.0, 10.0),
        log_likelihood=log_likelihood,
    )


def eggbox():
    """Two-dimensional grid of equal peaks, theta uniform on [0, 10 pi]^2."""

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        return (2.0 + np.cos(theta[..., 0] / 2.0) * np.cos(theta[..., 1] / 2.0)) ** 5

    return ProblemDefinition(
        name="eggbox",
        ndim=2,
        prior_transform=_uniform(0.0, 10.0 * math.pi),
        log_likelihood=log_likelihood,
        param_names=("x", "y"),
    )


def loggamma(ndim):
    """
    Multi-modal, skewed problem on the unit cube.

    Axis 1 is an equal mixture of two log-gamma peaks at 1/3 and 2/3, axis 2
    an equal mixture of two normals at the same places. Of the remaining
    axes, the first half are log-gamma and the rest normal, all at 2/3. Every
    component has scale 1/30, so Z = 1 up to negligible tails.
    """
    _require(ndim >= 2, "loggamma needs ndim >= 2")
    scale = 1.0 / 30.0
    # 0-based axes 2 .. ndim/2 are log-gamma, later ones normal
    is_loggamma = np.arange(2, ndim) <= ndim / 2

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        x1, x2, rest = theta[..., 0], theta[..., 1], theta[..., 2:]
        logl1 = np.logaddexp(
            loggamma_logpdf(x1, 1.0 / 3.0, scale), loggamma_logpdf(x1, 2.0 / 3.0, scale)
        )
        logl2 = np.logaddexp(
            normal_logpdf(x2, 1.0 / 3.0, scale), normal_logpdf(x2, 2.0 / 3.0, scale)
        )
        logl_rest = np.where(
            is_loggamma,
            loggamma_logpdf(rest, 2.0 / 3.0, scale),
            normal_logpdf(rest, 2.0 / 3.0, scale),
        )
        return logl1 + logl2 - 2.0 * math.log(2.0) + np.sum(logl_rest, axis=-1)

    return ProblemDefinition(
        name=f"loggamma-{ndim}",
        ndim=ndim,
        prior_transform=_uniform(0.0, 1.0),
        log_likelihood=log_likelihood,
        true_logz=0.0,
    )


def funnel_correlation(size, gamma):
    """Unit diagonal, constant off-diagonal `gamma`."""
    return np.full((size, size), gamma) + (1.0 - gamma) * np.eye(size)


def funnel(ndim, gamma=0.95):
    """
    Correlated funnel: mu | sigma^2 ~ Normal(0, sigma^2 M).

    Parameters are (ln sigma^2, mu_1 .. mu_{d-1}) with a standard normal
    prior on ln sigma^2 and uniform [-10, 10] priors on the locations.
    """
    _require(ndim >= 2, "funnel needs ndim >= 2")
    size = ndim - 1
    try:
        factor = scipy.linalg.cho_factor(funnel_correlation(size, gamma), lower=True)
    except np.linalg.LinAlgError as err:
        raise PreconditionError(
            f"funnel correlation with gamma={gamma} is not positive definite"
        ) from err
    log_det = 2.0 * np.sum(np.log(np.diag(factor[0])))
    constant = -0.5 * (size * math.log(2 * math.pi) + log_det)

    def prior_transform(u):
        u = np.asarray(u, dtype=float)
        theta = np.empty_like(u)
        theta[..., 0] = standard_normal_quantile(u[..., 0])
        theta[..., 1:] = -10.0 + 20.0 * u[..., 1:]
        return theta

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        log_var, mu = theta[..., 0], theta[..., 1:]
        flat = mu.reshape(-1, size)
        quad = np.sum(flat * scipy.linalg.cho_solve(factor, flat.T).T, axis=-1)
        quad = quad.reshape(mu.shape[:-1])
        return -0.5 * quad / np.exp(log_var) - 0.5 * size * log_var + constant

    names = ("log_sigma2",) + tuple(f"mu{i + 1}" for i in range(size))
    return ProblemDefinition(
        name=f"funnel-{ndim}",
        ndim=ndim,
        prior_transform=prior_transform,
        log_likelihood=log_likelihood,
        param_names=names,
    )


def eight_schools():
    """
    Non-centred hierarchical model of eight treatment-effect measurements.

    Parameters (x_1 .. x_8, mu, tau): x ~ Normal(0, 1), mu ~ Normal(0, 5),
    tau ~ HalfCauchy(0, 5). The likelihood is the unnormalised Gaussian
    -sum(((x tau + mu) - y)^2 / (2 sigma^2)).
    """

    def prior_transform(u):
        u = np.asarray(u, dtype=float)
        theta = np.empty_like(u)
        theta[..., :8] = standard_normal_quantile(u[..., :8])
        theta[..., 8] = 5.0 * standard_normal_quantile(u[..., 8])
        theta[..., 9] = 5.0 * np.tan(np.pi * u[..., 9] / 2.0)
        return theta

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        x, mu, tau = theta[..., :8], theta[..., 8:9], theta[..., 9:10]
        effect = x * tau + mu
        return -np.sum(
            (effect - EIGHT_SCHOOLS_Y) ** 2 / (2.0 * EIGHT_SCHOOLS_SIGMA**2), axis=-1
        )

    names = tuple(f"x{i + 1}" for i in range(8)) + ("mu", "tau")
    return ProblemDefinition(
        name="eightschools",
        ndim=10,
        prior_transform=prior_transform,
        log_likelihood=log_likelihood,
        param_names=names,
    )


def grid_log_evidence(problem, points_per_axis=2001):
    """
    ln Z of a two-dimensional problem by midpoint quadrature in the unit square.

    Used as an independent reference for the engine on small problems.
    """
    _require(problem.ndim == 2, "grid quadrature is only provided for 2 dimensions")
    centres = (np.arange(points_per_axis) + 0.5) / points_per_axis
    u1, u2 = np.meshgrid(centres, centres, indexing="ij")
    u = np.stack([u1.ravel(), u2.ravel()], axis=-1)
    logl = problem.log_likelihood(problem.prior_transform(u))
    return float(logsumexp(logl) - 2.0 * math.log(points_per_axis))
