import numpy as np
from pytest import fixture

from apps.core.models import ProblemDefinition, RunConfig, evaluate
from apps.engine.nested import run
from apps.problems.catalog import get_problem
from apps.sampler.models import WalkResult

SHELL_WIDTH = 0.1


@fixture(scope="session")
def nested_run():
    """
    Run a catalog problem once per (name, K, M, seed) and share the result.

    `num_steps=None` uses M = d.
    """
    cache = {}

    def _run(name, num_live=400, num_steps=None, seed=1):
        problem = get_problem(name)
        key = (name, num_live, num_steps or problem.ndim, seed)
        if key not in cache:
            config = RunConfig(num_steps=key[2], num_live=num_live, seed=seed)
            cache[key] = run(problem, config)
        return cache[key]

    return _run


@fixture
def sphere_problem():
    """Spherical likelihood centred in the unit square, unnormalised (max 0)."""

    def log_likelihood(theta):
        theta = np.asarray(theta, dtype=float)
        return -np.sum((theta - 0.5) ** 2, axis=-1) / (2 * SHELL_WIDTH**2)

    return ProblemDefinition(
        name="sphere-2",
        ndim=2,
        prior_transform=lambda u: np.asarray(u, dtype=float),
        log_likelihood=log_likelihood,
    )


def contour_radius(threshold):
    """Radius of the circle on which the sphere likelihood equals `threshold`."""
    return np.sqrt(-2.0 * SHELL_WIDTH**2 * np.asarray(threshold))


@fixture(name="contour_radius")
def contour_radius_fixture():
    return contour_radius


@fixture
def exact_sampler():
    """
    Step sampler drawing uniformly from the region above the threshold.

    Draws from the disc bounded by the likelihood contour and rejects points
    outside the unit square, so the new point is an exact prior draw under
    the constraint.
    """

    def _sample(problem, start, threshold, num_steps, rng):
        radius = contour_radius(threshold)
        calls = 0
        while True:
            angle = rng.uniform(0.0, 2 * np.pi)
            distance = radius * np.sqrt(rng.random())
            u = 0.5 + distance * np.array([np.cos(angle), np.sin(angle)])
            if np.any(u < 0.0) or np.any(u > 1.0):
                continue
            point = evaluate(problem, u)
            calls += 1
            if point.logl > threshold:
                return WalkResult(
                    start=start,
                    end=point,
                    steps_taken=num_steps,
                    likelihood_calls=calls,
                )

    return _sample
