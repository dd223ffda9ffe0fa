from unittest import TestCase

import numpy as np
from scipy.stats import kstest

from apps.core.exceptions import PreconditionError, StuckWalkError
from apps.core.models import ProblemDefinition, evaluate
from apps.problems.benchmarks import standard_normal_quantile
from apps.sampler.slice import random_walk, slice_step


def _problem(log_likelihood, ndim=2):
    return ProblemDefinition(
        name="test",
        ndim=ndim,
        prior_transform=lambda u: np.asarray(u),
        log_likelihood=log_likelihood,
    )


def _disk(theta):
    return -float(np.sum((np.asarray(theta) - 0.5) ** 2))


class SliceStepTestCase(TestCase):
    """
    Test case for a single axis-aligned slice step.
    """

    def setUp(self):
        self.rng = np.random.default_rng(17)
        self.problem = _problem(_disk)
        self.start = evaluate(self.problem, [0.55, 0.45])

    def test_moves_along_one_axis_inside_the_constraint(self):
        """
        Only the chosen coordinate changes and the constraint holds.
        """
        for _ in range(50):
            point = slice_step(self.problem, self.start, -0.04, 1, self.rng)
            self.assertEqual(point.u[0], self.start.u[0])
            self.assertGreater(point.logl, -0.04)

    def test_constant_likelihood_gives_uniform_coordinates(self):
        """
        Without a constraint the slice is the whole axis and the draw is uniform.
        """
        problem = _problem(lambda theta: 0.0, ndim=1)
        start = evaluate(problem, [0.3])
        values = [
            slice_step(problem, start, -np.inf, 0, self.rng).u[0] for _ in range(2000)
        ]
        self.assertGreater(kstest(values, "uniform").pvalue, 1e-3)

    def test_start_must_satisfy_the_constraint(self):
        with self.assertRaises(PreconditionError):
            slice_step(self.problem, self.start, self.start.logl, 0, self.rng)

    def test_axis_out_of_range(self):
        with self.assertRaises(PreconditionError):
            slice_step(self.problem, self.start, -1.0, 2, self.rng)

    def test_collapsed_slice_raises(self):
        """
        A slice containing only the start point shrinks until it is unresolvable.
        """
        problem = _problem(lambda theta: 0.0 if theta[0] == 0.0 else -np.inf)
        start = evaluate(problem, [0.0, 0.5])
        with self.assertRaises(StuckWalkError):
            slice_step(problem, start, -1.0, 0, self.rng)


class RandomWalkTestCase(TestCase):
    """
    Test case for the M-step random walk.
    """

    def setUp(self):
        self.problem = _problem(_disk)
        self.start = evaluate(self.problem, [0.5, 0.5])

    def test_walk_result(self):
        walk = random_walk(self.problem, self.start, -0.01, 8, np.random.default_rng(1))
        self.assertIs(walk.start, self.start)
        self.assertEqual(walk.steps_taken, 8)
        self.assertGreaterEqual(walk.likelihood_calls, 8)
        self.assertGreater(walk.end.logl, -0.01)

    def test_same_seed_same_walk(self):
        first = random_walk(
            self.problem, self.start, -0.01, 5, np.random.default_rng(4)
        )
        second = random_walk(
            self.problem, self.start, -0.01, 5, np.random.default_rng(4)
        )
        np.testing.assert_array_equal(first.end.u, second.end.u)
        self.assertEqual(first.likelihood_calls, second.likelihood_calls)

    def test_needs_at_least_one_step(self):
        with self.assertRaises(PreconditionError):
            random_walk(self.problem, self.start, -0.01, 0, np.random.default_rng(1))


class ChainTestCase(TestCase):
    """
    Test case for repeated slice moves on unconstrained problems.
    """

    def setUp(self):
        self.rng = np.random.default_rng(23)

    def test_long_walks_forget_their_start(self):
        """
        With M >= 10 d on a flat likelihood the end is uncorrelated with the start.
        """
        problem = _problem(lambda theta: 0.0)
        starts, ends = [], []
        for _ in range(1000):
            start = evaluate(problem, self.rng.random(2))
            walk = random_walk(problem, start, -np.inf, 20, self.rng)
            starts.append(start.u)
            ends.append(walk.end.u)
        starts, ends = np.array(starts), np.array(ends)
        for axis in range(2):
            correlation = np.corrcoef(starts[:, axis], ends[:, axis])[0, 1]
            self.assertLess(abs(correlation), 0.1)

    def test_chain_keeps_the_standard_normal(self):
        """
        A chain of slice steps under a normal prior has the right mean.
        """
        problem = ProblemDefinition(
            name="normal-1",
            ndim=1,
            prior_transform=standard_normal_quantile,
            log_likelihood=lambda theta: 0.0,
        )
        current = evaluate(problem, [0.5])
        values = np.empty(20_000)
        for i in range(values.size):
            current = slice_step(problem, current, -np.inf, 0, self.rng)
            values[i] = standard_normal_quantile(current.u[0])
        self.assertLess(abs(values.mean()), 4 / np.sqrt(values.size))
