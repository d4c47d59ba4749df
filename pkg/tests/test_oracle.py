import unittest

from barrier_urns import oracle
from barrier_urns.distributions import Discrete, PointMass, Uniform
from barrier_urns.errors import CapacityExceededError, NotEnumerableError
from barrier_urns.urn import Barriers

CLASSICAL = Barriers(0.0, 1.0)
UNIT = PointMass(value=1, bound_c=1)


class TestEnumerateExact(unittest.TestCase):

    def test_one_step_polya_urn(self):
        dist = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 1)

        self.assertEqual(2, len(dist.support))
        self.assertAlmostEqual(1 / 3, dist.support[0].z, places=15)
        self.assertAlmostEqual(2 / 3, dist.support[1].z, places=15)
        self.assertEqual([0.5, 0.5], [point.probability for point in dist.support])
        self.assertEqual({3.0}, {point.s for point in dist.support})

    def test_polya_urn_is_uniform_on_grid(self):
        for horizon in (2, 5, 9):
            dist = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, horizon)

            self.assertEqual(horizon + 1, len(dist.support))
            for j, point in enumerate(dist.support):
                self.assertAlmostEqual((1 + j) / (horizon + 2), point.z, places=12)
                self.assertAlmostEqual(1 / (horizon + 1), point.probability, places=12)
            self.assertAlmostEqual(1.0, dist.total_probability, places=12)

    def test_zero_reinforcement_has_single_point(self):
        dist = oracle.enumerate_exact(1, 1, Barriers(0.2, 0.8), PointMass(value=0, bound_c=1), 6)

        self.assertEqual(1, len(dist.support))
        self.assertEqual(0.5, dist.support[0].z)
        self.assertAlmostEqual(1.0, dist.support[0].probability, places=12)

    def test_classical_urn_mean_is_preserved(self):
        reinforcement = Discrete(values=(0, 2), probabilities=(0.5, 0.5), bound_c=2)

        self.assertAlmostEqual(0.5, oracle.exact_mean_z(oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 8)),
                               places=12)
        self.assertAlmostEqual(0.25, oracle.exact_mean_z(
            oracle.enumerate_exact(1, 3, CLASSICAL, reinforcement, 6)), places=12)

    def test_lower_barrier_at_start_makes_mean_grow(self):
        trajectory = oracle.exact_mean_trajectory(1, 1, Barriers(0.5, 1.0), UNIT, 6)

        self.assertEqual(7, len(trajectory))
        self.assertEqual(0.5, trajectory[0])
        self.assertTrue(all(mean >= 0.5 - 1e-12 for mean in trajectory))
        self.assertGreater(trajectory[-1], 0.5)

    def test_barriers_keep_mass_and_bound_proportions(self):
        reinforcement = Discrete(values=(0, 2), probabilities=(0.5, 0.5), bound_c=2)
        dist = oracle.enumerate_exact(1, 1, Barriers(0.4, 0.6), reinforcement, 8)

        self.assertAlmostEqual(1.0, dist.total_probability, places=12)
        self.assertTrue(all(0.0 < point.z < 1.0 for point in dist.support))
        self.assertEqual(len(dist.support), len(dist.by_state()))

    def test_red_reinforcement_changes_law(self):
        dist = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 1, red_reinforcement=PointMass(value=2, bound_c=2))

        self.assertEqual({(2.0, 3.0): 0.5, (1.0, 4.0): 0.5}, dist.by_state())

    def test_to_dict_lists_support(self):
        document = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 1).to_dict()

        self.assertEqual(1, document['horizon'])
        self.assertEqual(2, len(document['support']))
        self.assertEqual({'z', 's', 'black', 'probability'}, set(document['support'][0]))


class TestEnumerationGuards(unittest.TestCase):

    def test_too_many_steps_raises_exception(self):
        with self.assertRaises(CapacityExceededError) as context:
            oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, oracle.MAX_HORIZON + 1)
        self.assertIn('steps', str(context.exception))

    def test_too_many_branches_raises_exception(self):
        reinforcement = Discrete(values=tuple(range(10)), probabilities=(0.1,) * 10, bound_c=9)

        with self.assertRaises(CapacityExceededError) as context:
            oracle.enumerate_exact(1, 1, CLASSICAL, reinforcement, 12)
        self.assertIn('branches', str(context.exception))

    def test_continuous_reinforcement_raises_exception(self):
        with self.assertRaises(NotEnumerableError):
            oracle.enumerate_exact(1, 1, CLASSICAL, Uniform(low=0, high=1, bound_c=1), 3)


class TestTerminalDistance(unittest.TestCase):

    def test_matching_sample_has_zero_distance(self):
        dist = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 1)

        self.assertEqual(0.0, oracle.terminal_distribution_distance(
            dist, [(2.0, 3.0), (1.0, 3.0), (1.0, 3.0), (2.0, 3.0)]))

    def test_one_sided_sample_has_half_distance(self):
        dist = oracle.enumerate_exact(1, 1, CLASSICAL, UNIT, 1)

        self.assertEqual(0.5, oracle.terminal_distribution_distance(dist, [(2.0, 3.0)] * 4))
