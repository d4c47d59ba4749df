import math
import unittest

import numpy as np

from barrier_urns import decomposition, simulation
from barrier_urns.config_utils import config_from_dict
from barrier_urns.errors import PathIntegrityError
from barrier_urns.urn import Barriers, PathRecord


def make_config(**overrides):
    config = {'b': 1,
              'r': 1,
              'barriers': {'family': 'independent_uniform_pair'},
              'reinforcement': {'family': 'uniform', 'low': 0, 'high': 2},
              'horizon': 2000}
    config.update(overrides)
    return config_from_dict(config)


def hand_record(barriers, black, total, x, b_values):
    """A one-step record built from an initial (black, total) and one draw"""
    if x == 1 and black / total < barriers.upper:
        black_next, total_next = black + b_values, total + b_values
    elif x == 0 and black / total > barriers.lower:
        black_next, total_next = black, total + b_values
    else:
        black_next, total_next = black, total
    return PathRecord(config_hash='', seed=0, barriers=barriers,
                      initial_black=black, initial_red=total - black,
                      x=np.array([x], dtype=np.int8),
                      b_reinforce=np.array([float(b_values)]),
                      z_series=np.array([black / total, black_next / total_next]),
                      s_series=np.array([float(total), float(total_next)]),
                      black_series=np.array([float(black), float(black_next)]))


class TestComputeSeries(unittest.TestCase):

    def test_h_below_lower_barrier(self):
        path = hand_record(Barriers(0.2, 0.8), black=0.4, total=4.0, x=1, b_values=2)
        series = decomposition.compute_series(path)

        self.assertAlmostEqual(0.3, series.h[0], places=15)

    def test_delta_inside_barriers_matches_increment(self):
        path = hand_record(Barriers(0.2, 0.8), black=2.0, total=4.0, x=1, b_values=2)
        series = decomposition.compute_series(path)

        self.assertEqual(0.0, series.h[0])
        self.assertAlmostEqual(1 / 6, series.delta[0], places=15)
        self.assertAlmostEqual(path.z_series[1] - path.z_series[0], series.delta[0], places=15)
        self.assertIsNone(series.last_nonzero_h)

    def test_series_shapes_and_conventions(self):
        path = simulation.simulate_path(make_config(), 3)
        series = decomposition.compute_series(path)
        horizon = path.horizon

        self.assertEqual(horizon, len(series.h))
        self.assertEqual(horizon, len(series.delta))
        for name in ('m_martingale', 't_product', 'w', 'f_tail', 'black_count', 'red_count'):
            self.assertEqual(horizon + 1, len(getattr(series, name)))
        self.assertEqual(1.0, series.t_product[0])
        self.assertEqual(1.0, series.t_product[1])
        self.assertEqual(0.0, series.m_martingale[0])
        self.assertAlmostEqual(series.m_martingale[-1], float(np.sum(series.delta)), places=12)
        self.assertTrue(np.allclose(series.black_count + series.red_count, path.s_series))
        self.assertEqual(1.0, series.f_tail[-1])

    def test_t_product_and_f_tail_products(self):
        path = simulation.simulate_path(make_config(horizon=50), 4)
        series = decomposition.compute_series(path)
        factors = 1.0 + series.h

        self.assertAlmostEqual(math.prod(factors[1:9]), series.t_product[9], places=12)
        self.assertAlmostEqual(math.prod(factors[10:]), series.f_tail[10], places=12)

    def test_h_sign_structure(self):
        path = simulation.simulate_path(make_config(barriers={'family': 'fixed', 'lower': 0.3, 'upper': 0.6}), 5)
        series = decomposition.compute_series(path)
        z = path.z_series[:-1]

        self.assertTrue(np.all(series.h[z <= 0.3] >= 0))
        self.assertTrue(np.all(series.h[z >= 0.6] <= 0))
        self.assertTrue(np.all(series.h[(z > 0.3) & (z < 0.6)] == 0))

    def test_classical_urn_has_no_drift(self):
        path = simulation.simulate_path(make_config(barriers={'family': 'fixed', 'lower': 0, 'upper': 1}), 6)
        series = decomposition.compute_series(path)

        self.assertTrue(np.all(series.h == 0))
        self.assertTrue(np.all(series.t_product == 1))
        self.assertTrue(np.allclose(series.w, path.z_series))

    def test_abs_h_partial_sums_are_non_decreasing(self):
        series = decomposition.compute_series(simulation.simulate_path(make_config(), 7))

        self.assertTrue(np.all(np.diff(series.abs_h_partial_sums) >= 0))
        if series.last_nonzero_h is not None:
            self.assertNotEqual(0.0, series.h[series.last_nonzero_h])
            self.assertTrue(np.all(series.h[series.last_nonzero_h + 1:] == 0))

    def test_compute_series_with_red_reinforcement_raises_exception(self):
        config = make_config(red_reinforcement={'family': 'point_mass', 'value': 1})

        with self.assertRaises(PathIntegrityError):
            decomposition.compute_series(simulation.simulate_path(config, 1))


class TestIdentity(unittest.TestCase):

    def test_verify_identity_on_random_paths_passes(self):
        for seed in range(10):
            path = simulation.simulate_path(make_config(), seed)
            series = decomposition.compute_series(path)

            self.assertTrue(decomposition.verify_identity(path, series).passed)
            self.assertTrue(decomposition.verify_martingale_representation(path, series).passed)

    def test_verify_identity_with_corrupted_z_fails_at_index(self):
        path = simulation.simulate_path(make_config(), 11)
        series = decomposition.compute_series(path)
        z = path.z_series.copy()
        z[40] += 1e-6
        corrupted = PathRecord(config_hash='', seed=path.seed, barriers=path.barriers,
                               initial_black=path.initial_black, initial_red=path.initial_red, x=path.x,
                               b_reinforce=path.b_reinforce, z_series=z, s_series=path.s_series,
                               black_series=path.black_series)

        with self.assertLogs('barrier_urns', level='WARNING'):
            report = decomposition.verify_identity(corrupted, series)

        self.assertFalse(report.passed)
        self.assertIn(report.worst_step, (39, 40))
        self.assertAlmostEqual(1e-6, report.max_residual, delta=1e-7)

    def test_sn_over_n_for_unit_reinforcement(self):
        config = make_config(barriers={'family': 'fixed', 'lower': 0, 'upper': 1},
                             reinforcement={'family': 'point_mass', 'value': 1}, horizon=100)
        path = simulation.simulate_path(config, 1)
        steps = np.arange(1, 101)

        self.assertTrue(np.allclose((2.0 + steps) / steps, decomposition.sn_over_n(path)))
