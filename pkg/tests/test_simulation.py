import unittest

import numpy as np

from barrier_urns import simulation
from barrier_urns.config_utils import config_from_dict
from barrier_urns.errors import MisconfigurationError, PathIntegrityError
from barrier_urns.random_streams import continuation_seed
from barrier_urns.urn import PathRecord, init_state, step


def make_config(**overrides):
    config = {'b': 1,
              'r': 1,
              'barriers': {'family': 'fixed', 'lower': 0.2, 'upper': 0.8},
              'reinforcement': {'family': 'discrete', 'values': [0, 2], 'probabilities': [0.5, 0.5]},
              'horizon': 200}
    config.update(overrides)
    return config_from_dict(config)


class TestSimulatePath(unittest.TestCase):

    def test_simulate_path_with_fixed_seed_is_bit_identical(self):
        config = make_config()
        first = simulation.simulate_path(config, 42)
        second = simulation.simulate_path(config, 42)

        self.assertTrue(np.array_equal(first.z_series, second.z_series))
        self.assertTrue(np.array_equal(first.x, second.x))
        self.assertEqual(first.config_hash, second.config_hash)

    def test_simulate_path_with_other_seed_differs(self):
        config = make_config()

        self.assertFalse(np.array_equal(simulation.simulate_path(config, 1).z_series,
                                        simulation.simulate_path(config, 2).z_series))

    def test_simulate_path_lengths(self):
        path = simulation.simulate_path(make_config(), 3, horizon=50)

        self.assertEqual(50, path.horizon)
        self.assertEqual(51, len(path.z_series))
        self.assertEqual(51, len(path.s_series))
        self.assertEqual(0.5, path.z_series[0])
        self.assertIsNone(path.r_reinforce)

    def test_simulate_path_with_zero_reinforcement_keeps_z_constant(self):
        config = make_config(reinforcement={'family': 'point_mass', 'value': 0})
        path = simulation.simulate_path(config, 5)

        self.assertTrue(np.all(path.z_series == 0.5))

    def test_simulate_path_replays_through_scalar_step(self):
        config = make_config(barriers={'family': 'independent_uniform_pair'},
                             reinforcement={'family': 'uniform', 'low': 0, 'high': 3})
        path = simulation.simulate_path(config, 9)
        state = path.initial_state()

        for n, draw in enumerate(path.draws, start=1):
            state = step(state, draw)
            self.assertEqual(path.z_series[n], state.z)
            self.assertEqual(path.s_series[n], state.total)

    def test_simulate_path_with_red_reinforcement_records_it(self):
        config = make_config(red_reinforcement={'family': 'point_mass', 'value': 2},
                             reinforcement={'family': 'point_mass', 'value': 1})
        path = simulation.simulate_path(config, 4)

        self.assertTrue(np.all(path.r_reinforce == 2.0))
        simulation.check_replay(path)

    def test_adding_red_reinforcement_keeps_black_draws(self):
        plain = simulation.simulate_path(make_config(), 12)
        red = simulation.simulate_path(make_config(red_reinforcement={'family': 'point_mass', 'value': 1}), 12)

        self.assertTrue(np.array_equal(plain.b_reinforce, red.b_reinforce))

    def test_polya_one_step_is_fair(self):
        config = make_config(barriers={'family': 'fixed', 'lower': 0, 'upper': 1},
                             reinforcement={'family': 'point_mass', 'value': 1}, horizon=10)
        ones = [simulation.simulate_path(config, seed, horizon=1).z_series[1] for seed in range(2000)]

        self.assertEqual({1 / 3, 2 / 3}, set(ones))
        self.assertLess(abs(ones.count(2 / 3) / 2000 - 0.5), 0.05)

    def test_simulate_path_with_zero_horizon_raises_exception(self):
        with self.assertRaises(MisconfigurationError):
            simulation.simulate_path(make_config(), 1, horizon=0)


class TestReplay(unittest.TestCase):

    def test_replay_path_reproduces_record(self):
        path = simulation.simulate_path(make_config(), 21)
        black, total, z = simulation.replay_path(path)

        self.assertTrue(np.array_equal(path.black_series, black))
        self.assertTrue(np.array_equal(path.s_series, total))
        self.assertTrue(np.array_equal(path.z_series, z))

    def test_check_replay_with_corrupted_record_raises_exception(self):
        path = simulation.simulate_path(make_config(), 21)
        z = path.z_series.copy()
        z[17] += 1e-6
        corrupted = PathRecord(config_hash=path.config_hash, seed=path.seed, barriers=path.barriers,
                               initial_black=path.initial_black, initial_red=path.initial_red, x=path.x,
                               b_reinforce=path.b_reinforce, z_series=z, s_series=path.s_series,
                               black_series=path.black_series)

        with self.assertRaises(PathIntegrityError) as context:
            simulation.check_replay(corrupted)
        self.assertIn('index 17', str(context.exception))

    def test_state_at_matches_series(self):
        path = simulation.simulate_path(make_config(), 8)
        state = simulation.state_at(path, 100)

        self.assertEqual(path.z_series[100], state.z)
        self.assertEqual(100, state.step_index)


class TestSummaries(unittest.TestCase):

    def test_summarize_path_matches_full_record(self):
        config = make_config()
        path = simulation.simulate_path(config, 33)
        summary = simulation.summarize_path(config, 33, checkpoints=[0, 50, 100])

        self.assertEqual(path.z_series[-1], summary.z_terminal)
        self.assertEqual(path.z_series[-1], summary.z_hat)
        self.assertEqual(path.s_series[-1], summary.total)
        self.assertEqual(path.black_series[-1], summary.black)
        self.assertEqual(int(path.x.sum()), summary.ones)
        self.assertEqual(path.z_series[50], summary.z_at(50))
        self.assertEqual(path.z_series[0], summary.z_at(0))
        self.assertEqual(path.s_series[-1] / 200, summary.s_over_n)

    def test_summarize_path_with_tail_average(self):
        config = make_config(limit_method={'method': 'tail_average', 'window': 10})
        path = simulation.simulate_path(config, 34)
        summary = simulation.summarize_path(config, 34)

        self.assertAlmostEqual(float(np.mean(path.z_series[-10:])), summary.z_hat, places=12)

    def test_summary_without_checkpoint_raises_key_error(self):
        summary = simulation.summarize_path(make_config(), 1)

        with self.assertRaises(KeyError):
            summary.z_at(10)

    def test_continue_from_frozen_state(self):
        config = make_config()
        prefix = simulation.simulate_path(config, 5, horizon=20)
        state = simulation.state_at(prefix, 20)
        future = simulation.continue_from(config, state, continuation_seed(5, 0), checkpoints=[20, 100])

        self.assertEqual(20, future.start_step)
        self.assertEqual(180, future.steps)
        self.assertEqual(state.z, future.z_at(20))
        self.assertEqual(state.barriers, future.barriers)
        self.assertEqual(future, simulation.continue_from(config, state, continuation_seed(5, 0),
                                                          checkpoints=[20, 100]))

    def test_continue_from_fresh_state_runs_requested_steps(self):
        config = make_config()
        state = init_state(2, 3, simulation.simulate_path(config, 1, horizon=1).barriers)
        future = simulation.continue_from(config, state, 77, horizon=5)

        self.assertEqual(5, future.steps)
        self.assertTrue(0.0 < future.z_terminal < 1.0)

    def test_continue_from_past_horizon_raises_exception(self):
        config = make_config()
        state = simulation.state_at(simulation.simulate_path(config, 5, horizon=20), 20)

        with self.assertRaises(MisconfigurationError):
            simulation.continue_from(config, state, 1, horizon=20)
