import unittest

from barrier_urns import random_streams


class TestRandomStreams(unittest.TestCase):

    def test_derive_seed_is_deterministic(self):
        self.assertEqual(random_streams.path_seed(42, 3), random_streams.path_seed(42, 3))

    def test_derive_seed_separates_keys(self):
        seeds = {random_streams.path_seed(42, i) for i in range(1000)}
        seeds |= {random_streams.continuation_seed(42, j) for j in range(1000)}

        self.assertEqual(2000, len(seeds))
        self.assertNotEqual(random_streams.path_seed(1, 0), random_streams.path_seed(2, 0))

    def test_derived_seeds_are_unsigned_64_bit(self):
        for i in range(100):
            seed = random_streams.path_seed(random_streams.MAX_SEED, i)
            self.assertTrue(0 <= seed <= random_streams.MAX_SEED)

    def test_check_seed_out_of_range_raises_exception(self):
        with self.assertRaises(ValueError):
            random_streams.check_seed(-1)
        with self.assertRaises(ValueError):
            random_streams.check_seed(random_streams.MAX_SEED + 1)

    def test_role_streams_are_independent_of_each_other(self):
        streams = random_streams.path_streams(7)
        again = random_streams.path_streams(7)

        self.assertEqual(list(streams.selection.random(5)), list(again.selection.random(5)))
        self.assertNotEqual(list(random_streams.path_streams(7).black.random(5)),
                            list(random_streams.path_streams(7).red.random(5)))

    def test_drawing_red_does_not_shift_black(self):
        first = random_streams.path_streams(11)
        first.red.random(1000)
        second = random_streams.path_streams(11)

        self.assertEqual(list(first.black.random(10)), list(second.black.random(10)))
