import unittest

from hypothesis import given, strategies as st

from barrier_urns.errors import InvalidBarriersError, InvalidDrawError, InvalidUrnParameterError
from barrier_urns.urn import Barriers, StepDraw, UrnState, init_state, step

CLASSICAL = Barriers(0.0, 1.0)

weights = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
reinforcements = st.floats(min_value=0.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def barrier_pairs(draw):
    lower = draw(st.floats(min_value=0.0, max_value=0.99))
    upper = draw(st.floats(min_value=lower, max_value=1.0).filter(lambda u: u > lower))
    return Barriers(lower, upper)


class TestBarriers(unittest.TestCase):

    def test_barriers_with_classical_pair_is_classical(self):
        self.assertTrue(CLASSICAL.is_classical)
        self.assertFalse(Barriers(0.2, 0.8).is_classical)

    def test_barriers_with_reversed_pair_raises_exception(self):
        with self.assertRaises(InvalidBarriersError) as context:
            Barriers(0.8, 0.2)
        self.assertIn('lower must be < upper', str(context.exception))

    def test_barriers_with_equal_pair_raises_exception(self):
        with self.assertRaises(InvalidBarriersError):
            Barriers(0.5, 0.5)

    def test_barriers_outside_unit_interval_raises_exception(self):
        with self.assertRaises(InvalidBarriersError):
            Barriers(-0.1, 0.5)
        with self.assertRaises(InvalidBarriersError):
            Barriers(0.1, 1.5)


class TestInitState(unittest.TestCase):

    def test_init_state_with_symmetric_urn(self):
        state = init_state(1, 1, CLASSICAL)

        self.assertEqual(0.5, state.z)
        self.assertEqual(2.0, state.total)
        self.assertEqual(0, state.step_index)

    def test_init_state_with_barriers(self):
        state = init_state(1, 3, Barriers(0.2, 0.8))

        self.assertEqual(0.25, state.z)
        self.assertEqual(4.0, state.total)
        self.assertEqual(3.0, state.red)

    def test_init_state_with_zero_black_raises_exception(self):
        with self.assertRaises(InvalidUrnParameterError):
            init_state(0, 1, CLASSICAL)

    def test_init_state_with_non_numbers_raises_exception(self):
        for value in (float('nan'), float('inf'), True, '1', None):
            with self.assertRaises(InvalidUrnParameterError):
                init_state(value, 1, CLASSICAL)


class TestStep(unittest.TestCase):

    def test_step_black_draw_below_upper_reinforces_black(self):
        state = step(init_state(1, 1, CLASSICAL), StepDraw(x=1, b_reinforce=2))

        self.assertEqual(3.0, state.black)
        self.assertEqual(4.0, state.total)
        self.assertEqual(0.75, state.z)
        self.assertEqual(1, state.step_index)

    def test_step_black_draw_above_upper_is_blocked(self):
        state = UrnState(black=9.0, total=10.0, z=0.9, step_index=3, barriers=Barriers(0.1, 0.8))
        after = step(state, StepDraw(x=1, b_reinforce=5))

        self.assertEqual((9.0, 10.0, 0.9), (after.black, after.total, after.z))
        self.assertEqual(4, after.step_index)

    def test_step_red_draw_below_lower_is_blocked(self):
        state = UrnState(black=1.0, total=10.0, z=0.1, step_index=0, barriers=Barriers(0.2, 0.8))
        after = step(state, StepDraw(x=0, b_reinforce=3))

        self.assertEqual((1.0, 10.0), (after.black, after.total))

    def test_step_at_upper_barrier_blocks_black(self):
        state = UrnState(black=4.0, total=5.0, z=0.8, step_index=0, barriers=Barriers(0.2, 0.8))

        self.assertEqual(5.0, step(state, StepDraw(x=1, b_reinforce=1)).total)

    def test_step_at_lower_barrier_blocks_red(self):
        state = UrnState(black=1.0, total=5.0, z=0.2, step_index=0, barriers=Barriers(0.2, 0.8))

        self.assertEqual(5.0, step(state, StepDraw(x=0, b_reinforce=1)).total)

    def test_step_red_draw_with_red_reinforcement_uses_it(self):
        after = step(init_state(1, 1, CLASSICAL), StepDraw(x=0, b_reinforce=1, r_reinforce=3))

        self.assertEqual(1.0, after.black)
        self.assertEqual(5.0, after.total)

    def test_step_draw_with_invalid_values_raises_exception(self):
        with self.assertRaises(InvalidDrawError):
            StepDraw(x=2, b_reinforce=1)
        with self.assertRaises(InvalidDrawError):
            StepDraw(x=1, b_reinforce=-1)
        with self.assertRaises(InvalidDrawError):
            StepDraw(x=1, b_reinforce=float('nan'))

    @given(weights, weights, barrier_pairs(), st.integers(min_value=0, max_value=1), reinforcements)
    def test_step_keeps_weights_monotone_and_z_consistent(self, b, r, barriers, x, value):
        state = init_state(b, r, barriers)
        after = step(state, StepDraw(x=x, b_reinforce=value))

        self.assertGreaterEqual(after.black, state.black)
        self.assertGreaterEqual(after.total, state.total)
        self.assertEqual(after.black / after.total, after.z)
        self.assertTrue(0.0 < after.z < 1.0)
        if x == 0:
            self.assertEqual(state.black, after.black)

    @given(weights, weights, st.integers(min_value=0, max_value=1))
    def test_step_with_zero_reinforcement_changes_nothing(self, b, r, x):
        state = init_state(b, r, Barriers(0.3, 0.6))
        after = step(state, StepDraw(x=x, b_reinforce=0.0))

        self.assertEqual(state.z, after.z)
