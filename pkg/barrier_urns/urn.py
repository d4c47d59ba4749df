"""
Urn composition and its update rule

Ball counts are real weights. Only `black` and `total` are authoritative,
the proportion `z` is always recomputed as black / total.
"""
import math
import numbers

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from barrier_urns.errors import InvalidBarriersError, InvalidDrawError, InvalidUrnParameterError


@dataclass(frozen=True)
class Barriers:
    """Random barriers (L, U): black is reinforced only below `upper`, red only above `lower`"""
    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower < 1.0:
            raise InvalidBarriersError(self.lower, self.upper, 'lower must be in [0, 1)')
        if not 0.0 < self.upper <= 1.0:
            raise InvalidBarriersError(self.lower, self.upper, 'upper must be in (0, 1]')
        if self.lower >= self.upper:
            raise InvalidBarriersError(self.lower, self.upper, 'lower must be < upper')

    @property
    def is_classical(self) -> bool:
        """True when both indicators are always on, i.e. the barrier-free urn"""
        return self.lower == 0.0 and self.upper == 1.0

    def to_dict(self):
        return {'lower': self.lower, 'upper': self.upper}


@dataclass(frozen=True)
class UrnState:
    black: float
    total: float
    z: float
    step_index: int
    barriers: Barriers

    @property
    def red(self) -> float:
        return self.total - self.black


@dataclass(frozen=True)
class StepDraw:
    """
    One draw: x = 1 when a black ball is drawn, b_reinforce is B_n.
    r_reinforce is the red-side reinforcement R_n, None meaning R_n = B_n.
    """
    x: int
    b_reinforce: float
    r_reinforce: Optional[float] = None

    def __post_init__(self):
        if self.x not in (0, 1):
            raise InvalidDrawError(f"Draw indicator must be 0 or 1, got {self.x}")
        if not self.b_reinforce >= 0:
            raise InvalidDrawError(f"Black reinforcement must be >= 0, got {self.b_reinforce}")
        if self.r_reinforce is not None and not self.r_reinforce >= 0:
            raise InvalidDrawError(f"Red reinforcement must be >= 0, got {self.r_reinforce}")

    @property
    def red_reinforce(self) -> float:
        return self.b_reinforce if self.r_reinforce is None else self.r_reinforce


@dataclass(frozen=True, eq=False)
class PathRecord:
    """
    Full trajectory of one path. Arrays of draws have N entries (steps 1..N),
    state series have N+1 entries (times 0..N).
    """
    config_hash: str
    seed: int
    barriers: Barriers
    initial_black: float
    initial_red: float
    x: np.ndarray
    b_reinforce: np.ndarray
    z_series: np.ndarray
    s_series: np.ndarray
    black_series: np.ndarray
    r_reinforce: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        horizon = len(self.x)
        if len(self.b_reinforce) != horizon:
            raise InvalidDrawError('Draw arrays have different lengths')
        if self.r_reinforce is not None and len(self.r_reinforce) != horizon:
            raise InvalidDrawError('Draw arrays have different lengths')
        for name in ('z_series', 's_series', 'black_series'):
            if len(getattr(self, name)) != horizon + 1:
                raise InvalidDrawError(f'{name} must have {horizon + 1} entries')

    @property
    def horizon(self) -> int:
        return len(self.x)

    @property
    def red_reinforce(self) -> np.ndarray:
        return self.b_reinforce if self.r_reinforce is None else self.r_reinforce

    @property
    def draws(self) -> List[StepDraw]:
        if self.r_reinforce is None:
            return [StepDraw(int(x), float(b)) for x, b in zip(self.x, self.b_reinforce)]

        return [StepDraw(int(x), float(b), float(r))
                for x, b, r in zip(self.x, self.b_reinforce, self.r_reinforce)]

    def initial_state(self) -> UrnState:
        return init_state(self.initial_black, self.initial_red, self.barriers)


def init_state(b: float, r: float, barriers: Barriers) -> UrnState:
    """
    Builds the urn at time 0
    Args:
        b: initial black weight
        r: initial red weight
        barriers: the path's barriers

    Returns: UrnState at step 0
    Raises: InvalidUrnParameterError if b or r is not a positive finite number
    """
    for name, value in (('b', b), ('r', r)):
        if isinstance(value, bool) or not isinstance(value, numbers.Real) \
                or not math.isfinite(value) or value <= 0:
            raise InvalidUrnParameterError(name, value, 'must be a positive real')

    black = float(b)
    total = black + float(r)

    return UrnState(black=black, total=total, z=black / total, step_index=0, barriers=barriers)


def step(state: UrnState, draw: StepDraw) -> UrnState:
    """
    Applies one draw. Black is reinforced iff z < upper, red iff z > lower;
    equality at a barrier blocks reinforcement.
    Args:
        state: current state
        draw: the draw of the next step

    Returns: the next state
    """
    black = state.black
    total = state.total

    if draw.x == 1:
        if state.z < state.barriers.upper:
            black += draw.b_reinforce
            total += draw.b_reinforce
    elif state.z > state.barriers.lower:
        total += draw.red_reinforce

    return UrnState(black=black,
                    total=total,
                    z=black / total,
                    step_index=state.step_index + 1,
                    barriers=state.barriers)
