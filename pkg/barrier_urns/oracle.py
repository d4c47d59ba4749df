"""
Exact enumeration of the urn law at small horizons.

States merge on bit-identical (black, total) weights. With integer initial
weights and integer reinforcement values every weight is exactly
representable, which keeps merging sound.
"""
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import singer

from barrier_urns.distributions import ReinforcementSpec, finite_support
from barrier_urns.errors import CapacityExceededError
from barrier_urns.stats import total_variation
from barrier_urns.urn import Barriers, init_state

LOGGER = singer.get_logger('barrier_urns')

MAX_HORIZON = 14
MAX_BRANCHES = 10 ** 8


@dataclass(frozen=True)
class SupportPoint:
    z: float
    s: float
    probability: float
    black: float


@dataclass(frozen=True)
class ExactDistribution:
    support: Tuple[SupportPoint, ...]
    horizon: int

    @property
    def total_probability(self) -> float:
        return sum(point.probability for point in self.support)

    def by_state(self) -> Dict[Tuple[float, float], float]:
        return {(point.black, point.s): point.probability for point in self.support}

    def to_dict(self) -> Dict:
        return {'horizon': self.horizon,
                'support': [{'z': point.z, 's': point.s, 'black': point.black, 'probability': point.probability}
                            for point in self.support]}


def _branch_bound(reinforcement: ReinforcementSpec, red: Optional[ReinforcementSpec], horizon: int) -> int:
    branches = 1
    for n in range(1, horizon + 1):
        width = len(finite_support(reinforcement, n))
        if red is not None:
            width = max(width, len(finite_support(red, n)))
        branches *= 2 * width
        if branches > MAX_BRANCHES:
            break
    return branches


def _expand(states: Dict[Tuple[float, float], float], barriers: Barriers,
            black_support: List[Tuple[float, float]],
            red_support: List[Tuple[float, float]]) -> Dict[Tuple[float, float], float]:
    merged = defaultdict(float)

    for (black, total), probability in states.items():
        z = black / total

        if z > 0:
            for value, weight in black_support:
                if z < barriers.upper:
                    merged[(black + value, total + value)] += probability * z * weight
                else:
                    merged[(black, total)] += probability * z * weight

        if z < 1:
            for value, weight in red_support:
                if z > barriers.lower:
                    merged[(black, total + value)] += probability * (1.0 - z) * weight
                else:
                    merged[(black, total)] += probability * (1.0 - z) * weight

    return merged


def enumerate_exact(b: float, r: float, barriers: Barriers, reinforcement: ReinforcementSpec, horizon: int,
                    red_reinforcement: Optional[ReinforcementSpec] = None) -> ExactDistribution:
    """
    Expands every draw and reinforcement outcome up to `horizon` steps
    Args:
        b: initial black weight
        r: initial red weight
        barriers: fixed barriers
        reinforcement: finite-support law of B_n
        horizon: number of steps, at most MAX_HORIZON
        red_reinforcement: finite-support law of R_n, None meaning R_n = B_n

    Returns: ExactDistribution of (Z_h, S_h)
    Raises: CapacityExceededError, NotEnumerableError
    """
    if horizon > MAX_HORIZON:
        raise CapacityExceededError('steps', horizon, MAX_HORIZON)
    branches = _branch_bound(reinforcement, red_reinforcement, horizon)
    if branches > MAX_BRANCHES:
        raise CapacityExceededError('branches', branches, MAX_BRANCHES)

    start = init_state(b, r, barriers)
    states = {(start.black, start.total): 1.0}

    for n in range(1, horizon + 1):
        black_support = finite_support(reinforcement, n)
        red_support = black_support if red_reinforcement is None else finite_support(red_reinforcement, n)
        states = _expand(states, barriers, black_support, red_support)

    LOGGER.debug('Enumerated %d states at horizon %d', len(states), horizon)

    support = tuple(SupportPoint(z=black / total, s=total, probability=probability, black=black)
                    for (black, total), probability in sorted(states.items(), key=lambda item: item[0][0] / item[0][1]))

    return ExactDistribution(support=support, horizon=horizon)


def exact_mean_z(dist: ExactDistribution) -> float:
    return sum(point.z * point.probability for point in dist.support)


def exact_mean_trajectory(b: float, r: float, barriers: Barriers, reinforcement: ReinforcementSpec,
                          horizon: int, red_reinforcement: Optional[ReinforcementSpec] = None) -> List[float]:
    """E(Z_h) for h = 0..horizon"""
    return [exact_mean_z(enumerate_exact(b, r, barriers, reinforcement, h, red_reinforcement))
            for h in range(horizon + 1)]


def terminal_distribution_distance(dist: ExactDistribution,
                                   terminal_states: Iterable[Tuple[float, float]]) -> float:
    """
    Total variation distance between the exact law and the empirical law of
    simulated terminal (black, total) states
    """
    counts = defaultdict(int)
    size = 0
    for state in terminal_states:
        counts[state] += 1
        size += 1

    empirical = {state: count / size for state, count in counts.items()}
    return total_variation(dist.by_state(), empirical)
