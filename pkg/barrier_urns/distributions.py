"""
Reinforcement and barrier specifications: sampling plus analytic moments
"""
import math

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import singer

from barrier_urns.errors import HypothesisViolationError, InvalidBarriersError, InvalidSpecError, \
    NotEnumerableError
from barrier_urns.urn import Barriers

LOGGER = singer.get_logger('barrier_urns')

PROBABILITY_TOLERANCE = 1e-9
MAX_TIE_REDRAWS = 64


class LimitMoments(NamedTuple):
    m: float
    q: float


def _check_bound(family: str, bound_c: float, largest: float, smallest: float = 0.0):
    if not (math.isfinite(bound_c) and bound_c > 0):
        raise InvalidSpecError(family, f'bound_c must be > 0, got {bound_c}')
    if smallest < 0:
        raise InvalidSpecError(family, f'support must be >= 0, got {smallest}')
    if largest > bound_c:
        raise InvalidSpecError(family, f'support exceeds bound_c={bound_c}: {largest}')


def _check_probabilities(family: str, probabilities: Sequence[float], size: int):
    if size == 0:
        raise InvalidSpecError(family, 'support must not be empty')
    if len(probabilities) != size:
        raise InvalidSpecError(family, 'values and probabilities must have the same length')
    if any(p < 0 for p in probabilities):
        raise InvalidSpecError(family, 'probabilities must be >= 0')
    if abs(sum(probabilities) - 1.0) > PROBABILITY_TOLERANCE:
        raise InvalidSpecError(family, f'probabilities must sum to 1, got {sum(probabilities)}')


class ReinforcementSpec(ABC):
    """Law of the reinforcement B_n, bounded by bound_c for every n"""
    family = ''
    bound_c: float

    @abstractmethod
    def sample(self, start: int, count: int, stream: np.random.Generator) -> np.ndarray:
        """Draws B_start, ..., B_{start+count-1}"""

    @abstractmethod
    def moments(self, n: int) -> Tuple[float, float]:
        """Exact (E(B_n), E(B_n^2))"""

    def limit(self) -> LimitMoments:
        return LimitMoments(*self.moments(1))

    def support(self, n: int) -> List[Tuple[float, float]]:
        raise NotEnumerableError(f'{self.family} reinforcement has no finite support')

    @property
    def is_stationary(self) -> bool:
        return True

    @abstractmethod
    def to_dict(self) -> Dict:
        """Config representation"""


@dataclass(frozen=True)
class PointMass(ReinforcementSpec):
    family = 'point_mass'
    value: float
    bound_c: float

    def __post_init__(self):
        _check_bound(self.family, self.bound_c, self.value, self.value)

    def sample(self, start, count, stream):
        return np.full(count, float(self.value))

    def moments(self, n):
        return float(self.value), float(self.value) ** 2

    def support(self, n):
        return [(float(self.value), 1.0)]

    def to_dict(self):
        return {'family': self.family, 'value': self.value, 'bound_c': self.bound_c}


@dataclass(frozen=True)
class Discrete(ReinforcementSpec):
    family = 'discrete'
    values: Tuple[float, ...]
    probabilities: Tuple[float, ...]
    bound_c: float

    def __post_init__(self):
        _check_probabilities(self.family, self.probabilities, len(self.values))
        _check_bound(self.family, self.bound_c, max(self.values), min(self.values))

    def sample(self, start, count, stream):
        return stream.choice(np.asarray(self.values, dtype=float), size=count, p=self.probabilities)

    def moments(self, n):
        mean = sum(p * v for v, p in zip(self.values, self.probabilities))
        second = sum(p * v * v for v, p in zip(self.values, self.probabilities))
        return float(mean), float(second)

    def support(self, n):
        return [(float(v), float(p)) for v, p in zip(self.values, self.probabilities) if p > 0]

    def to_dict(self):
        return {'family': self.family,
                'values': list(self.values),
                'probabilities': list(self.probabilities),
                'bound_c': self.bound_c}


@dataclass(frozen=True)
class Uniform(ReinforcementSpec):
    family = 'uniform'
    low: float
    high: float
    bound_c: float

    def __post_init__(self):
        if not self.low < self.high:
            raise InvalidSpecError(self.family, 'low must be < high')
        _check_bound(self.family, self.bound_c, self.high, self.low)

    def sample(self, start, count, stream):
        return stream.uniform(self.low, self.high, size=count)

    def moments(self, n):
        low, high = float(self.low), float(self.high)
        return (low + high) / 2, (low * low + low * high + high * high) / 3

    def to_dict(self):
        return {'family': self.family, 'low': self.low, 'high': self.high, 'bound_c': self.bound_c}


@dataclass(frozen=True)
class ScaledBeta(ReinforcementSpec):
    """c times a Beta(alpha, beta) variable"""
    family = 'scaled_beta'
    alpha: float
    beta: float
    c: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidSpecError(self.family, 'alpha and beta must be > 0')
        _check_bound(self.family, self.c, self.c)

    @property
    def bound_c(self):
        return self.c

    def sample(self, start, count, stream):
        return self.c * stream.beta(self.alpha, self.beta, size=count)

    def moments(self, n):
        a, b, c = float(self.alpha), float(self.beta), float(self.c)
        return c * a / (a + b), c * c * a * (a + 1) / ((a + b) * (a + b + 1))

    def to_dict(self):
        return {'family': self.family, 'alpha': self.alpha, 'beta': self.beta, 'c': self.c}


@dataclass(frozen=True)
class DeterministicSequence(ReinforcementSpec):
    """
    B_n = values[n-1] for n <= len(values), level + decay / n afterwards.
    The limit (m, q) is declared, not derived.
    """
    family = 'deterministic_sequence'
    level: float
    limit_m: float
    limit_q: float
    bound_c: float
    values: Tuple[float, ...] = field(default=())
    decay: float = 0.0

    def __post_init__(self):
        tail_first = self.level + self.decay / (len(self.values) + 1)
        extremes = list(self.values) + [self.level, tail_first]
        _check_bound(self.family, self.bound_c, max(extremes), min(extremes))
        if self.limit_m < 0:
            raise InvalidSpecError(self.family, 'declared m must be >= 0')
        if self.limit_q < self.limit_m ** 2:
            raise InvalidSpecError(self.family, f'declared q={self.limit_q} must be >= m^2={self.limit_m ** 2}')

    @property
    def is_stationary(self):
        return False

    def value(self, n: int) -> float:
        if n <= len(self.values):
            return float(self.values[n - 1])
        return self.level + self.decay / n

    def sample(self, start, count, stream):
        steps = np.arange(start, start + count, dtype=float)
        out = self.level + self.decay / steps
        prefix = max(0, min(len(self.values) - start + 1, count))
        if prefix:
            out[:prefix] = self.values[start - 1:start - 1 + prefix]
        return out

    def moments(self, n):
        value = self.value(n)
        return value, value * value

    def limit(self):
        return LimitMoments(float(self.limit_m), float(self.limit_q))

    def support(self, n):
        return [(self.value(n), 1.0)]

    def to_dict(self):
        return {'family': self.family,
                'values': list(self.values),
                'level': self.level,
                'decay': self.decay,
                'limit': {'m': self.limit_m, 'q': self.limit_q},
                'bound_c': self.bound_c}


class BarrierSpec(ABC):
    """Law of the barrier pair (L, U), sampled once per path"""
    family = ''

    @abstractmethod
    def sample(self, stream: np.random.Generator) -> Barriers:
        """Draws one barrier pair"""

    @property
    def fixed(self) -> Optional[Barriers]:
        """The barriers when they are not random, None otherwise"""
        return None

    @abstractmethod
    def to_dict(self) -> Dict:
        """Config representation"""


@dataclass(frozen=True)
class FixedBarriers(BarrierSpec):
    family = 'fixed'
    lower: float
    upper: float

    def __post_init__(self):
        Barriers(self.lower, self.upper)

    @property
    def fixed(self):
        return Barriers(float(self.lower), float(self.upper))

    def sample(self, stream):
        return self.fixed

    def to_dict(self):
        return {'family': self.family, 'lower': self.lower, 'upper': self.upper}


@dataclass(frozen=True)
class IndependentUniformPair(BarrierSpec):
    """The ordered pair of two independent Uniform(low, high) variables, i.e. a uniform pair given L < U"""
    family = 'independent_uniform_pair'
    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.low < self.high <= 1.0:
            raise InvalidSpecError(self.family, 'need 0 <= low < high <= 1')

    def sample(self, stream):
        for _ in range(MAX_TIE_REDRAWS):
            first, second = stream.uniform(self.low, self.high, size=2)
            if first != second:
                return Barriers(float(min(first, second)), float(max(first, second)))

        raise InvalidBarriersError(self.low, self.high, f'no distinct pair in {MAX_TIE_REDRAWS} draws')

    def to_dict(self):
        return {'family': self.family, 'low': self.low, 'high': self.high}


@dataclass(frozen=True)
class DiscreteJointBarriers(BarrierSpec):
    family = 'discrete_joint'
    pairs: Tuple[Tuple[float, float], ...]
    probabilities: Tuple[float, ...]

    def __post_init__(self):
        _check_probabilities(self.family, self.probabilities, len(self.pairs))
        for lower, upper in self.pairs:
            Barriers(lower, upper)

    @property
    def fixed(self):
        support = [pair for pair, p in zip(self.pairs, self.probabilities) if p > 0]
        if len(set(support)) == 1:
            return Barriers(float(support[0][0]), float(support[0][1]))
        return None

    def sample(self, stream):
        index = stream.choice(len(self.pairs), p=self.probabilities)
        lower, upper = self.pairs[index]
        return Barriers(float(lower), float(upper))

    def to_dict(self):
        return {'family': self.family,
                'pairs': [list(pair) for pair in self.pairs],
                'probabilities': list(self.probabilities)}


def _support_max(config: Dict) -> float:
    family = config['family']
    if family == 'point_mass':
        return config['value']
    if family == 'discrete':
        return max(config['values'])
    if family == 'uniform':
        return config['high']
    values = list(config.get('values', []))
    decay = config.get('decay', 0.0)
    return max(values + [config['level'], config['level'] + decay / (len(values) + 1)])


def reinforcement_from_dict(config: Dict) -> ReinforcementSpec:
    """
    Builds a reinforcement spec from its (schema-checked) config representation.
    bound_c defaults to max(sup of the support, 1).
    Raises: InvalidSpecError on semantic violations
    """
    family = config['family']

    if family == 'scaled_beta':
        return ScaledBeta(alpha=config['alpha'], beta=config['beta'], c=config['c'])

    bound_c = config.get('bound_c', max(_support_max(config), 1.0))

    if family == 'point_mass':
        return PointMass(value=config['value'], bound_c=bound_c)
    if family == 'discrete':
        return Discrete(values=tuple(config['values']),
                        probabilities=tuple(config['probabilities']),
                        bound_c=bound_c)
    if family == 'uniform':
        return Uniform(low=config['low'], high=config['high'], bound_c=bound_c)
    if family == 'deterministic_sequence':
        return DeterministicSequence(values=tuple(config.get('values', ())),
                                     level=config['level'],
                                     decay=config.get('decay', 0.0),
                                     limit_m=config['limit']['m'],
                                     limit_q=config['limit']['q'],
                                     bound_c=bound_c)

    raise InvalidSpecError(family, 'unknown reinforcement family')


def barriers_from_dict(config: Dict) -> BarrierSpec:
    """
    Builds a barrier spec from its (schema-checked) config representation
    Raises: InvalidSpecError or InvalidBarriersError on semantic violations
    """
    family = config['family']

    if family == 'fixed':
        return FixedBarriers(lower=config['lower'], upper=config['upper'])
    if family == 'independent_uniform_pair':
        return IndependentUniformPair(low=config.get('low', 0.0), high=config.get('high', 1.0))
    if family == 'discrete_joint':
        return DiscreteJointBarriers(pairs=tuple(tuple(pair) for pair in config['pairs']),
                                     probabilities=tuple(config['probabilities']))

    raise InvalidSpecError(family, 'unknown barrier family')


def sample_reinforcements(spec: ReinforcementSpec, start: int, count: int,
                          stream: np.random.Generator) -> np.ndarray:
    """
    Draws B_start, ..., B_{start+count-1} (steps are numbered from 1)
    """
    return np.asarray(spec.sample(start, count, stream), dtype=np.float64)


def sample_reinforcement(spec: ReinforcementSpec, n: int, stream: np.random.Generator) -> float:
    return float(sample_reinforcements(spec, n, 1, stream)[0])


def analytic_moments(spec: ReinforcementSpec, n: int) -> Tuple[float, float]:
    return spec.moments(n)


def limit_moments(spec: ReinforcementSpec) -> LimitMoments:
    """
    The limiting pair (m, q). A zero m is logged: it only supports the
    convergence experiments that need liminf E(B_n) > 0, not the CLT ones.
    """
    limit = spec.limit()
    if limit.m <= 0:
        LOGGER.warning('Reinforcement %s has limit mean m=%s, CLT hypotheses do not hold', spec.family, limit.m)

    return limit


def require_positive_mean(spec: ReinforcementSpec) -> LimitMoments:
    """
    Returns: (m, q)
    Raises: HypothesisViolationError if m = 0
    """
    limit = spec.limit()
    if limit.m <= 0:
        raise HypothesisViolationError(f'Reinforcement {spec.family} has limit mean m={limit.m}, need m > 0')

    return limit


def finite_support(spec: ReinforcementSpec, n: int) -> List[Tuple[float, float]]:
    """
    Returns: [(value, probability)] of B_n
    Raises: NotEnumerableError for continuous families
    """
    return spec.support(n)


def sample_barriers(spec: BarrierSpec, stream: np.random.Generator) -> Barriers:
    return spec.sample(stream)
