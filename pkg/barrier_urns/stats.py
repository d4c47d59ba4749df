"""
Estimators and goodness-of-fit machinery
"""
import math

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from barrier_urns.config_utils import TAIL_AVERAGE, TERMINAL, LimitMethod
from barrier_urns.errors import EmptySampleError, HypothesisViolationError, MisconfigurationError
from barrier_urns.urn import PathRecord

KS_SERIES_EPSILON = 1e-12
# below this scaled distance the theta-function form converges faster
KS_SMALL_LAMBDA = 1.18

CRITERIA = ('<', '<=', '>', '>=', 'p>', 'p<')


@dataclass(frozen=True)
class LimitEstimate:
    z_hat: float
    method: LimitMethod
    horizon: int


@dataclass(frozen=True)
class Provenance:
    config_hash: str
    master_seed: int


@dataclass(frozen=True)
class TestReport:
    """
    Outcome of one statistical check. `passed` depends only on the statistic
    (or p-value), the criterion and the threshold.
    """
    __test__ = False

    name: str
    statistic: float
    threshold: float
    criterion: str
    sample_size: int
    provenance: Provenance
    p_value: Optional[float] = None
    gated: bool = True
    skipped: bool = False
    details: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise MisconfigurationError(f'Unknown criterion {self.criterion}, expected one of {CRITERIA}')

    @property
    def passed(self) -> bool:
        if self.skipped:
            return False
        if self.criterion == '<':
            return self.statistic < self.threshold
        if self.criterion == '<=':
            return self.statistic <= self.threshold
        if self.criterion == '>':
            return self.statistic > self.threshold
        if self.criterion == '>=':
            return self.statistic >= self.threshold
        if self.p_value is None:
            return False
        if self.criterion == 'p>':
            return self.p_value > self.threshold
        return self.p_value < self.threshold

    def to_dict(self) -> Dict:
        return {'name': self.name,
                'statistic': _finite_or_none(self.statistic),
                'p_value': _finite_or_none(self.p_value),
                'threshold': self.threshold,
                'criterion': self.criterion,
                'pass': self.passed,
                'gated': self.gated,
                'skipped': self.skipped,
                'sample_size': self.sample_size,
                'provenance': {'config_hash': self.provenance.config_hash,
                               'master_seed': self.provenance.master_seed},
                'details': _json_safe(self.details)}


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _json_safe(value):
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _finite_or_none(value)
    return value


def sigma2(m: float, q: float, z: float) -> float:
    """
    Limiting variance q z (1 - z) / m^2
    Raises: HypothesisViolationError if m <= 0
    """
    if m <= 0:
        raise HypothesisViolationError(f'sigma^2 needs m > 0, got m={m}')

    return q * z * (1.0 - z) / (m * m)


def estimate_limit_from_series(z_series: Sequence[float], method: LimitMethod) -> LimitEstimate:
    """
    Estimates the limit of a proportion series Z_0..Z_N
    Args:
        z_series: the proportions
        method: terminal (Z_N) or tail_average (mean of the last `window` proportions)

    Returns: LimitEstimate
    """
    z_series = np.asarray(z_series, dtype=np.float64)
    horizon = len(z_series) - 1

    if method.method == TERMINAL:
        return LimitEstimate(z_hat=float(z_series[-1]), method=method, horizon=horizon)

    if method.method != TAIL_AVERAGE:
        raise MisconfigurationError(f'Unknown limit method {method.method}')
    if not 1 <= method.window <= horizon:
        raise MisconfigurationError(f'tail window {method.window} must be in [1, {horizon}]')

    return LimitEstimate(z_hat=float(np.mean(z_series[-method.window:])), method=method, horizon=horizon)


def estimate_limit(path: PathRecord, method: LimitMethod) -> LimitEstimate:
    return estimate_limit_from_series(path.z_series, method)


def standard_normal_cdf(x):
    """Phi(x), scalar or array"""
    out = special.ndtr(x)
    return float(out) if np.ndim(out) == 0 else out


def ks_statistic(sample: Sequence[float], cdf: Callable) -> float:
    """
    One-sample Kolmogorov-Smirnov distance D = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n)
    Args:
        sample: observations, sorted here if they are not already
        cdf: vectorised target CDF

    Returns: D in [0, 1]
    Raises: EmptySampleError
    """
    values = np.sort(np.asarray(sample, dtype=np.float64))
    size = len(values)
    if size == 0:
        raise EmptySampleError('KS statistic of an empty sample')

    cdf_values = np.asarray(cdf(values), dtype=np.float64)
    ranks = np.arange(1, size + 1, dtype=np.float64)
    d_plus = np.max(ranks / size - cdf_values)
    d_minus = np.max(cdf_values - (ranks - 1) / size)

    return float(min(1.0, max(d_plus, d_minus, 0.0)))


def ks_pvalue(d: float, n: int) -> float:
    """
    Asymptotic Kolmogorov p-value 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), lambda = sqrt(n) d.
    For small lambda the equivalent 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)) is summed.
    Series stop once a term drops below 1e-12; the result is clamped to [0, 1].
    """
    if n < 1:
        raise MisconfigurationError(f'KS p-value needs n >= 1, got {n}')

    lam = math.sqrt(n) * d
    if lam <= 0:
        return 1.0

    total = 0.0
    k = 1
    if lam < KS_SMALL_LAMBDA:
        factor = -math.pi ** 2 / (8 * lam * lam)
        while True:
            term = math.exp(factor * (2 * k - 1) ** 2)
            total += term
            if term < KS_SERIES_EPSILON:
                break
            k += 1
        p_value = 1.0 - math.sqrt(2 * math.pi) / lam * total
    else:
        sign = 1.0
        while True:
            term = math.exp(-2.0 * k * k * lam * lam)
            total += sign * term
            if term < KS_SERIES_EPSILON:
                break
            sign = -sign
            k += 1
        p_value = 2.0 * total

    return min(1.0, max(0.0, p_value))


def ks_test(sample: Sequence[float], cdf: Callable) -> Tuple[float, float]:
    """Returns: (D, asymptotic p-value)"""
    d = ks_statistic(sample, cdf)
    return d, ks_pvalue(d, len(sample))


def max_atom_mass(samples: Sequence[float], bin_width: float) -> float:
    """
    Largest fraction of samples falling in one bin of [0, 1] of the given width
    Raises: EmptySampleError, MisconfigurationError for a non-positive width
    """
    if bin_width <= 0:
        raise MisconfigurationError(f'bin width must be > 0, got {bin_width}')

    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        raise EmptySampleError('Atom mass of an empty sample')

    bins = int(math.ceil(1.0 / bin_width))
    indices = np.clip(np.floor(values / bin_width).astype(np.int64), 0, bins - 1)
    counts = np.bincount(indices, minlength=bins)

    return float(counts.max() / values.size)


def empirical_moments(values: Sequence[float]) -> Tuple[float, float]:
    """
    Returns: (sample mean, sample second raw moment)
    Raises: EmptySampleError
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptySampleError('Moments of an empty sample')

    return float(np.mean(values)), float(np.mean(values * values))


def total_variation(first: Mapping[Hashable, float], second: Mapping[Hashable, float]) -> float:
    """Total variation distance between two finite distributions keyed by state"""
    keys = set(first) | set(second)
    return 0.5 * sum(abs(first.get(key, 0.0) - second.get(key, 0.0)) for key in keys)


def binned_mean_test(values: Sequence[float], covariate: Sequence[float], bins: int) -> Tuple[float, Dict]:
    """
    Bins `values` by quantiles of `covariate` and measures how far each bin mean is from 0
    Returns: (max |mean| / standard error over bins with >= 2 values, per-bin details)
    """
    values = np.asarray(values, dtype=np.float64)
    covariate = np.asarray(covariate, dtype=np.float64)
    if values.size == 0:
        raise EmptySampleError('Binned mean of an empty sample')

    edges = np.unique(np.quantile(covariate, np.linspace(0, 1, bins + 1)))
    labels = np.clip(np.searchsorted(edges, covariate, side='right') - 1, 0, max(len(edges) - 2, 0))

    worst = 0.0
    per_bin = {}
    for label in np.unique(labels):
        chunk = values[labels == label]
        if chunk.size < 2:
            continue
        error = chunk.std(ddof=1) / math.sqrt(chunk.size)
        mean = float(chunk.mean())
        score = abs(mean) / error if error > 0 else (0.0 if mean == 0 else math.inf)
        worst = max(worst, score)
        per_bin[int(label)] = {'count': int(chunk.size), 'mean': mean, 'se': float(error)}

    return worst, per_bin
