"""
Drift / martingale split of the proportion increments.

For each step n = 0..N-1, with B = B_{n+1}, S = S_n, Z = Z_n:

    H_n       = B/(S+B) (1-Z) (1{Z<U} - 1{Z>L})
    Delta_n+1 = B/(S+B) (X_{n+1}-Z) ((1-Z) 1{Z<U} + Z 1{Z>L})

and Z_{n+1} - Z_n = Z_n H_n + Delta_{n+1}.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import singer

from barrier_urns.errors import PathIntegrityError
from barrier_urns.simulation import check_replay
from barrier_urns.urn import PathRecord

LOGGER = singer.get_logger('barrier_urns')


@dataclass(frozen=True, eq=False)
class DecompositionSeries:
    """
    h and delta are indexed by step n = 0..N-1 (delta[n] is Delta_{n+1}).
    m_martingale, t_product, w, f_tail, black_count and red_count have N+1 entries.
    T_0 = T_1 = 1: the product runs over i = 1..n-1.
    """
    h: np.ndarray
    delta: np.ndarray
    m_martingale: np.ndarray
    t_product: np.ndarray
    w: np.ndarray
    f_tail: np.ndarray
    black_count: np.ndarray
    red_count: np.ndarray
    abs_h_partial_sums: np.ndarray
    last_nonzero_h: Optional[int]


@dataclass(frozen=True)
class IdentityReport:
    max_residual: float
    worst_step: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def compute_series(path: PathRecord) -> DecompositionSeries:
    """
    Computes every instrumented series from a recorded path
    Args:
        path: a replay-consistent path with R_n = B_n

    Returns: DecompositionSeries
    Raises: PathIntegrityError if the record does not replay or carries separate red reinforcements
    """
    if path.r_reinforce is not None and not np.array_equal(path.r_reinforce, path.b_reinforce):
        raise PathIntegrityError(f'Path with seed {path.seed} has R_n != B_n, no decomposition')
    check_replay(path)

    z = np.asarray(path.z_series[:-1])
    total = np.asarray(path.s_series[:-1])
    b_values = np.asarray(path.b_reinforce, dtype=np.float64)
    x = np.asarray(path.x, dtype=np.float64)

    below_upper = (z < path.barriers.upper).astype(np.float64)
    above_lower = (z > path.barriers.lower).astype(np.float64)
    weight = b_values / (total + b_values)

    h = weight * (1.0 - z) * (below_upper - above_lower)
    delta = weight * (x - z) * ((1.0 - z) * below_upper + z * above_lower)

    horizon = path.horizon
    m_martingale = np.concatenate(([0.0], np.cumsum(delta)))

    t_product = np.ones(horizon + 1)
    if horizon >= 2:
        t_product[2:] = np.cumprod(1.0 + h[1:])

    f_tail = np.ones(horizon + 1)
    f_tail[:-1] = np.cumprod((1.0 + h)[::-1])[::-1]

    nonzero = np.flatnonzero(h)

    black_count = np.asarray(path.black_series, dtype=np.float64)

    return DecompositionSeries(h=h,
                               delta=delta,
                               m_martingale=m_martingale,
                               t_product=t_product,
                               w=np.asarray(path.z_series) / t_product,
                               f_tail=f_tail,
                               black_count=black_count,
                               red_count=np.asarray(path.s_series) - black_count,
                               abs_h_partial_sums=np.cumsum(np.abs(h)),
                               last_nonzero_h=int(nonzero[-1]) if len(nonzero) else None)


def identity_residuals(path: PathRecord, series: DecompositionSeries) -> np.ndarray:
    """|Z_{n+1} - Z_n - Z_n H_n - Delta_{n+1}| for n = 0..N-1"""
    z = np.asarray(path.z_series)
    return np.abs(np.diff(z) - z[:-1] * series.h - series.delta)


def verify_identity(path: PathRecord, series: DecompositionSeries, tol: float = 1e-12) -> IdentityReport:
    """
    Checks the increment identity on every step
    Args:
        path: path whose proportions are checked
        series: series computed from the path
        tol: largest accepted absolute residual

    Returns: IdentityReport, passed iff max residual <= tol
    """
    residuals = identity_residuals(path, series)
    worst = int(np.argmax(residuals))
    report = IdentityReport(max_residual=float(residuals[worst]), worst_step=worst, tolerance=tol)

    if not report.passed:
        LOGGER.warning('Decomposition residual %.3e at step %d exceeds %.1e (seed %s)',
                       report.max_residual, worst, tol, path.seed)

    return report


def verify_martingale_representation(path: PathRecord, series: DecompositionSeries,
                                     tol: float = 1e-10) -> IdentityReport:
    """
    Checks W_n = Z_1 + sum_{i=1}^{n-1} Delta_{i+1} / T_{i+1} for n >= 1, relative to |W_n|
    """
    if path.horizon < 1:
        return IdentityReport(0.0, 0, tol)

    z = np.asarray(path.z_series)
    increments = series.delta[1:] / series.t_product[2:]
    expected = z[1] + np.concatenate(([0.0], np.cumsum(increments)))
    actual = series.w[1:]
    residuals = np.abs(actual - expected) / np.maximum(np.abs(actual), 1e-300)
    worst = int(np.argmax(residuals))

    return IdentityReport(max_residual=float(residuals[worst]), worst_step=worst + 1, tolerance=tol)


def sn_over_n(path: PathRecord) -> np.ndarray:
    """S_n / n for n = 1..N"""
    steps = np.arange(1, path.horizon + 1, dtype=np.float64)
    return np.asarray(path.s_series[1:]) / steps
