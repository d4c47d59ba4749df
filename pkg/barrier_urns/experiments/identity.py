"""
Decomposition checks on full path records
"""
from typing import NamedTuple

import numpy as np
import singer

from barrier_urns.config_utils import ExperimentConfig, config_hash
from barrier_urns.decomposition import compute_series, verify_identity, verify_martingale_representation
from barrier_urns.experiments.common import SuiteResult, parallel_map, provenance, require_prefix, skipped_report
from barrier_urns.random_streams import path_seed
from barrier_urns.simulation import simulate_path
from barrier_urns.stats import TestReport, binned_mean_test

LOGGER = singer.get_logger('barrier_urns')

REPRESENTATION_TOLERANCE = 1e-10


class PathIdentity(NamedTuple):
    path_index: int
    seed: int
    max_residual: float
    representation_residual: float
    z_prefix: float
    delta_next: float
    abs_h_half: float
    abs_h_total: float
    last_nonzero_h: int


def _check_path(config: ExperimentConfig, index: int, digest: str) -> PathIdentity:
    seed = path_seed(config.master_seed, index)
    path = simulate_path(config, seed, digest=digest)
    series = compute_series(path)
    identity = verify_identity(path, series, config.thresholds.identity_tolerance)
    representation = verify_martingale_representation(path, series, REPRESENTATION_TOLERANCE)
    sums = series.abs_h_partial_sums

    return PathIdentity(path_index=index,
                        seed=seed,
                        max_residual=identity.max_residual,
                        representation_residual=representation.max_residual,
                        z_prefix=float(path.z_series[config.prefix_n]),
                        delta_next=float(series.delta[config.prefix_n]),
                        abs_h_half=float(sums[path.horizon // 2 - 1]) if path.horizon >= 2 else 0.0,
                        abs_h_total=float(sums[-1]),
                        last_nonzero_h=-1 if series.last_nonzero_h is None else series.last_nonzero_h)


def plateau_growth(half: np.ndarray, total: np.ndarray) -> float:
    """
    Mean over paths of the share of sum |H_n| gained after N / 2, paths with a zero sum count as 0
    """
    moved = total > 0
    growth = np.zeros_like(total, dtype=np.float64)
    growth[moved] = (total[moved] - half[moved]) / total[moved]
    return float(growth.mean())


def identity_suite(config: ExperimentConfig, name: str = 'identity') -> SuiteResult:
    """
    Checks on every path:
      - Z_{n+1} - Z_n = Z_n H_n + Delta_{n+1} up to identity_tolerance
      - W_n = Z_1 + sum Delta_{i+1} / T_{i+1} up to a relative 1e-10
      - E(Delta_{prefix_n+1} | Z_{prefix_n}) = 0, binned by Z_{prefix_n}
    The share of sum |H_n| gained after N / 2 is reported without a gate.
    """
    if config.red_reinforcement_spec is not None:
        return SuiteResult(name=name, reports=(
            skipped_report(name, config, 'the decomposition needs R_n = B_n'),))
    require_prefix(config)

    digest = config_hash(config)
    checks = parallel_map(lambda indices: [_check_path(config, i, digest) for i in indices],
                          list(range(config.paths)), suite=name)

    thresholds = config.thresholds
    source = provenance(config)
    residuals = np.array([check.max_residual for check in checks])
    representation = np.array([check.representation_residual for check in checks])
    worst_score, per_bin = binned_mean_test([check.delta_next for check in checks],
                                            [check.z_prefix for check in checks],
                                            thresholds.delta_bins)
    half = np.array([check.abs_h_half for check in checks])
    total = np.array([check.abs_h_total for check in checks])

    reports = (
        TestReport(name=f'{name}.increment',
                   statistic=float(residuals.max()),
                   threshold=thresholds.identity_tolerance,
                   criterion='<=',
                   sample_size=len(checks),
                   provenance=source,
                   details={'worst_path': int(residuals.argmax())}),
        TestReport(name=f'{name}.representation',
                   statistic=float(representation.max()),
                   threshold=REPRESENTATION_TOLERANCE,
                   criterion='<=',
                   sample_size=len(checks),
                   provenance=source,
                   details={'worst_path': int(representation.argmax())}),
        TestReport(name=f'{name}.delta_mean',
                   statistic=worst_score,
                   threshold=thresholds.delta_mean_max_se,
                   criterion='<=',
                   sample_size=len(checks),
                   provenance=source,
                   details={'step': config.prefix_n + 1, 'bins': per_bin}),
        TestReport(name=f'{name}.abs_h_plateau',
                   statistic=plateau_growth(half, total),
                   threshold=thresholds.plateau_tolerance,
                   criterion='<=',
                   sample_size=len(checks),
                   provenance=source,
                   gated=False,
                   details={'mean_sum_at_half': float(half.mean()), 'mean_sum_at_horizon': float(total.mean()),
                            'paths_still_moving': int(np.sum(total > half))}),
    )

    rows = tuple(dict(check._asdict(), suite=name) for check in checks)
    return SuiteResult(name=name, reports=reports, rows=rows)
