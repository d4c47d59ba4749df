"""
Almost sure convergence of Z_n and growth of the total weight
"""
import numpy as np
import singer

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.distributions import limit_moments, require_positive_mean
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, summary_rows
from barrier_urns.stats import TestReport

LOGGER = singer.get_logger('barrier_urns')


def _require_growing_weights(config: ExperimentConfig):
    require_positive_mean(config.reinforcement_spec)
    if config.red_reinforcement_spec is not None:
        require_positive_mean(config.red_reinforcement_spec)


def convergence_suite(config: ExperimentConfig, name: str = 'convergence') -> SuiteResult:
    """
    Cauchy, range and interior checks of the estimated limits
    Args:
        config: experiment config, reinforcement with liminf E(B_n) > 0

    Returns: SuiteResult with three reports
    Raises: HypothesisViolationError if the limiting mean reinforcement is 0
    """
    _require_growing_weights(config)
    thresholds = config.thresholds
    horizon = config.horizon
    half = horizon // 2

    ensemble = run_ensemble(config, checkpoints=[half], suite=name)
    z_hat = ensemble.z_hats
    cauchy_gaps = np.abs(ensemble.z_terminals - ensemble.z_at(half))
    lower = np.array([summary.barriers.lower for summary in ensemble.summaries])
    upper = np.array([summary.barriers.upper for summary in ensemble.summaries])
    outside = (z_hat < lower - thresholds.range_epsilon) | (z_hat > upper + thresholds.range_epsilon)
    interior = np.minimum(z_hat, 1.0 - z_hat)
    source = provenance(config)
    paths = len(z_hat)

    reports = (
        TestReport(name=f'{name}.cauchy',
                   statistic=float(np.mean(cauchy_gaps > thresholds.cauchy_epsilon)),
                   threshold=thresholds.cauchy_max_fraction,
                   criterion='<',
                   sample_size=paths,
                   provenance=source,
                   details={'epsilon': thresholds.cauchy_epsilon, 'half_horizon': half,
                            'max_gap': float(cauchy_gaps.max())}),
        TestReport(name=f'{name}.range',
                   statistic=float(np.mean(outside)),
                   threshold=0.0,
                   criterion='<=',
                   sample_size=paths,
                   provenance=source,
                   details={'epsilon': thresholds.range_epsilon, 'outside_paths': int(outside.sum()),
                            'vacuous': bool(np.all((lower == 0) & (upper == 1)))}),
        TestReport(name=f'{name}.interior',
                   statistic=float(interior.min()),
                   threshold=thresholds.interior_min,
                   criterion='>',
                   sample_size=paths,
                   provenance=source),
    )

    rows = summary_rows(name, ensemble.summaries)
    for row, gap in zip(rows, cauchy_gaps):
        row['cauchy_gap'] = float(gap)

    return SuiteResult(name=name, reports=reports, rows=tuple(rows))


def growth_suite(config: ExperimentConfig, name: str = 'growth') -> SuiteResult:
    """
    S_N / N against the limiting mean reinforcement m
    Returns: SuiteResult with one report, the fraction of paths within tolerance of m
    """
    m, _ = limit_moments(config.reinforcement_spec)
    thresholds = config.thresholds

    ensemble = run_ensemble(config, suite=name)
    ratios = np.array([summary.s_over_n for summary in ensemble.summaries])
    within = np.abs(ratios - m) < thresholds.growth_tolerance

    report = TestReport(name=name,
                        statistic=float(np.mean(within)),
                        threshold=thresholds.growth_min_fraction,
                        criterion='>=',
                        sample_size=len(ratios),
                        provenance=provenance(config),
                        details={'m': m,
                                 'tolerance': thresholds.growth_tolerance,
                                 'mean_ratio': float(ratios.mean()),
                                 'max_deviation': float(np.abs(ratios - m).max())})

    return SuiteResult(name=name, reports=(report,), rows=tuple(summary_rows(name, ensemble.summaries, m=m)))
