import numpy as np
import singer

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.errors import MisconfigurationError
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, skipped_report, summary_rows
from barrier_urns.stats import TestReport

LOGGER = singer.get_logger('barrier_urns')

HORIZON_FACTOR = 4


def _near_barrier(z: np.ndarray, lower: float, upper: float, delta: float) -> np.ndarray:
    return (np.abs(z - lower) < delta) | (np.abs(z - upper) < delta)


def barrier_strictness_suite(config: ExperimentConfig, name: str = 'barriers') -> SuiteResult:
    """
    Fraction of paths whose proportion Z_n sits within delta of a barrier, at n = N and n = 4N.
    The limit never hits a barrier, so the fraction must not grow with the horizon
    and must be small at 4N.
    Args:
        config: experiment config with fixed barriers 0 < L < U < 1

    Returns: SuiteResult, skipped reports for other barrier laws
    Raises: MisconfigurationError if delta >= (U - L) / 2
    """
    barriers = config.barrier_spec.fixed
    if barriers is None or barriers.lower <= 0.0 or barriers.upper >= 1.0:
        return SuiteResult(name=name, reports=(
            skipped_report(f'{name}.monotone', config, 'needs fixed barriers with 0 < L < U < 1'),
            skipped_report(f'{name}.fraction', config, 'needs fixed barriers with 0 < L < U < 1')))

    delta = config.thresholds.barrier_delta
    if delta >= (barriers.upper - barriers.lower) / 2:
        raise MisconfigurationError(
            f'barrier delta {delta} must be < (U - L) / 2 = {(barriers.upper - barriers.lower) / 2}')

    horizon = config.horizon
    ensemble = run_ensemble(config, horizon=HORIZON_FACTOR * horizon, checkpoints=[horizon], suite=name)

    near_short = _near_barrier(ensemble.z_at(horizon), barriers.lower, barriers.upper, delta)
    near_long = _near_barrier(ensemble.z_terminals, barriers.lower, barriers.upper, delta)
    fraction_short = float(np.mean(near_short))
    fraction_long = float(np.mean(near_long))
    source = provenance(config)
    details = {'delta': delta,
               'horizon': horizon,
               'long_horizon': HORIZON_FACTOR * horizon,
               'fraction_at_horizon': fraction_short,
               'fraction_at_long_horizon': fraction_long}

    reports = (
        TestReport(name=f'{name}.monotone',
                   statistic=fraction_long - fraction_short,
                   threshold=0.0,
                   criterion='<=',
                   sample_size=len(near_long),
                   provenance=source,
                   details=details),
        TestReport(name=f'{name}.fraction',
                   statistic=fraction_long,
                   threshold=config.thresholds.barrier_max_fraction,
                   criterion='<',
                   sample_size=len(near_long),
                   provenance=source,
                   details=details),
    )

    rows = summary_rows(name, ensemble.summaries)
    for row, short, long in zip(rows, near_short, near_long):
        row['near_at_horizon'] = bool(short)
        row['near_at_long_horizon'] = bool(long)

    return SuiteResult(name=name, reports=reports, rows=tuple(rows))
