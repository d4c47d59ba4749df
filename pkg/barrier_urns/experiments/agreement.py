import numpy as np
import singer

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.errors import NotEnumerableError
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, skipped_report, summary_rows
from barrier_urns.oracle import enumerate_exact, exact_mean_z, terminal_distribution_distance
from barrier_urns.stats import TestReport

LOGGER = singer.get_logger('barrier_urns')


def oracle_agreement_suite(config: ExperimentConfig, name: str = 'oracle') -> SuiteResult:
    """
    Total variation distance between the exact law of the terminal (black, total)
    state and the Monte Carlo one. Needs fixed barriers and finite-support reinforcements.
    Raises: CapacityExceededError when the horizon is too long to enumerate
    """
    barriers = config.barrier_spec.fixed
    if barriers is None:
        return SuiteResult(name=name, reports=(skipped_report(name, config, 'needs fixed barriers'),))

    try:
        exact = enumerate_exact(config.b, config.r, barriers, config.reinforcement_spec, config.horizon,
                                config.red_reinforcement_spec)
    except NotEnumerableError as exc:
        return SuiteResult(name=name, reports=(skipped_report(name, config, str(exc)),))

    ensemble = run_ensemble(config, suite=name)
    distance = terminal_distribution_distance(exact, ((s.black, s.total) for s in ensemble.summaries))

    report = TestReport(name=name,
                        statistic=distance,
                        threshold=config.thresholds.tv_max,
                        criterion='<',
                        sample_size=len(ensemble.summaries),
                        provenance=provenance(config),
                        details={'support_size': len(exact.support),
                                 'exact_mean_z': exact_mean_z(exact),
                                 'empirical_mean_z': float(np.mean(ensemble.z_terminals))})

    return SuiteResult(name=name, reports=(report,), rows=tuple(summary_rows(name, ensemble.summaries)))
