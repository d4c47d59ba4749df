import singer

from scipy import stats as scipy_stats

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.distributions import PointMass
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, skipped_report, summary_rows
from barrier_urns.stats import TestReport, ks_test

LOGGER = singer.get_logger('barrier_urns')


def polya_limit_suite(config: ExperimentConfig, name: str = 'polya') -> SuiteResult:
    """
    Classical Polya control: without barriers and with a constant reinforcement v
    the limit is Beta(b / v, r / v). KS of the terminal proportions against it.
    """
    barriers = config.barrier_spec.fixed
    spec = config.reinforcement_spec
    if barriers is None or not barriers.is_classical:
        return SuiteResult(name=name, reports=(skipped_report(name, config, 'needs fixed barriers (0, 1)'),))
    if not isinstance(spec, PointMass) or spec.value <= 0 or config.red_reinforcement_spec is not None:
        return SuiteResult(name=name, reports=(
            skipped_report(name, config, 'needs a positive point mass reinforcement with R_n = B_n'),))

    alpha, beta = config.b / spec.value, config.r / spec.value
    ensemble = run_ensemble(config, suite=name)
    d, p = ks_test(ensemble.z_terminals, scipy_stats.beta(alpha, beta).cdf)

    report = TestReport(name=name,
                        statistic=d,
                        p_value=p,
                        threshold=config.thresholds.ks_alpha,
                        criterion='p>',
                        sample_size=len(ensemble.summaries),
                        provenance=provenance(config),
                        details={'alpha': alpha, 'beta': beta})

    return SuiteResult(name=name, reports=(report,), rows=tuple(summary_rows(name, ensemble.summaries)))
