"""
Checks beyond the two limit theorems: the draw-frequency statistic C_n,
urns whose red reinforcement differs from the black one, and the drift
towards a barrier when the two reinforcement means differ.
"""
import math

from dataclasses import replace

import numpy as np
import singer

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.distributions import limit_moments, require_positive_mean
from barrier_urns.errors import NegativeVarianceError
from barrier_urns.experiments.clt import conditional_clt_suite
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, skipped_report, summary_rows
from barrier_urns.experiments.convergence import convergence_suite
from barrier_urns.stats import TestReport, ks_test, standard_normal_cdf

LOGGER = singer.get_logger('barrier_urns')

EXPLORATORY = 'exploratory'
CITED_RESULT = 'cited result'


def cn_suite(config: ExperimentConfig, name: str = 'cn') -> SuiteResult:
    """
    C_N = sqrt(N) (Xbar_N - Z_N) across paths of the barrier-free urn.
    Its limit variance is Z(1-Z)(q/m^2 - 1): when that factor vanishes C_N must
    be close to 0, otherwise C_N / sqrt(z_hat (1 - z_hat) (q/m^2 - 1)) is KS-tested
    against N(0, 1).
    Raises: NegativeVarianceError if q/m^2 - 1 is negative beyond variance_tolerance
    """
    barriers = config.barrier_spec.fixed
    if barriers is None or not barriers.is_classical:
        return SuiteResult(name=name, reports=(skipped_report(name, config, 'needs fixed barriers (0, 1)'),))

    thresholds = config.thresholds
    m, q = require_positive_mean(config.reinforcement_spec)
    ratio = q / (m * m) - 1.0
    if ratio < -thresholds.variance_tolerance:
        raise NegativeVarianceError(ratio, thresholds.variance_tolerance)

    ensemble = run_ensemble(config, suite=name)
    c_values = np.array([math.sqrt(s.steps) * (s.x_bar - s.z_terminal) for s in ensemble.summaries])
    z_hat = ensemble.z_hats
    source = provenance(config)

    if ratio <= thresholds.variance_tolerance:
        report = TestReport(name=name,
                            statistic=float(np.mean(np.abs(c_values) < thresholds.cn_abs_tolerance)),
                            threshold=thresholds.cn_min_fraction,
                            criterion='>=',
                            sample_size=len(c_values),
                            provenance=source,
                            details={'variance_factor': ratio,
                                     'tolerance': thresholds.cn_abs_tolerance,
                                     'max_abs_c': float(np.abs(c_values).max())})
    else:
        variance = z_hat * (1.0 - z_hat) * ratio
        usable = variance > 0
        d, p = ks_test(c_values[usable] / np.sqrt(variance[usable]), standard_normal_cdf)
        report = TestReport(name=name,
                            statistic=d,
                            p_value=p,
                            threshold=thresholds.ks_alpha,
                            criterion='p>',
                            sample_size=int(usable.sum()),
                            provenance=source,
                            details={'variance_factor': ratio, 'dropped_paths': int((~usable).sum())})

    rows = summary_rows(name, ensemble.summaries)
    for row, c in zip(rows, c_values):
        row['c_n'] = float(c)

    return SuiteResult(name=name, reports=(report,), rows=tuple(rows))


def _exploratory(report: TestReport, **details) -> TestReport:
    return replace(report,
                   gated=False,
                   details=dict(report.details, label=EXPLORATORY, **details))


def _matched_means(config: ExperimentConfig, name: str) -> SuiteResult:
    convergence = convergence_suite(config, name=f'{name}.convergence')
    clt = conditional_clt_suite(config, name=f'{name}.clt')

    variances = [row['var_d'] for row in clt.rows]
    reports = [_exploratory(report) for report in convergence.reports]
    reports += [_exploratory(report, mean_empirical_variance=float(np.mean(variances)))
                for report in clt.reports]

    return SuiteResult(name=name, reports=tuple(reports), rows=convergence.rows + clt.rows)


def _drift(config: ExperimentConfig, name: str, black_mean: float, red_mean: float) -> SuiteResult:
    barriers = config.barrier_spec.fixed
    if barriers is None:
        return SuiteResult(name=name, reports=(skipped_report(f'{name}.drift', config, 'needs fixed barriers'),))

    target = barriers.lower if black_mean < red_mean else barriers.upper
    thresholds = config.thresholds
    ensemble = run_ensemble(config, suite=name)
    distances = np.abs(ensemble.z_hats - target)

    report = TestReport(name=f'{name}.drift',
                        statistic=float(np.mean(distances < thresholds.drift_tolerance)),
                        threshold=thresholds.drift_min_fraction,
                        criterion='>=',
                        sample_size=len(distances),
                        provenance=provenance(config),
                        details={'label': CITED_RESULT,
                                 'target': target,
                                 'black_mean': black_mean,
                                 'red_mean': red_mean,
                                 'tolerance': thresholds.drift_tolerance})

    return SuiteResult(name=name, reports=(report,), rows=tuple(summary_rows(name, ensemble.summaries,
                                                                             target=target)))


def conjecture_suite(config: ExperimentConfig, name: str = 'conjecture') -> SuiteResult:
    """
    Urns with a red reinforcement R_n different from B_n.
    With matched means E(R) = E(B) the convergence and CLT suites are run and
    reported ungated. With different means the proportion is expected to settle
    on L when E(B) < E(R) and on U otherwise, which is gated.
    """
    if config.red_reinforcement_spec is None:
        return SuiteResult(name=name, reports=(skipped_report(name, config, 'needs a red_reinforcement'),))

    black_mean = limit_moments(config.reinforcement_spec).m
    red_mean = limit_moments(config.red_reinforcement_spec).m

    if abs(black_mean - red_mean) <= config.thresholds.variance_tolerance:
        LOGGER.info('Matched means %s, results are exploratory', black_mean)
        return _matched_means(config, name)

    LOGGER.info('Black mean %s, red mean %s: checking the drift to a barrier', black_mean, red_mean)
    return _drift(config, name, black_mean, red_mean)
