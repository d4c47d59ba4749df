import singer

from barrier_urns.config_utils import ExperimentConfig
from barrier_urns.distributions import limit_moments
from barrier_urns.experiments.common import SuiteResult, provenance, run_ensemble, summary_rows
from barrier_urns.stats import TestReport, max_atom_mass

LOGGER = singer.get_logger('barrier_urns')


def nonatomicity_suite(config: ExperimentConfig, name: str = 'atoms') -> SuiteResult:
    """
    Largest bin mass of the estimated limits at a coarse and a fine bin width.
    Passes iff the coarse mass is below atom_max_mass and the mass shrinks with the bins.
    A zero reinforcement is allowed through: it is the failing control.
    """
    m, _ = limit_moments(config.reinforcement_spec)
    if m <= 0:
        LOGGER.warning('Running %s with m=0, the limit law is an atom at Z_0', name)

    coarse, fine = config.thresholds.atom_bin_widths
    ensemble = run_ensemble(config, suite=name)
    z_hat = ensemble.z_hats
    coarse_mass = max_atom_mass(z_hat, coarse)
    fine_mass = max_atom_mass(z_hat, fine)
    source = provenance(config)
    details = {'coarse_width': coarse, 'fine_width': fine, 'coarse_mass': coarse_mass, 'fine_mass': fine_mass}

    reports = (
        TestReport(name=f'{name}.mass',
                   statistic=coarse_mass,
                   threshold=config.thresholds.atom_max_mass,
                   criterion='<',
                   sample_size=len(z_hat),
                   provenance=source,
                   details=details),
        TestReport(name=f'{name}.shrinks',
                   statistic=fine_mass - coarse_mass,
                   threshold=0.0,
                   criterion='<',
                   sample_size=len(z_hat),
                   provenance=source,
                   details=details),
    )

    return SuiteResult(name=name, reports=reports, rows=tuple(summary_rows(name, ensemble.summaries)))
