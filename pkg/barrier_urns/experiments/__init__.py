from barrier_urns.experiments.agreement import oracle_agreement_suite
from barrier_urns.experiments.atoms import nonatomicity_suite
from barrier_urns.experiments.barriers import barrier_strictness_suite
from barrier_urns.experiments.clt import clt_control_suite, conditional_clt_suite
from barrier_urns.experiments.convergence import convergence_suite, growth_suite
from barrier_urns.experiments.exploratory import cn_suite, conjecture_suite
from barrier_urns.experiments.identity import identity_suite
from barrier_urns.experiments.limit_law import polya_limit_suite

# command line name -> suite
SUITES = {
    'identity': identity_suite,
    'oracle': oracle_agreement_suite,
    'polya': polya_limit_suite,
    'convergence': convergence_suite,
    'growth': growth_suite,
    'clt': conditional_clt_suite,
    'clt-control': clt_control_suite,
    'barriers': barrier_strictness_suite,
    'atoms': nonatomicity_suite,
    'cn': cn_suite,
    'conjecture': conjecture_suite,
}
