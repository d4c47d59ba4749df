import math
import time

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import singer

from singer import metrics
from terminaltables import AsciiTable

from barrier_urns.config_utils import ExperimentConfig, config_hash
from barrier_urns.errors import MisconfigurationError
from barrier_urns.random_streams import path_seed
from barrier_urns.simulation import PathSummary, summarize_path
from barrier_urns.stats import Provenance, TestReport

LOGGER = singer.get_logger('barrier_urns')

THREADS = 1
BATCHES_PER_THREAD = 4
COUNTS = {}
TIMES = {}
FAILURES = {}
REPORT_COUNTS = {}


@dataclass(frozen=True)
class SuiteResult:
    """Reports of a suite plus its long-format rows, one per path or prefix"""
    name: str
    reports: Tuple[TestReport, ...]
    rows: Tuple[Dict, ...] = field(default=())

    @property
    def gated_failures(self) -> List[TestReport]:
        return [report for report in self.reports if report.gated and not report.passed]


@dataclass(frozen=True)
class EnsembleResult:
    config_hash: str
    summaries: Tuple[PathSummary, ...]

    @property
    def z_hats(self) -> np.ndarray:
        return np.array([summary.z_hat for summary in self.summaries])

    @property
    def z_terminals(self) -> np.ndarray:
        return np.array([summary.z_terminal for summary in self.summaries])

    def z_at(self, step: int) -> np.ndarray:
        return np.array([summary.z_at(step) for summary in self.summaries])


def provenance(config: ExperimentConfig) -> Provenance:
    return Provenance(config_hash=config_hash(config), master_seed=config.master_seed)


def require_prefix(config: ExperimentConfig) -> None:
    """Raises: MisconfigurationError unless 1 <= prefix_n < horizon"""
    if not 1 <= config.prefix_n < config.horizon:
        raise MisconfigurationError(f'prefix_n={config.prefix_n} must be in [1, horizon={config.horizon})')


def batches(count: int, threads: int) -> List[range]:
    """Splits range(count) into contiguous batches, a few per thread"""
    size = max(1, math.ceil(count / (threads * BATCHES_PER_THREAD)))
    return [range(start, min(start + size, count)) for start in range(0, count, size)]


def parallel_map(func: Callable, items: Sequence, threads: Optional[int] = None, suite: str = '') -> List:
    """
    Applies func to batches of items on a thread pool. The output keeps the
    input order, so results do not depend on scheduling.
    """
    threads = threads or THREADS
    chunks = batches(len(items), threads)
    results = []

    with metrics.record_counter(suite or 'paths') as counter:
        if threads == 1:
            mapped = (func([items[i] for i in chunk]) for chunk in chunks)
            for out in mapped:
                results.extend(out)
                counter.increment(len(out))
        else:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                for out in executor.map(lambda chunk: func([items[i] for i in chunk]), chunks):
                    results.extend(out)
                    counter.increment(len(out))

    COUNTS[suite] = COUNTS.get(suite, 0) + len(results)
    return results


def run_ensemble(config: ExperimentConfig, horizon: Optional[int] = None, checkpoints: Sequence[int] = (),
                 paths: Optional[int] = None, suite: str = 'ensemble') -> EnsembleResult:
    """
    Runs `paths` independent paths; path i uses the seed derived from (master_seed, i)
    Args:
        config: experiment config
        horizon: overrides config.horizon
        checkpoints: steps whose proportions are kept
        paths: overrides config.paths
        suite: name used for counters

    Returns: EnsembleResult with summaries in path order
    """
    horizon = config.horizon if horizon is None else horizon
    paths = config.paths if paths is None else paths

    def simulate_batch(indices):
        return [summarize_path(config, path_seed(config.master_seed, i), horizon, checkpoints, path_index=i)
                for i in indices]

    LOGGER.info('Running %d paths of %d steps (%s)', paths, horizon, suite)
    summaries = parallel_map(simulate_batch, list(range(paths)), suite=suite)

    return EnsembleResult(config_hash=config_hash(config), summaries=tuple(summaries))


def summary_rows(suite: str, summaries: Iterable[PathSummary], **extra) -> List[Dict]:
    """Long-format rows of path summaries"""
    rows = []
    for summary in summaries:
        row = {'suite': suite,
               'path': summary.path_index,
               'seed': summary.seed,
               'lower': summary.barriers.lower,
               'upper': summary.barriers.upper,
               'horizon': summary.horizon,
               'z_terminal': summary.z_terminal,
               'z_hat': summary.z_hat,
               's_over_n': summary.s_over_n,
               'x_bar': summary.x_bar}
        for step, z in summary.checkpoints:
            row[f'z_{step}'] = z
        row.update(extra)
        rows.append(row)
    return rows


def skipped_report(name: str, config: ExperimentConfig, reason: str) -> TestReport:
    LOGGER.info('Skipping %s: %s', name, reason)
    return TestReport(name=name, statistic=math.nan, threshold=math.nan, criterion='<', sample_size=0,
                      provenance=provenance(config), gated=False, skipped=True, details={'reason': reason})


def run_suite(name: str, suite: Callable[[ExperimentConfig], SuiteResult], config: ExperimentConfig) -> SuiteResult:
    """
    Runs one suite under a job timer and records its counters for the summary table
    """
    COUNTS.setdefault(name, 0)
    start = time.time()

    with metrics.job_timer('suite') as timer:
        timer.tags['suite'] = name
        timer.tags['config_hash'] = config_hash(config)
        result = suite(config)

    TIMES[name] = TIMES.get(name, 0) + time.time() - start
    REPORT_COUNTS[name] = len(result.reports)
    FAILURES[name] = len(result.gated_failures)

    for report in result.reports:
        LOGGER.info('%s: statistic=%s p=%s threshold=%s -> %s%s', report.name, report.statistic, report.p_value,
                    report.threshold, 'PASS' if report.passed else 'FAIL', '' if report.gated else ' (ungated)')

    return result


def over_budget(name: str, config: ExperimentConfig) -> bool:
    budget = config.runtime_budget_seconds
    if budget is None or TIMES.get(name, 0) <= budget:
        return False

    LOGGER.error('Suite %s took %.1f seconds, over its budget of %.1f seconds', name, TIMES[name], budget)
    return True


def get_run_summary() -> str:
    """
    Builds a summary of the suites run so far
    Returns: summary table as string
    """
    headers = [['suite',
                'reports',
                'gated failures',
                'paths simulated',
                'total time',
                'paths/second']]

    rows = []
    for name, path_count in COUNTS.items():
        if name not in REPORT_COUNTS:
            continue
        suite_time = TIMES.get(name, 0) or 0.000001
        rows.append([name,
                     f'{REPORT_COUNTS[name]} reports',
                     f'{FAILURES[name]} failed',
                     f'{path_count} paths',
                     f'{suite_time:.3f} seconds',
                     f'{path_count / suite_time:.1f}'])

    table = AsciiTable(headers + rows, title='Suite Summary')

    return '\n\n' + table.table
