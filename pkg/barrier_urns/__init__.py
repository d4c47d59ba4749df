#!/usr/bin/env python3
import argparse
import json
import os
import sys

from typing import List, Optional, Sequence

import singer

from barrier_urns import output_utils
from barrier_urns.config_utils import THREADS_ENV_VAR, VERSION, ExperimentConfig, RunManifest, config_hash, \
    default_threads, parse_config
from barrier_urns.decomposition import compute_series, verify_identity
from barrier_urns.errors import MisconfigurationError
from barrier_urns.experiments import SUITES, common
from barrier_urns.oracle import enumerate_exact
from barrier_urns.random_streams import path_seed
from barrier_urns.simulation import simulate_path

LOGGER = singer.get_logger('barrier_urns')

COMMANDS = ('simulate', 'decompose', 'enumerate', 'suite')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='barrier-urns',
                                     description='Randomly reinforced urns with random barriers')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('suites', nargs='*', metavar='SUITE', help=f'suite names: {", ".join(SUITES)}')
    parser.add_argument('--config', required=True, help='experiment config file (JSON)')
    parser.add_argument('--seed', type=int, help='master seed, overrides the config')
    parser.add_argument('--horizon', type=int, help='number of steps N, overrides the config')
    parser.add_argument('--paths', type=int, help='number of paths or prefixes, overrides the config')
    parser.add_argument('--continuations', type=int, help='continuations per prefix, overrides the config')
    parser.add_argument('--out', default='.', help='output directory')
    parser.add_argument('--suite', action='append', default=[], dest='suite_flags', metavar='NAME',
                        help='suite to run, may be repeated')
    parser.add_argument('--threads', type=int,
                        help=f'worker threads, defaults to ${THREADS_ENV_VAR} or the cpu count')
    parser.add_argument('--version', action='version', version=VERSION)

    return parser.parse_args(argv)


def selected_suites(args: argparse.Namespace) -> List[str]:
    """
    Suites named on the command line in order, all of them when none is named
    Raises: MisconfigurationError for unknown names
    """
    names = list(dict.fromkeys(list(args.suites) + list(args.suite_flags)))
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise MisconfigurationError(f'Unknown suites {unknown}, expected some of {list(SUITES)}')

    return names or list(SUITES)


def do_simulate(config: ExperimentConfig, out_dir: str) -> int:
    """
    Simulates the path of index 0 and writes path.csv
    """
    path = simulate_path(config, path_seed(config.master_seed, 0))
    output_utils.write_path_csv(out_dir, path)
    LOGGER.info('Path with seed %s ended at Z=%s after %d steps', path.seed, path.z_series[-1], path.horizon)

    return EXIT_OK


def do_decompose(config: ExperimentConfig, out_dir: str) -> int:
    """
    Simulates the path of index 0, writes series.csv and checks the increment identity
    """
    path = simulate_path(config, path_seed(config.master_seed, 0))
    series = compute_series(path)
    output_utils.write_series_csv(out_dir, path, series)
    report = verify_identity(path, series, config.thresholds.identity_tolerance)
    LOGGER.info('Decomposition residual %s at step %d', report.max_residual, report.worst_step)

    return EXIT_OK if report.passed else EXIT_FAILED


def do_enumerate(config: ExperimentConfig, out_dir: str) -> int:
    """
    Writes the exact law of (Z_N, S_N) to exact.json
    """
    barriers = config.barrier_spec.fixed
    if barriers is None:
        raise MisconfigurationError('enumerate needs fixed barriers')

    dist = enumerate_exact(config.b, config.r, barriers, config.reinforcement_spec, config.horizon,
                           config.red_reinforcement_spec)
    output_utils.write_exact_json(out_dir, dist)
    LOGGER.info('Exact law at step %d has %d support points', config.horizon, len(dist.support))

    return EXIT_OK


def do_suite(config: ExperimentConfig, out_dir: str, names: Sequence[str]) -> int:
    """
    Runs the named suites, writes reports.jsonl and one CSV per suite.
    Returns: 0 iff every gated report passed and no suite ran over its budget
    """
    reports = []
    failed = False

    for name in names:
        result = common.run_suite(name, SUITES[name], config)
        reports.extend(result.reports)
        output_utils.write_suite_csv(out_dir, name, result.rows)
        failed = common.over_budget(name, config) or bool(result.gated_failures) or failed

    output_utils.write_reports(out_dir, reports)
    LOGGER.info(common.get_run_summary())

    return EXIT_FAILED if failed else EXIT_OK


def main_impl(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main function
    """
    args = parse_args(argv)
    config = parse_config(args.config).with_overrides(master_seed=args.seed,
                                                      horizon=args.horizon,
                                                      paths=args.paths,
                                                      continuations=args.continuations)
    common.THREADS = default_threads(args.threads)
    suites = selected_suites(args) if args.command == 'suite' else []

    os.makedirs(args.out, exist_ok=True)
    manifest = RunManifest(config_path=args.config,
                           config=config.to_dict(),
                           master_seed=config.master_seed,
                           command=args.command,
                           suites=tuple(suites),
                           output_dir=args.out)
    output_utils.write_manifest(args.out, manifest)

    LOGGER.info('Running %s with config %s (hash %s) on %d threads',
                args.command, args.config, config_hash(config), common.THREADS)

    if args.command == 'simulate':
        return do_simulate(config, args.out)
    if args.command == 'decompose':
        return do_decompose(config, args.out)
    if args.command == 'enumerate':
        return do_enumerate(config, args.out)

    return do_suite(config, args.out, suites)


def main():
    """
    Main
    """
    try:
        status = main_impl()
    except Exception as exc:
        LOGGER.exception(exc)
        print(json.dumps({'error': type(exc).__name__, 'message': str(exc)}))
        sys.exit(EXIT_ERROR)

    sys.exit(status)
