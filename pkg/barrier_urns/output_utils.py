"""
Writers for the files a run leaves in its output directory
"""
import csv
import json
import math
import os

from typing import Dict, Iterable, List, Sequence

import numpy as np
import singer

from barrier_urns.config_utils import RunManifest
from barrier_urns.decomposition import DecompositionSeries
from barrier_urns.oracle import ExactDistribution
from barrier_urns.stats import TestReport
from barrier_urns.urn import PathRecord

LOGGER = singer.get_logger('barrier_urns')

PATH_COLUMNS = ['n', 'X', 'B', 'Z', 'S']
SERIES_COLUMNS = ['n', 'Z', 'S', 'H', 'Delta', 'M', 'T', 'W']


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value)) if math.isfinite(value) else ''
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Dict]) -> int:
    """
    Writes rows as a CSV file with a header row
    Returns: number of rows written
    """
    count = 0
    with open(path, 'w', newline='', encoding='utf-8') as csv_file:
        writer = csv.DictWriter(csv_file, fieldnames=list(columns), lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in columns})
            count += 1

    LOGGER.info('Wrote %d rows to %s', count, path)
    return count


def row_columns(rows: Sequence[Dict]) -> List[str]:
    """Union of the row keys in first-seen order"""
    columns = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    return columns


def path_rows(path: PathRecord) -> Iterable[Dict]:
    """n, X, B, Z, S per step; X and B are empty on the n = 0 row"""
    yield {'n': 0, 'X': None, 'B': None, 'Z': path.z_series[0], 'S': path.s_series[0]}
    for n in range(1, path.horizon + 1):
        yield {'n': n,
               'X': int(path.x[n - 1]),
               'B': path.b_reinforce[n - 1],
               'Z': path.z_series[n],
               'S': path.s_series[n]}


def series_rows(path: PathRecord, series: DecompositionSeries) -> Iterable[Dict]:
    """n, Z, S, H, Delta, M, T, W per step; H and Delta at n are H_n and Delta_{n+1}, empty at n = N"""
    for n in range(path.horizon + 1):
        last = n == path.horizon
        yield {'n': n,
               'Z': path.z_series[n],
               'S': path.s_series[n],
               'H': None if last else series.h[n],
               'Delta': None if last else series.delta[n],
               'M': series.m_martingale[n],
               'T': series.t_product[n],
               'W': series.w[n]}


def write_path_csv(out_dir: str, path: PathRecord) -> str:
    target = os.path.join(out_dir, 'path.csv')
    write_csv(target, PATH_COLUMNS, path_rows(path))
    return target


def write_series_csv(out_dir: str, path: PathRecord, series: DecompositionSeries) -> str:
    target = os.path.join(out_dir, 'series.csv')
    write_csv(target, SERIES_COLUMNS, series_rows(path, series))
    return target


def write_suite_csv(out_dir: str, name: str, rows: Sequence[Dict]) -> str:
    target = os.path.join(out_dir, f'{name}.csv')
    write_csv(target, row_columns(rows) or ['suite'], rows)
    return target


def write_json(path: str, document: Dict):
    with open(path, 'w', encoding='utf-8') as json_file:
        json.dump(document, json_file, indent=2, sort_keys=True)
        json_file.write('\n')


def write_exact_json(out_dir: str, dist: ExactDistribution) -> str:
    target = os.path.join(out_dir, 'exact.json')
    write_json(target, dist.to_dict())
    return target


def write_manifest(out_dir: str, manifest: RunManifest) -> str:
    target = os.path.join(out_dir, 'manifest.json')
    write_json(target, manifest.to_dict())
    return target


def write_reports(out_dir: str, reports: Iterable[TestReport]) -> str:
    """One JSON object per line, keys sorted"""
    target = os.path.join(out_dir, 'reports.jsonl')
    with open(target, 'w', encoding='utf-8') as reports_file:
        for report in reports:
            reports_file.write(json.dumps(report.to_dict(), sort_keys=True) + '\n')
    return target
