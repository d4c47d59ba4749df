import csv
import json
import os
import tempfile
import unittest

import numpy as np

from barrier_urns import output_utils
from barrier_urns.stats import Provenance, TestReport


class TestOutputUtils(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_write_csv_formats_cells(self):
        path = os.path.join(self.tmp.name, 'rows.csv')
        rows = [{'a': 0.1, 'b': True, 'c': None},
                {'a': np.float64('nan'), 'b': np.bool_(False), 'c': np.int64(3)}]

        self.assertEqual(2, output_utils.write_csv(path, ['a', 'b', 'c'], rows))
        with open(path, encoding='utf-8') as csv_file:
            self.assertEqual([['a', 'b', 'c'], ['0.1', 'true', ''], ['', 'false', '3']], list(csv.reader(csv_file)))

    def test_row_columns_keep_first_seen_order(self):
        self.assertEqual(['suite', 'z', 'c_n'], output_utils.row_columns([{'suite': 1, 'z': 2}, {'c_n': 3, 'z': 4}]))

    def test_empty_suite_csv_has_header_only(self):
        path = output_utils.write_suite_csv(self.tmp.name, 'empty', [])

        with open(path, encoding='utf-8') as csv_file:
            self.assertEqual('suite\n', csv_file.read())

    def test_write_reports_writes_sorted_json_lines(self):
        report = TestReport(name='demo', statistic=0.1, threshold=0.2, criterion='<', sample_size=3,
                            provenance=Provenance('hash', 4))
        path = output_utils.write_reports(self.tmp.name, [report, report])

        with open(path, encoding='utf-8') as reports_file:
            lines = reports_file.read().splitlines()

        self.assertEqual(2, len(lines))
        self.assertEqual(report.to_dict(), json.loads(lines[0]))
        self.assertEqual(sorted(json.loads(lines[0])), list(json.loads(lines[0])))
