import json
import os
import tempfile
import unittest

import numpy as np

from ehrenlab.exceptions import OutputError
from ehrenlab.models.records import SERIES_COLUMNS, ObservableRecord, TimeSeries
from ehrenlab.services.series_writer import emit_series, format_value, json_safe, write_report


def two_sample_series(energy):
    records = [
        ObservableRecord(t=0.0, norm=1.0, x_mean=20.0, v_mean=0.1, p_total=0.1, force_full=0.0,
                         force_partial=0.0, dg_violation=0.0, energy=energy),
        ObservableRecord(t=0.5, norm=1.0, x_mean=20.05, v_mean=0.1, p_total=0.1, force_full=0.0,
                         force_partial=0.0, dg_violation=0.0, energy=energy),
    ]
    return TimeSeries.from_records(records)


class SeriesWriterTestCase(unittest.TestCase):
    """CSV series output"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_header_and_rows(self):
        path = emit_series(two_sample_series(0.5), os.path.join(self.tmp.name, 'nested', 'run.csv'))
        with open(path, encoding='utf-8') as handle:
            lines = handle.read().split('\n')
        self.assertEqual(lines[0], ','.join(SERIES_COLUMNS))
        self.assertEqual(lines[0], 't,norm,x_mean,v_mean,p_total,force_full,force_partial,dg_violation,energy')
        self.assertEqual(lines[2].split(',')[0], '0.5')
        self.assertEqual(lines[2].split(',')[2], '20.050000000000001')
        self.assertEqual(lines[3], '')

    def test_missing_energy_is_an_empty_cell(self):
        path = emit_series(two_sample_series(None), os.path.join(self.tmp.name, 'dg.csv'))
        with open(path, encoding='utf-8') as handle:
            row = handle.read().split('\n')[1]
        self.assertTrue(row.endswith(','))

    def test_format_value(self):
        self.assertEqual(format_value(0.1), '0.10000000000000001')
        self.assertEqual(format_value(None), '')
        self.assertEqual(float(format_value(1 / 3)), 1 / 3)

    def test_unwritable_path(self):
        with self.assertRaises(OutputError):
            emit_series(two_sample_series(0.5), self.tmp.name)


class ReportWriterTestCase(unittest.TestCase):
    """Strict JSON reports"""

    def test_json_safe(self):
        cleaned = json_safe({'a': np.float64(1.5), 'b': float('nan'), 'c': float('inf'),
                             'd': [np.int64(3), np.bool_(True)], 'e': 'text'})
        self.assertEqual(cleaned, {'a': 1.5, 'b': None, 'c': 'inf', 'd': [3, True], 'e': 'text'})

    def test_reports_are_sorted_and_stable(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = write_report({'z': 1, 'a': float('nan')}, os.path.join(tmp, 'one.json'))
            second = write_report({'a': float('nan'), 'z': 1}, os.path.join(tmp, 'two.json'))
            with open(first, encoding='utf-8') as a, open(second, encoding='utf-8') as b:
                text = a.read()
                self.assertEqual(text, b.read())
        self.assertTrue(text.endswith('\n'))
        self.assertLess(text.index('"a"'), text.index('"z"'))
        self.assertEqual(json.loads(text), {'a': None, 'z': 1})


if __name__ == '__main__':
    unittest.main()
