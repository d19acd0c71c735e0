"""
CSV series and JSON report output
"""

import csv
import json
import logging
import math
import os

import numpy as np

from ehrenlab.exceptions import OutputError
from ehrenlab.models.records import SERIES_COLUMNS, TimeSeries

logger = logging.getLogger(__name__)


def format_value(value) -> str:
    """17 significant digits; absent values become an empty cell"""
    if value is None:
        return ''
    return format(float(value), '.17g')


def emit_series(series: TimeSeries, path: str) -> str:
    """Write one row per sample under the fixed header"""
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(SERIES_COLUMNS)
            for record in series:
                writer.writerow([format_value(getattr(record, name)) for name in SERIES_COLUMNS])
    except OSError as e:
        raise OutputError(path, str(e)) from e
    logger.debug(f"Wrote {len(series)} samples to {path}")
    return path


def json_safe(value):
    """Recursively convert numpy scalars and non-finite floats for strict JSON"""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def write_report(report: dict, path: str) -> str:
    """Sorted-key JSON so identical reports are byte-identical"""
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(json_safe(report), handle, indent=2, sort_keys=True, allow_nan=False)
            handle.write('\n')
    except OSError as e:
        raise OutputError(path, str(e)) from e
    return path
