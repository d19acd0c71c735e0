"""
Per-sample observable records and time series
"""

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ehrenlab.exceptions import SamplingError

# Order and names of the CSV columns
SERIES_COLUMNS = (
    't', 'norm', 'x_mean', 'v_mean', 'p_total',
    'force_full', 'force_partial', 'dg_violation', 'energy',
)

UNIFORM_SPACING_RTOL = 1e-9


@dataclass(frozen=True)
class ObservableRecord:
    """Scalar observables of one sampled state"""
    t: float
    norm: float
    x_mean: float
    v_mean: float
    p_total: float
    force_full: float
    force_partial: float
    dg_violation: float
    energy: Optional[float]
    # diagnostics kept out of the CSV
    self_force: float = 0.0
    node_flag: bool = False
    edge_ratio: float = 0.0
    step: int = 0

    def __post_init__(self):
        for name in SERIES_COLUMNS:
            value = getattr(self, name)
            if value is None and name == 'energy':
                continue
            if not math.isfinite(value):
                raise ValueError(f"observable {name} is not finite ({value})")
        if self.norm <= 0:
            raise ValueError(f"norm must be positive (got {self.norm})")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ResidualSeries:
    """Values at interior sample times"""
    times: np.ndarray
    values: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def __len__(self):
        return int(self.values.size)


@dataclass(frozen=True)
class TimeSeries:
    """Ordered records at uniformly spaced sample times"""
    records: Tuple[ObservableRecord, ...]
    scenario_hash: str = ''
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, 'records', records)
        if not records:
            raise SamplingError("time series needs at least one record")
        times = np.array([r.t for r in records])
        gaps = np.diff(times)
        if np.any(gaps <= 0):
            raise SamplingError("sample times must be strictly increasing")
        if gaps.size > 1 and np.max(np.abs(gaps - gaps[0])) > UNIFORM_SPACING_RTOL * max(abs(gaps[0]), 1.0):
            raise SamplingError("sample spacing is not uniform")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    @property
    def times(self) -> np.ndarray:
        return self.column('t')

    @property
    def spacing(self) -> float:
        if len(self.records) < 2:
            raise SamplingError("spacing undefined for a single sample")
        return float((self.records[-1].t - self.records[0].t) / (len(self.records) - 1))

    def column(self, name: str) -> np.ndarray:
        values = [getattr(r, name) for r in self.records]
        if name == 'energy' and any(v is None for v in values):
            return np.full(len(values), np.nan)
        return np.array(values, dtype=float)

    def decimate(self, factor: int) -> 'TimeSeries':
        """Keep every factor-th record"""
        return TimeSeries(self.records[::factor], self.scenario_hash, dict(self.metadata))

    def drift(self, name: str) -> float:
        """max |q(t) - q(0)|"""
        values = self.column(name)
        return float(np.max(np.abs(values - values[0])))

    @classmethod
    def from_records(cls, records: Sequence[ObservableRecord], scenario_hash: str = '',
                     metadata: Optional[dict] = None) -> 'TimeSeries':
        return cls(tuple(records), scenario_hash, metadata or {})


def compare_series(a: TimeSeries, b: TimeSeries, columns: List[str] = None) -> dict:
    """max |a - b| per column over common sample times"""
    columns = columns or [c for c in SERIES_COLUMNS if c != 't']
    if len(a) != len(b) or np.max(np.abs(a.times - b.times)) > 1e-9 * max(1.0, a.times[-1]):
        raise SamplingError("series are not sampled at the same times")
    result = {}
    for name in columns:
        left, right = a.column(name), b.column(name)
        if np.all(np.isnan(left)) and np.all(np.isnan(right)):
            continue
        result[name] = float(np.max(np.abs(left - right)))
    return result
