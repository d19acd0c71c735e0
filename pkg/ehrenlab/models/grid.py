"""
Periodic 1-D grid and the field containers bound to it
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ehrenlab.exceptions import GridError
from ehrenlab.utils.validation import ParameterValidator

MIN_POINTS = 8


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, length); index n is identified with 0"""
    n: int
    length: float

    def __post_init__(self):
        if not ParameterValidator.is_power_of_two(self.n):
            raise GridError(f"n must be a power of two (got {self.n!r})")
        if self.n < MIN_POINTS:
            raise GridError(f"n must be >= {MIN_POINTS} (got {self.n})")
        if not ParameterValidator.is_positive(self.length):
            raise GridError(f"length must be positive and finite (got {self.length!r})")
        object.__setattr__(self, 'length', float(self.length))

    @property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def points(self) -> np.ndarray:
        x = np.arange(self.n) * self.dx
        x.flags.writeable = False
        return x

    @property
    def k_max(self) -> float:
        """Largest resolved wavenumber, pi/dx"""
        return np.pi / self.dx

    def minimum_image(self, center: float) -> np.ndarray:
        """Signed periodic distance x - center mapped into [-L/2, L/2)"""
        d = self.points - center
        return d - self.length * np.floor(d / self.length + 0.5)

    def to_dict(self):
        return {'n': self.n, 'length': self.length}


def make_grid(n: int, length: float) -> Grid:
    """Build a validated periodic grid"""
    return Grid(n=n, length=length)


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class _Field:
    grid: Grid
    values: np.ndarray = field(repr=False)

    _dtype = None

    def __post_init__(self):
        values = _frozen_array(self.values, self._dtype)
        if values.shape != (self.grid.n,):
            raise GridError(f"field has shape {values.shape}, grid expects ({self.grid.n},)")
        if not np.all(np.isfinite(values)):
            raise GridError("field contains non-finite values")
        object.__setattr__(self, 'values', values)

    def with_values(self, values):
        """New field on the same grid"""
        return type(self)(self.grid, values)

    def __len__(self):
        return self.grid.n


@dataclass(frozen=True, eq=False)
class ComplexField(_Field):
    """Sampled complex amplitudes, e.g. the wavefunction"""
    _dtype = np.complex128

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def __repr__(self):
        return f'<ComplexField n={self.grid.n} L={self.grid.length}>'


@dataclass(frozen=True, eq=False)
class RealField(_Field):
    """Sampled real quantities: densities, currents, potentials"""
    _dtype = np.float64

    def __repr__(self):
        return f'<RealField n={self.grid.n} L={self.grid.length}>'
