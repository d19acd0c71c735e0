"""
Quadrature and spectral differentiation on the periodic grid
"""

from functools import lru_cache
from typing import Union

import numpy as np
from scipy import fft

from ehrenlab.models.grid import ComplexField, Grid, RealField

Field = Union[ComplexField, RealField]


@lru_cache(maxsize=32)
def _wavenumbers(n: int, length: float) -> np.ndarray:
    k = 2.0 * np.pi * fft.fftfreq(n, d=length / n)
    # fftfreq puts the Nyquist mode at -n/2, as required
    k.flags.writeable = False
    return k


def wavenumber_array(grid: Grid) -> np.ndarray:
    """Raw wavenumber array in DFT ordering (read-only, cached per grid)"""
    return _wavenumbers(grid.n, grid.length)


def wavenumbers(grid: Grid) -> RealField:
    """k_i = 2*pi*i/L for i < n/2, 2*pi*(i-n)/L otherwise"""
    return RealField(grid, wavenumber_array(grid))


def integrate(field: RealField) -> float:
    """Periodic trapezoid rule: dx * sum(values)"""
    return float(field.grid.dx * np.sum(field.values))


def derivative_values(values: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Spectral derivative of a raw array; real input gives real output"""
    k = wavenumber_array(grid)
    transformed = fft.fft(values) * (1j * k) ** order
    result = fft.ifft(transformed)
    if not np.iscomplexobj(values):
        return result.real
    return result


def spectral_derivative(field: Field, order: int = 1) -> Field:
    """Forward transform, multiply by (ik)^order, inverse transform"""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2 (got {order!r})")
    return field.with_values(derivative_values(field.values, field.grid, order))


def shift_values(values: np.ndarray, grid: Grid, displacement: float) -> np.ndarray:
    """Evaluate a band-limited field at x + displacement by Fourier phase shifting"""
    k = wavenumber_array(grid)
    return fft.ifft(fft.fft(values) * np.exp(1j * k * displacement))


def convolve_values(values: np.ndarray, transfer: np.ndarray) -> np.ndarray:
    """Circular convolution of a real array with a Hermitian transfer function"""
    return fft.ifft(fft.fft(values) * transfer).real


# ================================
# LOW-PASS FILTERING
# ================================

# exp(-36) ~ 2e-16: the filter is at machine precision at the cutoff
FILTER_STRENGTH = 36.0
FILTER_ORDER = 8


def exponential_filter(grid: Grid, cutoff: float, strength: float = FILTER_STRENGTH,
                       order: int = FILTER_ORDER) -> np.ndarray:
    """exp(-strength * (|k| / cutoff)^order) in DFT ordering"""
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive (got {cutoff!r})")
    k = wavenumber_array(grid)
    return np.exp(-strength * (np.abs(k) / cutoff) ** order)


def filter_peak_gain(strength: float = FILTER_STRENGTH, order: int = FILTER_ORDER) -> float:
    """
    max over k of k^2 * filter(k), in units of cutoff^2.

    The maximum sits at (k / cutoff)^order = 2 / (strength * order).
    """
    peak = 2.0 / (strength * order)
    return float(peak ** (2.0 / order) * np.exp(-2.0 / order))
