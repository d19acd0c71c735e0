"""
Initial wavefunctions and the boundary-clearance rule
"""

import logging

import numpy as np

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import ClearanceViolation, StateError
from ehrenlab.models.grid import ComplexField, Grid
from ehrenlab.models.scenario import StateKind
from ehrenlab.utils.validation import ParameterValidator, collect_finite, raise_if

logger = logging.getLogger(__name__)


def edge_density_ratio(density: np.ndarray) -> float:
    """Density at the periodic seam (first/last sample) relative to the peak"""
    peak = float(np.max(density))
    if peak <= 0:
        return float('inf')
    return float(max(density[0], density[-1]) / peak)


def check_clearance(psi: ComplexField, ratio: float = BaseConfig.CLEARANCE_RATIO) -> float:
    """Raise ClearanceViolation if the packet reaches the seam; return the edge ratio"""
    edge = edge_density_ratio(psi.density)
    if edge > ratio:
        raise ClearanceViolation(
            f"boundary clearance violated: edge density {edge:.3e} of peak exceeds {ratio:.1e}"
        )
    return edge


def norm(psi: ComplexField) -> float:
    """Integral of |psi|^2"""
    return float(psi.grid.dx * np.sum(psi.density))


def normalize(psi: ComplexField) -> ComplexField:
    """Rescale to unit norm"""
    total = norm(psi)
    if not total > 0:
        raise StateError("cannot normalize an identically zero field")
    return psi.with_values(psi.values / np.sqrt(total))


def gaussian_packet(grid: Grid, x0: float, sigma: float, k0: float = 0.0,
                    chirp: float = 0.0, cubic_phase: float = 0.0,
                    clearance_ratio: float = BaseConfig.CLEARANCE_RATIO) -> ComplexField:
    """
    Normalized Gaussian packet

    psi(x) ~ exp(-(x-x0)^2 / (4 sigma^2)) * exp(i[k0 (x-x0) + b (x-x0)^2 + c (x-x0)^3])

    with b = chirp and c = cubic_phase. The displacement x - x0 is taken as
    the plain coordinate difference, so the packet must stay clear of the seam.
    """
    errors = collect_finite([('x0', x0), ('sigma', sigma), ('k0', k0),
                             ('chirp', chirp), ('cubic_phase', cubic_phase)])
    raise_if(errors, StateError, 'gaussian_packet')
    if sigma <= 0:
        raise StateError(f"sigma must be positive (got {sigma})")
    if not 0 < x0 < grid.length:
        raise StateError(f"x0 must lie inside (0, {grid.length}) (got {x0})")

    d = grid.points - x0
    envelope = np.exp(-d ** 2 / (4.0 * sigma ** 2))
    phase = k0 * d + chirp * d ** 2 + cubic_phase * d ** 3
    psi = normalize(ComplexField(grid, envelope * np.exp(1j * phase)))

    edge = edge_density_ratio(psi.density)
    if edge > clearance_ratio:
        raise StateError(
            f"packet violates boundary clearance: edge density {edge:.3e} of peak "
            f"(limit {clearance_ratio:.1e}); narrow sigma or enlarge the domain"
        )
    return psi


def plane_wave(grid: Grid, mode: int) -> ComplexField:
    """exp(i k x)/sqrt(L) with k = 2 pi mode / L"""
    if not ParameterValidator.is_integer(mode):
        raise StateError(f"mode must be an integer (got {mode!r})")
    if abs(mode) >= grid.n // 2:
        raise StateError(f"mode {mode} aliases on a grid of {grid.n} points (|mode| < {grid.n // 2})")
    k = 2.0 * np.pi * mode / grid.length
    return ComplexField(grid, np.exp(1j * k * grid.points) / np.sqrt(grid.length))


def superpose(*components) -> ComplexField:
    """Normalized sum of (weight, state) pairs on a common grid"""
    if not components:
        raise StateError("superpose needs at least one component")
    grid = components[0][1].grid
    total = np.zeros(grid.n, dtype=np.complex128)
    for weight, state in components:
        if state.grid != grid:
            raise StateError("superposed states must share a grid")
        total = total + weight * state.values
    return normalize(ComplexField(grid, total))


def initial_state(spec, grid: Grid) -> ComplexField:
    """Build the state named by a StateSpec"""
    params = dict(spec.params)
    if spec.kind is StateKind.PLANE_WAVE:
        return plane_wave(grid, params.get('mode', 0))
    return gaussian_packet(
        grid,
        x0=params.get('x0', grid.length / 2),
        sigma=params.get('sigma', 1.0),
        k0=params.get('k0', 0.0),
        chirp=params.get('chirp', 0.0),
        cubic_phase=params.get('cubic_phase', 0.0),
    )
