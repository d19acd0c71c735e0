"""
Right-hand sides dpsi/dt = -i H[psi] psi for the three dynamics families
"""

import logging
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy import fft

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import BlowUpError, ModelError
from ehrenlab.models.dynamics import (
    DensityFunctionalModel, DoebnerGoldinModel, MODEL_TYPES
)
from ehrenlab.models.grid import ComplexField, Grid, RealField
from ehrenlab.services.potentials import potential_values
from ehrenlab.services.spectral import (
    convolve_values, derivative_values, exponential_filter, filter_peak_gain, wavenumber_array
)

logger = logging.getLogger(__name__)


class VelocityField(NamedTuple):
    field: RealField
    node_flag: bool


class DGTerm(NamedTuple):
    field: ComplexField
    node_flag: bool


def _check_grid(psi: ComplexField, grid: Grid):
    if psi.grid != grid:
        raise ModelError("state is bound to a different grid")


def current_values(values: np.ndarray, grid: Grid, mass: float) -> np.ndarray:
    """j = (1/m) Im(conj(psi) dpsi/dx)"""
    return np.imag(np.conj(values) * derivative_values(values, grid, 1)) / mass


def current(psi: ComplexField, grid: Grid, mass: float) -> RealField:
    """Probability current j = (i/2m)(psi dpsi*/dx - psi* dpsi/dx)"""
    _check_grid(psi, grid)
    return RealField(grid, current_values(psi.values, grid, mass))


def support_mask(rho: np.ndarray, fraction: float = BaseConfig.SUPPORT_FRACTION) -> np.ndarray:
    """Contiguous index range between the first and last sample above fraction * max(rho)"""
    above = np.flatnonzero(rho >= fraction * np.max(rho))
    mask = np.zeros(rho.shape, dtype=bool)
    if above.size:
        mask[above[0]:above[-1] + 1] = True
    return mask


def has_nodes(rho: np.ndarray, epsilon: float,
              fraction: float = BaseConfig.SUPPORT_FRACTION) -> bool:
    """True if the density dips below epsilon * max(rho) inside the packet support"""
    peak = np.max(rho)
    if peak <= 0:
        return True
    inside = rho[support_mask(rho, fraction)]
    return bool(np.min(inside) < max(epsilon, np.finfo(float).tiny) * peak)


def velocity_values(values: np.ndarray, grid: Grid, mass: float, epsilon: float) -> np.ndarray:
    rho = np.abs(values) ** 2
    return current_values(values, grid, mass) / (rho + epsilon * np.max(rho))


def phase_velocity_field(psi: ComplexField, grid: Grid, mass: float,
                         epsilon: float = BaseConfig.NODE_EPSILON) -> VelocityField:
    """j / (rho + epsilon * max(rho)); equals (1/m) dS/dx away from nodes"""
    _check_grid(psi, grid)
    if epsilon < 0:
        raise ModelError(f"epsilon must be >= 0 (got {epsilon})")
    flag = has_nodes(psi.density, epsilon)
    if flag:
        logger.warning("node regularization in effect: density below epsilon*max on the support")
    return VelocityField(RealField(grid, velocity_values(psi.values, grid, mass, epsilon)), flag)


def dg_cutoff(grid: Grid, mass: float, coupling: float,
              growth_rate: float = BaseConfig.DG_GROWTH_RATE) -> float:
    """
    Cutoff wavenumber of the low-pass filter on the current term.

    lambda * d/dx(j/rho) is anti-diffusive for one sign of lambda: a phase
    ripple at wavenumber k grows at |lambda| k^2 / 2m. Behind the filter the
    fastest rate is |lambda| * filter_peak_gain() * cutoff^2 / 2m, held at
    growth_rate. Never above k_max / 2.
    """
    cap = 0.5 * grid.k_max
    if coupling == 0:
        return cap
    cutoff = math.sqrt(2.0 * mass * growth_rate / (abs(coupling) * filter_peak_gain()))
    return min(cutoff, cap)


def current_transfer(grid: Grid, mass: float, coupling: float,
                     growth_rate: float = BaseConfig.DG_GROWTH_RATE) -> np.ndarray:
    """Filtered d/dx as a transfer function: i k * exponential_filter"""
    cutoff = dg_cutoff(grid, mass, coupling, growth_rate)
    return 1j * wavenumber_array(grid) * exponential_filter(grid, cutoff)


def dg_term(psi: ComplexField, grid: Grid, mass: float, coupling: float,
            epsilon: float = BaseConfig.NODE_EPSILON,
            growth_rate: float = BaseConfig.DG_GROWTH_RATE) -> DGTerm:
    """
    lambda * d/dx[phase_velocity_field] * psi, with the derivative low-pass
    filtered at dg_cutoff. Inside the packet support the filter leaves the
    field untouched to roundoff.
    """
    velocity = phase_velocity_field(psi, grid, mass, epsilon)
    transfer = current_transfer(grid, mass, coupling, growth_rate)
    multiplier = coupling * convolve_values(velocity.field.values, transfer)
    return DGTerm(ComplexField(grid, multiplier * psi.values), velocity.node_flag)


def _functional_values(model: DensityFunctionalModel, rho: np.ndarray, grid: Grid,
                       transfer: Optional[np.ndarray] = None) -> np.ndarray:
    if model.kernel is not None:
        if transfer is None:
            transfer = model.kernel.transfer(wavenumber_array(grid))
        return model.g * convolve_values(rho, transfer)
    return model.g * rho ** model.exponent


def density_functional_term(model: DensityFunctionalModel, rho: RealField) -> RealField:
    """O(rho) = g rho^a, or g (K * rho) for a nonlocal kernel"""
    if not isinstance(model, DensityFunctionalModel):
        raise ModelError(f"density_functional_term needs a density_functional model (got {model.kind.value})")
    return RealField(rho.grid, _functional_values(model, rho.values, rho.grid))


class Dynamics:
    """
    Precomputed Hamiltonian action for one (model, grid, potential) triple.

    Works on raw complex arrays so the steppers avoid per-stage container
    overhead; `rhs` below is the field-level entry point.
    """

    def __init__(self, model, grid: Grid, potential):
        if not isinstance(model, MODEL_TYPES):
            raise ModelError(f"unsupported model {model!r}")
        self.model = model
        self.grid = grid
        self.potential = potential
        self.mass = model.mass
        self.k = wavenumber_array(grid)
        self.kinetic = 0.5 * self.k ** 2 / self.mass
        self._static_u = None
        if not potential.depends_on_density:
            self._static_u = potential_values(potential, grid, mass=self.mass)
        self._transfer = None
        if isinstance(model, DensityFunctionalModel) and model.kernel is not None:
            self._transfer = model.kernel.transfer(self.k)
        self._current_transfer = None
        if isinstance(model, DoebnerGoldinModel) and model.coupling != 0:
            self._current_transfer = current_transfer(grid, self.mass, model.coupling)

    def self_interaction(self, rho: np.ndarray) -> Optional[np.ndarray]:
        if not isinstance(self.model, DensityFunctionalModel):
            return None
        return _functional_values(self.model, rho, self.grid, self._transfer)

    def current_term(self, values: np.ndarray) -> Optional[np.ndarray]:
        """Filtered lambda * d/dx(j/rho); None unless the model is Doebner-Goldin with lambda != 0"""
        if self._current_transfer is None:
            return None
        velocity = velocity_values(values, self.grid, self.mass, self.model.epsilon)
        return self.model.coupling * convolve_values(velocity, self._current_transfer)

    def multiplier(self, values: np.ndarray) -> np.ndarray:
        """Position-diagonal part U(rho, x) + O(rho) (the current term excluded)"""
        rho = np.abs(values) ** 2
        total = self.potential_at(rho)
        nonlinear = self.self_interaction(rho)
        if nonlinear is not None:
            total = total + nonlinear
        return total

    def potential_at(self, rho: np.ndarray) -> np.ndarray:
        if self._static_u is not None:
            return self._static_u
        return potential_values(self.potential, self.grid, rho, self.mass)

    def diagonal(self, values: np.ndarray) -> np.ndarray:
        """Every position-diagonal term, the current term included"""
        total = self.multiplier(values)
        current = self.current_term(values)
        if current is not None:
            total = total + current
        return total

    def hamiltonian(self, values: np.ndarray) -> np.ndarray:
        """H[psi] psi"""
        return fft.ifft(self.kinetic * fft.fft(values)) + self.diagonal(values) * values

    def __call__(self, values: np.ndarray, t: float = 0.0) -> np.ndarray:
        result = -1j * self.hamiltonian(values)
        if not np.all(np.isfinite(result)):
            raise BlowUpError("non-finite values in the right-hand side")
        return result

    def spectral_radius(self, values: np.ndarray) -> float:
        """Bound on |eigenvalue| of the linearized H used by the RK4 stability guard"""
        radius = float(np.max(self.kinetic) + np.max(np.abs(self.diagonal(values))))
        if self._current_transfer is not None:
            # filtered anti-diffusive growth of phase ripples
            radius += abs(self.model.coupling) * float(np.max(np.abs(self.k * self._current_transfer))) \
                / (2.0 * self.mass)
        return radius


def rhs(model, psi: ComplexField, grid: Grid, potential, t: float = 0.0) -> ComplexField:
    """dpsi/dt = -i [-(1/2m) psi'' + (U + O(rho)) psi + DG term]"""
    _check_grid(psi, grid)
    return ComplexField(grid, Dynamics(model, grid, potential)(psi.values, t))


def gauge_phase(psi: ComplexField, alpha: float) -> ComplexField:
    """psi * exp(i alpha)"""
    return psi.with_values(np.exp(1j * alpha) * psi.values)

