"""
Integral diagnostics: centroid, velocity, momentum, force, energy and the
finite-difference Newton-law residuals over a sampled run
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import SamplingError
from ehrenlab.models.dynamics import DensityFunctionalModel, DoebnerGoldinModel
from ehrenlab.models.grid import ComplexField, Grid, RealField
from ehrenlab.models.potentials import GradientMode
from ehrenlab.models.records import ObservableRecord, ResidualSeries, TimeSeries
from ehrenlab.services.dynamics import (
    current_values, density_functional_term, has_nodes, velocity_values
)
from ehrenlab.services.potentials import potential_energy_density, potential_gradient
from ehrenlab.services.spectral import convolve_values, derivative_values, wavenumber_array
from ehrenlab.services.states import check_clearance, edge_density_ratio, norm

logger = logging.getLogger(__name__)


class DGViolation(NamedTuple):
    value: float
    node_flag: bool


# ================================
# SNAPSHOT OBSERVABLES
# ================================

def centroid(psi: ComplexField, grid: Grid, check_clearance_rule: bool = True,
             clearance_ratio: float = BaseConfig.CLEARANCE_RATIO) -> float:
    """<x> = int rho x / int rho"""
    if check_clearance_rule:
        check_clearance(psi, clearance_ratio)
    rho = psi.density
    return float(np.sum(rho * grid.points) / np.sum(rho))


def mean_velocity(psi: ComplexField, grid: Grid, mass: float) -> float:
    """<v> = int j"""
    return float(grid.dx * np.sum(current_values(psi.values, grid, mass)))


def total_momentum(psi: ComplexField, grid: Grid, mass: float) -> float:
    """m int j (the gradient part of the field momentum integrates to zero)"""
    return mass * mean_velocity(psi, grid, mass)


def force(psi: ComplexField, potential, mode: GradientMode = GradientMode.FULL,
          mass: float = 1.0) -> float:
    """F = -int rho dU/dx"""
    grid = psi.grid
    rho = psi.density
    gradient = potential_gradient(potential, grid, rho, mode, mass)
    return float(-grid.dx * np.sum(rho * gradient.values))


def dg_violation_term(psi: ComplexField, grid: Grid, mass: float, coupling: float,
                      epsilon: float = BaseConfig.NODE_EPSILON) -> DGViolation:
    """lambda * int d(rho)/dx * d/dx(j/rho)"""
    rho = psi.density
    flag = has_nodes(rho, epsilon)
    if coupling == 0:
        return DGViolation(0.0, flag)
    velocity = velocity_values(psi.values, grid, mass, epsilon)
    integrand = derivative_values(rho, grid, 1) * derivative_values(velocity, grid, 1)
    return DGViolation(float(coupling * grid.dx * np.sum(integrand)), flag)


def self_force(model, psi: ComplexField) -> float:
    """int rho d/dx O(rho); zero for local and even-kernel functionals"""
    if not isinstance(model, DensityFunctionalModel):
        return 0.0
    rho = RealField(psi.grid, psi.density)
    functional = density_functional_term(model, rho)
    return float(psi.grid.dx * np.sum(rho.values * derivative_values(functional.values, psi.grid, 1)))


def energy(model, psi: ComplexField, grid: Grid, potential) -> Optional[float]:
    """
    Conserved energy of the Lagrangian families:
    int |psi'|^2/2m + W(rho, x) + g rho^(a+1)/(a+1)   (local)
                                + g/2 rho (K * rho)   (nonlocal)
    Returns None for Doebner-Goldin dynamics, which has no Lagrangian.
    """
    if not model.is_lagrangian:
        return None
    mass = model.mass
    rho = psi.density
    gradient = derivative_values(psi.values, grid, 1)
    density = np.abs(gradient) ** 2 / (2.0 * mass)
    density = density + potential_energy_density(potential, grid, rho, mass)
    if isinstance(model, DensityFunctionalModel):
        if model.kernel is not None:
            smoothed = convolve_values(rho, model.kernel.transfer(wavenumber_array(grid)))
            density = density + 0.5 * model.g * rho * smoothed
        else:
            a = model.exponent
            density = density + model.g * rho ** (a + 1) / (a + 1)
    return float(grid.dx * np.sum(density))


def record(model, psi: ComplexField, potential, t: float, step: int = 0) -> ObservableRecord:
    """All scalar observables of one state"""
    grid = psi.grid
    mass = model.mass
    v_mean = mean_velocity(psi, grid, mass)
    f_full = force(psi, potential, GradientMode.FULL, mass)
    if potential.depends_on_density:
        f_partial = force(psi, potential, GradientMode.PARTIAL, mass)
    else:
        f_partial = f_full
    if isinstance(model, DoebnerGoldinModel):
        violation = dg_violation_term(psi, grid, mass, model.coupling, model.epsilon)
    else:
        violation = DGViolation(0.0, False)
    return ObservableRecord(
        t=float(t),
        norm=norm(psi),
        x_mean=centroid(psi, grid, check_clearance_rule=False),
        v_mean=v_mean,
        p_total=mass * v_mean,
        force_full=f_full,
        force_partial=f_partial,
        dg_violation=violation.value,
        energy=energy(model, psi, grid, potential),
        self_force=self_force(model, psi),
        node_flag=violation.node_flag,
        edge_ratio=edge_density_ratio(psi.density),
        step=step,
    )


# ================================
# TIME-SERIES DIAGNOSTICS
# ================================

def _centered(series: TimeSeries, column: str):
    if len(series) < 3:
        raise SamplingError(f"need at least 3 samples for centered differences (got {len(series)})")
    h = series.spacing
    values = series.column(column)
    return series.times[1:-1], (values[2:] - values[:-2]) / (2.0 * h)


def ehrenfest_residual(series: TimeSeries, mass: float,
                       mode: GradientMode = GradientMode.FULL) -> ResidualSeries:
    """m d<v>/dt - F(t) at interior samples (centered differences)"""
    times, dv_dt = _centered(series, 'v_mean')
    column = 'force_full' if GradientMode(mode) is GradientMode.FULL else 'force_partial'
    return ResidualSeries(times, mass * dv_dt - series.column(column)[1:-1])


def momentum_law_defect(series: TimeSeries, mass: float) -> ResidualSeries:
    """dP/dt - F(t) with P = m int j"""
    times, dp_dt = _centered(series, 'p_total')
    return ResidualSeries(times, dp_dt - series.column('force_full')[1:-1])


def velocity_chain_defect(series: TimeSeries) -> ResidualSeries:
    """d<x>/dt - <v>"""
    times, dx_dt = _centered(series, 'x_mean')
    return ResidualSeries(times, dx_dt - series.column('v_mean')[1:-1])


def violation_at_interior(series: TimeSeries) -> ResidualSeries:
    return ResidualSeries(series.times[1:-1], series.column('dg_violation')[1:-1])


@dataclass(frozen=True)
class FDCalibration:
    """Finite-difference tolerance calibrated by halving the sampling rate"""
    tolerance: float
    coefficient: float
    spacing: float
    ratio: float
    max_residual: float
    extrapolated_defect: float

    def to_dict(self):
        return {
            'tol_fd': self.tolerance,
            'C': self.coefficient,
            'h': self.spacing,
            'halving_ratio': self.ratio,
            'max_residual': self.max_residual,
            'extrapolated_defect': self.extrapolated_defect,
        }


def calibrate_fd_tolerance(series: TimeSeries,
                           residual: Callable[[TimeSeries], ResidualSeries],
                           safety: float = BaseConfig.FD_SAFETY,
                           floor: float = BaseConfig.FD_FLOOR) -> FDCalibration:
    """
    tol_fd = C h^2 from the residual at spacings h and 2h.

    With r_h = D + a h^2 and r_2h = D + 4 a h^2 at common samples, the
    truncation a h^2 is (r_2h - r_h)/3 whatever the true defect D is, so the
    tolerance does not absorb a real violation. The ratio max|r_2h|/max|r_h|
    is ~4 when the residual is pure truncation.
    """
    if len(series) < 5:
        raise SamplingError(f"need at least 5 samples to calibrate (got {len(series)})")
    h = series.spacing
    fine = residual(series)
    coarse = residual(series.decimate(2))
    # coarse interior j (from 0) is sample 2j+2, i.e. fine-interior index 2j+1
    common = fine.values[1:2 * len(coarse):2]
    truncation = np.abs(coarse.values - common) / 3.0
    coefficient = safety * float(np.max(truncation)) / h ** 2
    tolerance = max(coefficient * h ** 2, floor)
    ratio = coarse.max_abs / fine.max_abs if fine.max_abs > 0 else math.inf
    extrapolated = common - (coarse.values - common) / 3.0
    return FDCalibration(
        tolerance=tolerance,
        coefficient=coefficient,
        spacing=h,
        ratio=float(ratio),
        max_residual=fine.max_abs,
        extrapolated_defect=float(np.max(np.abs(extrapolated))),
    )


def convergence_order(coarse_error: float, fine_error: float, refinement: float = 2.0) -> float:
    """log(e_coarse / e_fine) / log(refinement)"""
    if coarse_error <= 0 or fine_error <= 0:
        return math.nan
    return math.log(coarse_error / fine_error) / math.log(refinement)
