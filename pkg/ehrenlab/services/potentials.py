"""
Evaluation of external potentials and their gradients on the grid
"""

from typing import Optional, Union

import numpy as np

from ehrenlab.exceptions import PotentialError
from ehrenlab.models.grid import Grid, RealField
from ehrenlab.models.potentials import (
    DensityCoupledPotential, GaussianBarrier, GradientMode, HarmonicPotential,
    UniformPotential, ZeroPotential
)
from ehrenlab.services.spectral import derivative_values


def _density_values(rho: Optional[Union[RealField, np.ndarray]]) -> Optional[np.ndarray]:
    if rho is None:
        return None
    return rho.values if isinstance(rho, RealField) else np.asarray(rho, dtype=np.float64)


def _closed_form_values(p, grid: Grid, mass: float) -> np.ndarray:
    if isinstance(p, ZeroPotential):
        return np.zeros(grid.n)
    if isinstance(p, HarmonicPotential):
        d = grid.minimum_image(p.center)
        return 0.5 * mass * p.omega ** 2 * d ** 2
    if isinstance(p, UniformPotential):
        return -p.f0 * grid.points
    if isinstance(p, GaussianBarrier):
        d = grid.minimum_image(p.center)
        return p.height * np.exp(-d ** 2 / (2.0 * p.width ** 2))
    raise PotentialError(f"unsupported potential {p!r}")


def _closed_form_gradient(p, grid: Grid, mass: float) -> np.ndarray:
    if isinstance(p, ZeroPotential):
        return np.zeros(grid.n)
    if isinstance(p, HarmonicPotential):
        return mass * p.omega ** 2 * grid.minimum_image(p.center)
    if isinstance(p, UniformPotential):
        return np.full(grid.n, -p.f0)
    if isinstance(p, GaussianBarrier):
        d = grid.minimum_image(p.center)
        return -p.height * d / p.width ** 2 * np.exp(-d ** 2 / (2.0 * p.width ** 2))
    raise PotentialError(f"unsupported potential {p!r}")


def potential_values(p, grid: Grid, rho: Optional[np.ndarray] = None,
                     mass: float = 1.0) -> np.ndarray:
    """Raw-array form of evaluate_potential"""
    if isinstance(p, DensityCoupledPotential):
        if rho is None:
            raise PotentialError("density_coupled potential needs the density")
        return _closed_form_values(p.base, grid, mass) * (1.0 + p.eta * rho)
    return _closed_form_values(p, grid, mass)


def evaluate_potential(p, grid: Grid, rho=None, mass: float = 1.0) -> RealField:
    """Samples of U on the grid; rho is used only by density-coupled potentials"""
    return RealField(grid, potential_values(p, grid, _density_values(rho), mass))


def potential_gradient(p, grid: Grid, rho=None, mode: GradientMode = GradientMode.FULL,
                       mass: float = 1.0) -> RealField:
    """
    dU/dx on the grid.

    Closed-form potentials use their analytic gradient and ignore mode. For
    density-coupled potentials, FULL includes U_base * eta * rho' (rho' taken
    spectrally) and PARTIAL is U_base' * (1 + eta * rho).
    """
    mode = GradientMode(mode)
    if not isinstance(p, DensityCoupledPotential):
        return RealField(grid, _closed_form_gradient(p, grid, mass))

    rho_values = _density_values(rho)
    if rho_values is None:
        raise PotentialError("density_coupled potential needs the density")
    partial = _closed_form_gradient(p.base, grid, mass) * (1.0 + p.eta * rho_values)
    if mode is GradientMode.PARTIAL:
        return RealField(grid, partial)
    base = _closed_form_values(p.base, grid, mass)
    return RealField(grid, partial + base * p.eta * derivative_values(rho_values, grid, 1))


def potential_energy_density(p, grid: Grid, rho: np.ndarray, mass: float = 1.0) -> np.ndarray:
    """Energy density whose rho-derivative is U(rho, x)"""
    if isinstance(p, DensityCoupledPotential):
        return _closed_form_values(p.base, grid, mass) * (rho + 0.5 * p.eta * rho ** 2)
    return _closed_form_values(p, grid, mass) * rho
