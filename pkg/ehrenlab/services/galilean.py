"""
Galilean boosts of states and the boost-covariance test
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import PotentialError, StateError
from ehrenlab.models.grid import ComplexField, Grid
from ehrenlab.models.potentials import ZeroPotential
from ehrenlab.models.scenario import StepperConfig
from ehrenlab.services.integrators import evolve
from ehrenlab.services.spectral import shift_values
from ehrenlab.services.states import check_clearance

logger = logging.getLogger(__name__)


class QuadraticPhase(enum.Enum):
    STANDARD = 'standard'  # 1/2 m dv^2 t
    LITERAL = 'literal'    # 1/2 m dv^2, no factor of t


def boost_phase(grid: Grid, mass: float, dv: float, t: float,
                quadratic_phase: QuadraticPhase = QuadraticPhase.STANDARD) -> np.ndarray:
    """phi(x) = -m dv x + 1/2 m dv^2 t (or 1/2 m dv^2 for the literal form)"""
    quadratic = 0.5 * mass * dv ** 2
    if QuadraticPhase(quadratic_phase) is QuadraticPhase.STANDARD:
        quadratic *= t
    return -mass * dv * grid.points + quadratic


def boost(psi: ComplexField, grid: Grid, mass: float, dv: float, t: float,
          quadratic_phase: QuadraticPhase = QuadraticPhase.STANDARD,
          check_clearance_rule: bool = True,
          clearance_ratio: float = BaseConfig.CLEARANCE_RATIO) -> ComplexField:
    """
    psi'(x) = exp(i phi(x)) psi(x + dv t)

    The shift is a Fourier phase shift, so fractional displacements are exact
    for band-limited states and the map is unitary.
    """
    if abs(dv * t) >= grid.length / 4:
        raise StateError(f"boost displacement |dv*t|={abs(dv * t):g} must stay below L/4={grid.length / 4:g}")
    if dv == 0:
        return psi
    shifted = shift_values(psi.values, grid, dv * t)
    phase = boost_phase(grid, mass, dv, t, quadratic_phase)
    boosted = psi.with_values(np.exp(1j * phase) * shifted)
    if check_clearance_rule:
        check_clearance(boosted, clearance_ratio)
    return boosted


def aligned_distance(a: ComplexField, b: ComplexField) -> float:
    """min over theta of ||exp(i theta) a - b|| / ||b||"""
    dx = a.grid.dx
    overlap = dx * np.sum(np.conj(a.values) * b.values)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    diff = phase * a.values - b.values
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) / np.sum(np.abs(b.values) ** 2)))


@dataclass(frozen=True)
class CovarianceResult:
    error: float
    dv: float
    horizon: float
    quadratic_phase: str

    def to_dict(self):
        return {'covariance_error': self.error, 'dv': self.dv,
                'horizon': self.horizon, 'quadratic_phase': self.quadratic_phase}


def covariance_check(model, initial: ComplexField, dv: float, horizon: float,
                     stepper: StepperConfig, potential=None,
                     quadratic_phase: QuadraticPhase = QuadraticPhase.STANDARD) -> CovarianceResult:
    """Compare [evolve, then boost at T] with [boost at 0, then evolve]"""
    potential = potential if potential is not None else ZeroPotential()
    if not isinstance(potential, ZeroPotential):
        raise PotentialError("covariance needs a zero potential: boosts do not preserve external potentials")

    plan = StepperConfig(dt=stepper.dt, t_final=horizon, scheme=stepper.scheme)
    elapsed = plan.n_steps * plan.dt
    grid = initial.grid
    mass = model.mass

    evolved_then_boosted = boost(evolve(model, initial, potential, plan), grid, mass, dv,
                                 elapsed, quadratic_phase)
    boosted_then_evolved = evolve(model, boost(initial, grid, mass, dv, 0.0, quadratic_phase),
                                  potential, plan)
    error = aligned_distance(evolved_then_boosted, boosted_then_evolved)
    logger.debug(f"Covariance {model.kind.value}: dv={dv}, T={elapsed}, "
                 f"phase={QuadraticPhase(quadratic_phase).value}, error={error:.3e}")
    return CovarianceResult(error, dv, elapsed, QuadraticPhase(quadratic_phase).value)


def covariance_error(model, initial: ComplexField, dv: float, horizon: float,
                     stepper: StepperConfig, potential=None,
                     quadratic_phase: QuadraticPhase = QuadraticPhase.STANDARD) -> float:
    """Phase-aligned relative L2 distance between the two boost orderings"""
    return covariance_check(model, initial, dv, horizon, stepper, potential, quadratic_phase).error
