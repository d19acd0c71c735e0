"""
Fixed-step time propagation

Explicit RK4 handles every dynamics family; Strang split-step Fourier is the
independent scheme for the Lagrangian families and rejects Doebner-Goldin.
"""

import logging
import time
from typing import Iterator, Optional, Tuple

import numpy as np
from scipy import fft

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import (
    BlowUpError, ClearanceViolation, GuardViolation, ModelError, StabilityError
)
from ehrenlab.models.grid import ComplexField
from ehrenlab.models.records import TimeSeries
from ehrenlab.models.scenario import Scenario, Scheme, StepperConfig
from ehrenlab.services import observables
from ehrenlab.services.dynamics import Dynamics
from ehrenlab.services.states import check_clearance, initial_state

logger = logging.getLogger(__name__)

STABILITY_FORMULA = "dt <= reach / (k_max^2/(2m) + max|U + O + DG| + filtered DG growth)"


# ================================
# GUARDS
# ================================

def stability_limit(dynamics: Dynamics, values: np.ndarray,
                    reach: float = BaseConfig.RK4_STABILITY_REACH) -> float:
    """Largest RK4 step for the linearized spectrum at the given state"""
    return reach / dynamics.spectral_radius(values)


def check_stability(dynamics: Dynamics, values: np.ndarray, dt: float,
                    reach: float = BaseConfig.RK4_STABILITY_REACH) -> float:
    """Raise StabilityError when dt is above the RK4 guard; return the limit"""
    limit = stability_limit(dynamics, values, reach)
    if dt > limit:
        raise StabilityError(
            f"dt={dt:g} violates the RK4 stability guard {STABILITY_FORMULA} "
            f"with reach={reach:g}, k_max={dynamics.grid.k_max:.6g}, m={dynamics.mass:g}: "
            f"limit is {limit:.6g}"
        )
    return limit


def _check_blowup(values: np.ndarray, reference_max: float,
                  factor: float = BaseConfig.BLOWUP_FACTOR):
    peak = float(np.max(np.abs(values)))
    if not np.isfinite(peak) or peak > factor * reference_max:
        raise BlowUpError(
            f"amplitude blow-up: max|psi|={peak:.3e} exceeds {factor:.0e} x initial max {reference_max:.3e}"
        )


# ================================
# SINGLE STEPS
# ================================

def _rk4_values(f, values: np.ndarray, t: float, dt: float) -> np.ndarray:
    k1 = f(values, t)
    k2 = f(values + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = f(values + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = f(values + dt * k3, t + dt)
    return values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _split_values(dynamics: Dynamics, values: np.ndarray, dt: float,
                  kinetic_phase: np.ndarray) -> np.ndarray:
    # half multiplier step, full kinetic step, half multiplier step on the new density
    values = np.exp(-0.5j * dt * dynamics.multiplier(values)) * values
    values = fft.ifft(kinetic_phase * fft.fft(values))
    return np.exp(-0.5j * dt * dynamics.multiplier(values)) * values


def step_rk4(model, psi: ComplexField, potential, t: float, dt: float,
             dynamics: Optional[Dynamics] = None,
             blowup_factor: float = BaseConfig.BLOWUP_FACTOR) -> ComplexField:
    """Classical fourth-order Runge-Kutta step over dpsi/dt = -i H psi"""
    if dt == 0:
        return psi
    dynamics = dynamics or Dynamics(model, psi.grid, potential)
    values = _rk4_values(dynamics, psi.values, t, dt)
    _check_blowup(values, float(np.max(np.abs(psi.values))), blowup_factor)
    return psi.with_values(values)


def step_split_fourier(model, psi: ComplexField, potential, dt: float,
                       dynamics: Optional[Dynamics] = None) -> ComplexField:
    """Strang step exp(-i M dt/2) exp(-i K dt) exp(-i M dt/2); unitary by construction"""
    if not model.is_lagrangian:
        raise ModelError(f"split_step cannot propagate {model.kind.value} dynamics: "
                         "its current term is not a multiplier in either basis")
    dynamics = dynamics or Dynamics(model, psi.grid, potential)
    kinetic_phase = np.exp(-1j * dt * dynamics.kinetic)
    return psi.with_values(_split_values(dynamics, psi.values, dt, kinetic_phase))


class Propagator:
    """Repeated steps of one scheme with the per-run precomputation done once"""

    def __init__(self, model, grid, potential, stepper: StepperConfig):
        if stepper.scheme is Scheme.SPLIT_STEP and not model.is_lagrangian:
            raise ModelError(f"{model.kind.value} dynamics cannot be paired with the split_step scheme")
        self.model = model
        self.stepper = stepper
        self.dt = stepper.dt
        self.dynamics = Dynamics(model, grid, potential)
        self._kinetic_phase = None
        if stepper.scheme is Scheme.SPLIT_STEP:
            self._kinetic_phase = np.exp(-1j * self.dt * self.dynamics.kinetic)

    def check_stability(self, values: np.ndarray) -> Optional[float]:
        if self.stepper.scheme is Scheme.RK4:
            return check_stability(self.dynamics, values, self.dt)
        return None

    def step(self, values: np.ndarray, t: float) -> np.ndarray:
        if self._kinetic_phase is not None:
            return _split_values(self.dynamics, values, self.dt, self._kinetic_phase)
        return _rk4_values(self.dynamics, values, t, self.dt)


# ================================
# RUNS
# ================================

def iterate_samples(model, psi: ComplexField, potential, stepper: StepperConfig,
                    blowup_factor: float = BaseConfig.BLOWUP_FACTOR
                    ) -> Iterator[Tuple[int, float, np.ndarray]]:
    """
    Yield (step, t, values) at step 0 and every sample_every steps up to
    floor(t_final/dt). Times are step*dt, never accumulated.
    """
    propagator = Propagator(model, psi.grid, potential, stepper)
    propagator.check_stability(psi.values)
    reference = float(np.max(np.abs(psi.values)))
    values = psi.values
    yield 0, 0.0, values
    for step in range(1, stepper.n_steps + 1):
        try:
            values = propagator.step(values, (step - 1) * stepper.dt)
            if step % stepper.sample_every == 0:
                _check_blowup(values, reference, blowup_factor)
        except GuardViolation as exc:
            raise exc.at_step(step)
        if step % stepper.sample_every == 0:
            yield step, step * stepper.dt, values


def evolve(model, psi: ComplexField, potential, stepper: StepperConfig,
           blowup_factor: float = BaseConfig.BLOWUP_FACTOR) -> ComplexField:
    """State after floor(t_final/dt) steps"""
    propagator = Propagator(model, psi.grid, potential, stepper)
    propagator.check_stability(psi.values)
    reference = float(np.max(np.abs(psi.values)))
    values = psi.values
    for step in range(1, stepper.n_steps + 1):
        try:
            values = propagator.step(values, (step - 1) * stepper.dt)
        except GuardViolation as exc:
            raise exc.at_step(step)
    try:
        _check_blowup(values, reference, blowup_factor)
    except GuardViolation as exc:
        raise exc.at_step(stepper.n_steps)
    return psi.with_values(values)


def run(scenario: Scenario, clearance_ratio: float = BaseConfig.CLEARANCE_RATIO) -> TimeSeries:
    """
    Propagate a scenario and record every observable at each sample.

    Raises StabilityError before the first step and a GuardViolation subclass
    (tagged with the step index) when a clearance or blow-up guard trips.
    """
    grid = scenario.grid
    model = scenario.model
    potential = scenario.potential
    stepper = scenario.stepper
    psi = initial_state(scenario.state, grid)

    started = time.monotonic()
    records = []
    for step, t, values in iterate_samples(model, psi, potential, stepper):
        state = ComplexField(grid, values)
        try:
            check_clearance(state, clearance_ratio)
        except ClearanceViolation as exc:
            raise exc.at_step(step)
        records.append(observables.record(model, state, potential, t, step))

    elapsed = time.monotonic() - started
    logger.debug(f"Run '{scenario.name}': {stepper.n_steps} steps, "
                 f"{len(records)} samples in {elapsed:.2f}s")
    return TimeSeries.from_records(
        records,
        scenario_hash=scenario.descriptor_hash,
        metadata={'scenario': scenario.name, 'scheme': stepper.scheme.value,
                  'dt': stepper.dt, 'n_steps': stepper.n_steps},
    )
