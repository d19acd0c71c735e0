"""
Scenario: one fully specified, deterministic experiment run
"""

import enum
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict

from ehrenlab.exceptions import ModelError, StateError
from ehrenlab.models.grid import Grid
from ehrenlab.utils.validation import ParameterValidator


class Scheme(enum.Enum):
    RK4 = 'rk4'
    SPLIT_STEP = 'split_step'


class StateKind(enum.Enum):
    GAUSSIAN = 'gaussian'
    PLANE_WAVE = 'plane_wave'


@dataclass(frozen=True)
class StepperConfig:
    """Fixed-step propagation plan"""
    dt: float
    t_final: float
    scheme: Scheme = Scheme.RK4
    sample_every: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'scheme', Scheme(self.scheme))
        errors = []
        if not ParameterValidator.is_positive(self.dt):
            errors.append(f"dt must be > 0 (got {self.dt!r})")
        if not ParameterValidator.is_non_negative(self.t_final):
            errors.append(f"t_final must be >= 0 (got {self.t_final!r})")
        elif ParameterValidator.is_positive(self.dt) and 0 < self.t_final < self.dt:
            errors.append(f"t_final must be 0 or >= dt (got t_final={self.t_final}, dt={self.dt})")
        if not ParameterValidator.is_integer(self.sample_every) or self.sample_every < 1:
            errors.append(f"sample_every must be an integer >= 1 (got {self.sample_every!r})")
        if errors:
            raise ModelError('; '.join(errors))

    @property
    def n_steps(self) -> int:
        """Whole steps that fit in t_final"""
        # tolerate t_final/dt landing a hair below an integer
        return int(math.floor(self.t_final / self.dt + 1e-9))

    @property
    def sample_interval(self) -> float:
        return self.dt * self.sample_every

    def refined(self, factor: int) -> 'StepperConfig':
        """Same horizon and sample times with dt divided by factor"""
        return StepperConfig(self.dt / factor, self.t_final, self.scheme, self.sample_every * factor)

    def with_scheme(self, scheme: Scheme) -> 'StepperConfig':
        return StepperConfig(self.dt, self.t_final, scheme, self.sample_every)

    def to_dict(self):
        return {'scheme': self.scheme.value, 'dt': self.dt,
                't_final': self.t_final, 'sample_every': self.sample_every}


@dataclass(frozen=True)
class StateSpec:
    """Initial-state constructor name and its parameters"""
    kind: StateKind
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', StateKind(self.kind))
        except ValueError:
            raise StateError(f"unknown state kind {self.kind!r}")
        object.__setattr__(self, 'params', dict(self.params))

    def to_dict(self):
        return {'kind': self.kind.value, **{k: self.params[k] for k in sorted(self.params)}}


@dataclass(frozen=True)
class OutputSpec:
    csv: str = 'series.csv'

    def to_dict(self):
        return {'csv': self.csv}


@dataclass(frozen=True)
class Scenario:
    """Grid, initial state, dynamics, potential and stepper of one run"""
    grid: Grid
    state: StateSpec
    model: Any
    potential: Any
    stepper: StepperConfig
    output: OutputSpec = field(default_factory=OutputSpec)
    name: str = 'scenario'

    def __post_init__(self):
        if not self.model.is_lagrangian and self.stepper.scheme is Scheme.SPLIT_STEP:
            raise ModelError(f"{self.model.kind.value} dynamics cannot be paired with the split_step scheme")

    def to_dict(self):
        return {
            'name': self.name,
            'grid': self.grid.to_dict(),
            'state': self.state.to_dict(),
            'model': self.model.to_dict(),
            'potential': self.potential.to_dict(),
            'stepper': self.stepper.to_dict(),
            'output': self.output.to_dict(),
        }

    @property
    def descriptor_hash(self) -> str:
        """sha256 of the canonical JSON descriptor (output paths excluded)"""
        descriptor = self.to_dict()
        descriptor.pop('output')
        canonical = json.dumps(descriptor, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def replace(self, **changes) -> 'Scenario':
        values = {
            'grid': self.grid, 'state': self.state, 'model': self.model,
            'potential': self.potential, 'stepper': self.stepper,
            'output': self.output, 'name': self.name,
        }
        values.update(changes)
        return Scenario(**values)
