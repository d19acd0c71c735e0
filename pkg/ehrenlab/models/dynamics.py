"""
Dynamics families: linear, density-functional and Doebner-Goldin
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import ModelError
from ehrenlab.utils.validation import collect_finite, raise_if


class ModelKind(enum.Enum):
    LINEAR = 'linear'
    DENSITY_FUNCTIONAL = 'density_functional'
    DOEBNER_GOLDIN = 'doebner_goldin'


class KernelShape(enum.Enum):
    GAUSSIAN = 'gaussian'        # exp(-x^2/2w^2) / sqrt(2 pi w^2)
    EXPONENTIAL = 'exponential'  # exp(-|x|/w) / 2w


@dataclass(frozen=True)
class Kernel:
    """Unit-mass even convolution kernel"""
    shape: KernelShape
    width: float

    def __post_init__(self):
        object.__setattr__(self, 'shape', KernelShape(self.shape))
        raise_if(collect_finite([('kernel_width', self.width)]), ModelError, 'kernel')
        if self.width <= 0:
            raise ModelError(f"kernel_width must be positive (got {self.width})")

    def transfer(self, k: np.ndarray) -> np.ndarray:
        """Fourier transform of the periodized kernel; real because the kernel is even"""
        if self.shape is KernelShape.GAUSSIAN:
            return np.exp(-0.5 * (k * self.width) ** 2)
        return 1.0 / (1.0 + (k * self.width) ** 2)

    def to_dict(self):
        return {'shape': self.shape.value, 'width': self.width}


def _check_mass(mass, tag):
    raise_if(collect_finite([('mass', mass)]), ModelError, tag)
    if mass <= 0:
        raise ModelError(f"{tag}: mass must be positive (got {mass})")


@dataclass(frozen=True)
class LinearModel:
    """i dpsi/dt = -(1/2m) psi'' + U psi"""
    mass: float = 1.0
    kind = ModelKind.LINEAR

    def __post_init__(self):
        _check_mass(self.mass, self.kind.value)

    @property
    def is_lagrangian(self) -> bool:
        return True

    def to_dict(self):
        return {'kind': self.kind.value, 'mass': self.mass}


@dataclass(frozen=True)
class DensityFunctionalModel:
    """Adds O(rho) psi with O = g rho^a, or g (K * rho) when a kernel is set"""
    mass: float = 1.0
    g: float = 1.0
    exponent: float = 1.0
    kernel: Optional[Kernel] = None
    kind = ModelKind.DENSITY_FUNCTIONAL

    def __post_init__(self):
        _check_mass(self.mass, self.kind.value)
        raise_if(collect_finite([('g', self.g), ('exponent', self.exponent)]),
                 ModelError, self.kind.value)
        if self.exponent < 1:
            raise ModelError(f"{self.kind.value}: exponent must be >= 1 (got {self.exponent})")
        if self.kernel is not None and not isinstance(self.kernel, Kernel):
            raise ModelError(f"{self.kind.value}: kernel must be a Kernel (got {self.kernel!r})")

    @property
    def is_lagrangian(self) -> bool:
        return True

    def to_dict(self):
        return {'kind': self.kind.value, 'mass': self.mass, 'g': self.g,
                'exponent': self.exponent,
                'kernel': self.kernel.to_dict() if self.kernel else None}


@dataclass(frozen=True)
class DoebnerGoldinModel:
    """Adds lambda * d/dx(j / rho) psi (non-diffusive Doebner-Goldin term)"""
    mass: float = 1.0
    coupling: float = 0.0
    epsilon: float = BaseConfig.NODE_EPSILON
    kind = ModelKind.DOEBNER_GOLDIN

    def __post_init__(self):
        _check_mass(self.mass, self.kind.value)
        raise_if(collect_finite([('lambda', self.coupling), ('epsilon', self.epsilon)]),
                 ModelError, self.kind.value)
        if self.epsilon < 0:
            raise ModelError(f"{self.kind.value}: epsilon must be >= 0 (got {self.epsilon})")

    @property
    def is_lagrangian(self) -> bool:
        return False

    def to_dict(self):
        return {'kind': self.kind.value, 'mass': self.mass,
                'lambda': self.coupling, 'epsilon': self.epsilon}


MODEL_TYPES = (LinearModel, DensityFunctionalModel, DoebnerGoldinModel)
