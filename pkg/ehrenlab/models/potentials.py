"""
External potential types
"""

import enum
from dataclasses import dataclass, field

from ehrenlab.exceptions import PotentialError
from ehrenlab.utils.validation import collect_finite, raise_if


class PotentialKind(enum.Enum):
    ZERO = 'zero'
    HARMONIC = 'harmonic'
    UNIFORM = 'uniform'
    GAUSSIAN_BARRIER = 'gaussian_barrier'
    DENSITY_COUPLED = 'density_coupled'


class GradientMode(enum.Enum):
    FULL = 'full'        # total d/dx, including the rho' term
    PARTIAL = 'partial'  # d/dx at fixed rho


@dataclass(frozen=True)
class ZeroPotential:
    kind = PotentialKind.ZERO

    @property
    def depends_on_density(self) -> bool:
        return False

    def to_dict(self):
        return {'kind': self.kind.value}


@dataclass(frozen=True)
class HarmonicPotential:
    """1/2 m omega^2 d^2, d the minimum-image distance to center"""
    omega: float
    center: float
    kind = PotentialKind.HARMONIC

    def __post_init__(self):
        raise_if(collect_finite([('omega', self.omega), ('center', self.center)]),
                 PotentialError, 'harmonic')
        if self.omega <= 0:
            raise PotentialError(f"harmonic: omega must be positive (got {self.omega})")

    @property
    def depends_on_density(self) -> bool:
        return False

    def to_dict(self):
        return {'kind': self.kind.value, 'omega': self.omega, 'center': self.center}


@dataclass(frozen=True)
class UniformPotential:
    """Constant force f0: U = -f0 x"""
    f0: float
    kind = PotentialKind.UNIFORM

    def __post_init__(self):
        raise_if(collect_finite([('f0', self.f0)]), PotentialError, 'uniform')

    @property
    def depends_on_density(self) -> bool:
        return False

    def to_dict(self):
        return {'kind': self.kind.value, 'f0': self.f0}


@dataclass(frozen=True)
class GaussianBarrier:
    """height * exp(-d^2 / (2 width^2)), d the minimum-image distance to center"""
    height: float
    width: float
    center: float
    kind = PotentialKind.GAUSSIAN_BARRIER

    def __post_init__(self):
        raise_if(collect_finite([('height', self.height), ('width', self.width),
                                 ('center', self.center)]),
                 PotentialError, 'gaussian_barrier')
        if self.width <= 0:
            raise PotentialError(f"gaussian_barrier: width must be positive (got {self.width})")

    @property
    def depends_on_density(self) -> bool:
        return False

    def to_dict(self):
        return {'kind': self.kind.value, 'height': self.height,
                'width': self.width, 'center': self.center}


@dataclass(frozen=True)
class DensityCoupledPotential:
    """U(rho, x) = U_base(x) * (1 + eta * rho(x))"""
    base: object
    eta: float
    kind = PotentialKind.DENSITY_COUPLED

    def __post_init__(self):
        raise_if(collect_finite([('eta', self.eta)]), PotentialError, 'density_coupled')
        if isinstance(self.base, DensityCoupledPotential):
            raise PotentialError("density_coupled: base must be a closed-form potential")
        if not isinstance(self.base, CLOSED_FORM):
            raise PotentialError(f"density_coupled: unsupported base {self.base!r}")

    @property
    def depends_on_density(self) -> bool:
        return True

    def to_dict(self):
        return {'kind': self.kind.value, 'eta': self.eta, 'base': self.base.to_dict()}


CLOSED_FORM = (ZeroPotential, HarmonicPotential, UniformPotential, GaussianBarrier)
POTENTIAL_TYPES = CLOSED_FORM + (DensityCoupledPotential,)
