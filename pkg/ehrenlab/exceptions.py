"""
Exceptions raised by ehrenlab
"""

from typing import List, Optional


class EhrenlabError(Exception):
    """Base class for every ehrenlab error"""
    pass


class ConfigurationError(EhrenlabError):
    """Invalid runtime configuration (environment / .env)"""
    pass


class GridError(EhrenlabError, ValueError):
    """Invalid grid parameters or fields bound to the wrong grid"""
    pass


class StateError(EhrenlabError, ValueError):
    """Invalid initial state parameters"""
    pass


class ModelError(EhrenlabError, ValueError):
    """Invalid dynamics model or model/scheme combination"""
    pass


class PotentialError(EhrenlabError, ValueError):
    """Invalid potential parameters"""
    pass


class StabilityError(EhrenlabError, ValueError):
    """Time step above the explicit stability guard"""
    pass


class SamplingError(EhrenlabError, ValueError):
    """Time series unusable for finite differences"""
    pass


class ScenarioValidationError(EhrenlabError, ValueError):
    """Scenario document failed validation; carries every error found"""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        message = "Scenario validation failed:\n" + "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(message)

    def __reduce__(self):
        return type(self), (self.errors,)


class GuardViolation(EhrenlabError):
    """A run guard tripped; the run is aborted"""

    def __init__(self, diagnostic: str, step: Optional[int] = None):
        self.diagnostic = diagnostic
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"{diagnostic}{where}")

    def __reduce__(self):
        return type(self), (self.diagnostic, self.step)

    def at_step(self, step: int) -> "GuardViolation":
        """Return a copy of this violation tagged with the step index"""
        return type(self)(self.diagnostic, step)


class ClearanceViolation(GuardViolation):
    """Packet density reached the periodic seam"""
    pass


class BlowUpError(GuardViolation):
    """Non-finite or exploding amplitudes"""
    pass


class UnknownPresetError(EhrenlabError, KeyError):
    """Experiment preset name not registered"""

    def __init__(self, name: str, available: List[str]):
        self.name = name
        self.available = list(available)
        super().__init__(name)

    def __reduce__(self):
        return type(self), (self.name, self.available)

    def __str__(self):
        return f"Unknown preset '{self.name}'. Available presets: {', '.join(self.available)}"


class OutputError(EhrenlabError, OSError):
    """Series or report could not be written"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"cannot write {path}: {reason}")

    def __reduce__(self):
        return type(self), (self.path, self.reason)
