"""
Parameter validators shared by the models and the scenario parser
"""

import math
from numbers import Real
from typing import Any, Iterable, List, Optional

import numpy as np


class ParameterValidator:
    """Static checks returning booleans, used to build error lists"""

    @staticmethod
    def is_power_of_two(n: Any) -> bool:
        return isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n > 0 and (n & (n - 1)) == 0

    @staticmethod
    def is_real(value: Any) -> bool:
        return isinstance(value, (Real, np.floating, np.integer)) and not isinstance(value, bool)

    @staticmethod
    def is_finite(value: Any) -> bool:
        return ParameterValidator.is_real(value) and math.isfinite(float(value))

    @staticmethod
    def is_positive(value: Any) -> bool:
        return ParameterValidator.is_finite(value) and float(value) > 0

    @staticmethod
    def is_non_negative(value: Any) -> bool:
        return ParameterValidator.is_finite(value) and float(value) >= 0

    @staticmethod
    def is_integer(value: Any) -> bool:
        return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


def collect_finite(names_values: Iterable, prefix: str = '') -> List[str]:
    """Return an error for every (name, value) pair that is not a finite real"""
    errors = []
    for name, value in names_values:
        if not ParameterValidator.is_finite(value):
            errors.append(f"{prefix}{name} must be a finite number (got {value!r})")
    return errors


def raise_if(errors: List[str], exc_type: type, context: Optional[str] = None):
    """Raise exc_type with all errors joined, if any"""
    if errors:
        head = f"{context}: " if context else ''
        raise exc_type(head + '; '.join(errors))
