"""
Invariant checks for lattice, walk and integrator parameters.

The pydantic schemas reject malformed input at construction time; these
validators re-check the physical invariants right before a computation,
so objects built with ``model_construct`` or mutated arrays are caught too.
"""

from typing import Any, List, Optional

import numpy as np

from .exceptions import ValidationError


MAX_REASONABLE_STEPS = 1e9


class ValidationResult:
    """Result of a validation operation"""

    def __init__(self, is_valid: bool = True, errors: Optional[List[str]] = None,
                 warnings: Optional[List[str]] = None, sanitized_data: Any = None):
        self.is_valid = is_valid
        self.errors = errors or []
        self.warnings = warnings or []
        self.sanitized_data = sanitized_data

    def add_error(self, message: str):
        self.errors.append(message)
        self.is_valid = False

    def add_warning(self, message: str):
        self.warnings.append(message)

    def has_errors(self) -> bool:
        return len(self.errors) > 0

    def has_warnings(self) -> bool:
        return len(self.warnings) > 0


class Validator:
    """Static validation methods for the physical invariants"""

    @staticmethod
    def validate_lattice(t1: float, t2: float, n_cells: int, rates: np.ndarray,
                         diagnostic_limits: bool = False) -> ValidationResult:
        """Check couplings, cell count and loss rates."""
        result = ValidationResult()

        if not np.isfinite(t1) or not np.isfinite(t2):
            result.add_error("Couplings must be finite")
        if t1 < 0 or (t1 == 0 and not diagnostic_limits):
            result.add_error("t1 must be positive (t1 = 0 needs diagnostic_limits)")
        if t2 <= 0:
            result.add_error("t2 must be positive")
        if n_cells < 1:
            result.add_error("Number of unit cells must be at least 1")
            return result

        rates = np.asarray(rates, dtype=float)
        if rates.shape != (n_cells,):
            result.add_error(f"Loss profile must yield {n_cells} rates, got shape {rates.shape}")
            return result
        if not np.all(np.isfinite(rates)):
            result.add_error("Loss rates must be finite")
        elif np.any(rates < 0):
            result.add_error("Loss rates must be nonnegative (gain is not supported)")
        elif np.any(rates == 0) and not diagnostic_limits:
            result.add_error("Loss rates must be positive (gamma_n = 0 needs diagnostic_limits)")

        result.sanitized_data = rates
        return result

    @staticmethod
    def validate_start_cell(start: int, n_cells: int) -> ValidationResult:
        result = ValidationResult()
        if not 1 <= start <= n_cells:
            result.add_error(f"Start cell must satisfy 1 <= S <= {n_cells}, got {start}")
        else:
            result.sanitized_data = int(start)
        return result

    @staticmethod
    def validate_integrator(dt: float, t_max: float, eps_stop: float) -> ValidationResult:
        result = ValidationResult()
        if not dt > 0:
            result.add_error("dt must be positive")
        if not t_max > 0:
            result.add_error("t_max must be positive")
        if not 0 < eps_stop < 1:
            result.add_error("eps_stop must lie strictly between 0 and 1")
        if result.is_valid and t_max / dt > MAX_REASONABLE_STEPS:
            result.add_warning(f"t_max/dt = {t_max / dt:.2e} steps; the walk may be slow")
        return result


def ensure_valid(result: ValidationResult, field: Optional[str] = None, value: Any = None) -> Any:
    """Raise ValidationError when a result carries errors; return the sanitized data otherwise."""
    if result.has_errors():
        raise ValidationError("; ".join(result.errors), field=field, value=value)
    return result.sanitized_data
