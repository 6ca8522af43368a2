"""
Core exceptions for the edge-burst simulation toolkit.
"""

import uuid
from datetime import datetime, timezone
from typing import Optional, Dict, Any
from enum import Enum


class ErrorSeverity(Enum):
    """Error severity levels for categorization and handling."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class EdgeBurstError(Exception):
    """
    Base exception for all simulation and analysis operations.

    Provides structured error handling with unique IDs, error codes,
    short command-line messages, and detailed context for debugging.
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM
    ):
        super().__init__(message)
        self.error_id = self._generate_error_id()
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        self.user_message = user_message or self._get_default_user_message()
        self.severity = severity
        self.timestamp = datetime.now(timezone.utc)

    def _generate_error_id(self) -> str:
        """Generate a unique error ID for tracking."""
        return str(uuid.uuid4())[:8].upper()

    def _get_default_user_message(self) -> str:
        """Get default message shown on the command line."""
        return "The computation could not be completed."

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for logging and serialization."""
        return {
            "error_id": self.error_id,
            "error_code": self.error_code,
            "message": str(self),
            "user_message": self.user_message,
            "details": self.details,
            "severity": self.severity.value,
            "timestamp": self.timestamp.isoformat(),
            "type": self.__class__.__name__
        }


# Input errors
class ValidationError(EdgeBurstError):
    """Raised when lattice, walk or integrator parameters are invalid."""

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None, **kwargs):
        details = kwargs.pop('details', {})
        if field:
            details['field'] = field
        if value is not None:
            details['invalid_value'] = str(value)

        super().__init__(
            message=message,
            error_code="VALIDATION_ERROR",
            details=details,
            user_message=f"Invalid input: {message}",
            severity=ErrorSeverity.LOW,
            **kwargs
        )


class ConfigurationError(EdgeBurstError):
    """Raised when settings or a config file are invalid."""

    def __init__(self, setting: str, reason: str, **kwargs):
        message = f"Configuration error for '{setting}': {reason}"
        details = kwargs.pop('details', {})
        details.update({"setting": setting, "reason": reason})

        super().__init__(
            message=message,
            error_code="CONFIGURATION_ERROR",
            details=details,
            user_message=f"Configuration problem in '{setting}': {reason}",
            severity=ErrorSeverity.CRITICAL,
            **kwargs
        )


class DimensionMismatchError(EdgeBurstError):
    """Raised when a Hamiltonian and a walker state disagree in size."""

    def __init__(self, expected: int, actual: int, what: str = "state", **kwargs):
        message = f"Dimension mismatch for {what}: expected {expected}, got {actual}"

        super().__init__(
            message=message,
            error_code="DIMENSION_MISMATCH",
            details={"expected": expected, "actual": actual, "what": what},
            user_message="Hamiltonian and walker state sizes do not agree.",
            severity=ErrorSeverity.HIGH,
            **kwargs
        )


# Numerical errors
class NonConvergenceError(EdgeBurstError):
    """Raised when the walk hits t_max before the remaining norm drops below eps_stop."""

    def __init__(self, residual: float, t: float, eps_stop: float, partial=None, **kwargs):
        message = (
            f"Walk did not decay below eps_stop={eps_stop:g} by t={t:g} "
            f"(remaining probability {residual:.3e})"
        )

        super().__init__(
            message=message,
            error_code="NON_CONVERGENCE",
            details={"residual": residual, "t": t, "eps_stop": eps_stop},
            user_message="Walk did not fully decay; raise t_max (--t-max) or check for a dark state.",
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        self.residual = residual
        self.t = t
        self.partial = partial


class IllConditionedError(EdgeBurstError):
    """Raised when the eigenvector matrix is too ill-conditioned for a spectral expansion."""

    def __init__(self, condition: float, bound: float, **kwargs):
        message = f"Eigenvector condition estimate {condition:.3e} exceeds bound {bound:.1e}"

        super().__init__(
            message=message,
            error_code="ILL_CONDITIONED",
            details={"condition": condition, "bound": bound},
            user_message="Spectral expansion is ill-conditioned; use the ode or lyapunov method.",
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        self.condition = condition


class NonDecayingModeError(EdgeBurstError):
    """Raised when an eigenmode the walker overlaps with does not decay."""

    def __init__(self, max_imag: float, floor: float, **kwargs):
        message = f"Non-decaying mode present: max Im E = {max_imag:.3e} >= -{floor:g}"

        super().__init__(
            message=message,
            error_code="NON_DECAYING_MODE",
            details={"max_imag": max_imag, "floor": floor},
            user_message="The walker overlaps a mode that never decays; decay probabilities are undefined.",
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        self.max_imag = max_imag


class EigenNoConvergenceError(EdgeBurstError):
    """Raised when the dense eigensolver fails or violates the residual contract."""

    def __init__(self, reason: str, residual: Optional[float] = None, **kwargs):
        message = f"Eigendecomposition failed: {reason}"
        details = {"reason": reason}
        if residual is not None:
            details["residual"] = residual

        super().__init__(
            message=message,
            error_code="EIGEN_NO_CONVERGENCE",
            details=details,
            user_message="The eigensolver did not converge for this Hamiltonian.",
            severity=ErrorSeverity.HIGH,
            **kwargs
        )


class DegenerateDistributionError(EdgeBurstError):
    """Raised when P_min vanishes and the edge-burst ratios are undefined."""

    def __init__(self, p_min: float, index: int, **kwargs):
        message = f"P_min = {p_min:.3e} at n={index}; edge-burst ratios are undefined"

        super().__init__(
            message=message,
            error_code="DEGENERATE_DISTRIBUTION",
            details={"p_min": p_min, "pmin_index": index},
            user_message="Decay distribution vanishes between the edge and the start cell.",
            severity=ErrorSeverity.LOW,
            **kwargs
        )
