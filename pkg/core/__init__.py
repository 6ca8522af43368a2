"""
Core module for the edge-burst toolkit.

This module provides the foundational components shared by the numerics
and the command line: exceptions, logging, error handling and validation.
"""

from .exceptions import (
    ErrorSeverity,
    EdgeBurstError,
    ValidationError,
    ConfigurationError,
    DimensionMismatchError,
    NonConvergenceError,
    IllConditionedError,
    NonDecayingModeError,
    EigenNoConvergenceError,
    DegenerateDistributionError
)
from .validation import Validator, ValidationResult, ensure_valid

__all__ = [
    # Exceptions
    "ErrorSeverity",
    "EdgeBurstError",
    "ValidationError",
    "ConfigurationError",
    "DimensionMismatchError",
    "NonConvergenceError",
    "IllConditionedError",
    "NonDecayingModeError",
    "EigenNoConvergenceError",
    "DegenerateDistributionError",

    # Validation
    "Validator",
    "ValidationResult",
    "ensure_valid"
]
