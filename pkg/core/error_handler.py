"""
Error handler for command-line runs and sweep workers.

This module provides:
- Structured error logging with unique IDs and severity-mapped levels
- One-line command-line messages
- Exit status mapping
- Error statistics for sweep summaries
"""

import logging
import traceback
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from .exceptions import (
    EdgeBurstError, ErrorSeverity, ValidationError, ConfigurationError,
    NonConvergenceError, IllConditionedError, NonDecayingModeError,
    EigenNoConvergenceError, DegenerateDistributionError, DimensionMismatchError
)


EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2
EXIT_UNEXPECTED = 3

_NUMERICAL_ERRORS = (
    NonConvergenceError,
    IllConditionedError,
    NonDecayingModeError,
    EigenNoConvergenceError,
    DegenerateDistributionError,
)


def exit_code_for(error: Optional[BaseException]) -> int:
    """Map an exception (or None for success) to the process exit status."""
    if error is None:
        return EXIT_OK
    if isinstance(error, _NUMERICAL_ERRORS):
        return EXIT_NUMERICAL
    if isinstance(error, (ValidationError, ConfigurationError, DimensionMismatchError)):
        return EXIT_INPUT
    return EXIT_UNEXPECTED


class ErrorHandler:
    """
    Centralized error handler for commands and background sweep points.

    Provides:
    - Structured logging with unique error IDs
    - Short messages for the terminal
    - Per-code error counts and a bounded list of recent errors
    """

    def __init__(self, max_recent_errors: int = 100):
        self.logger = logging.getLogger(__name__)
        self.error_stats: Dict[str, int] = {}
        self.recent_errors: List[Dict[str, Any]] = []
        self.max_recent_errors = max_recent_errors

        self.error_templates = {
            ValidationError: "input error: {user_message}",
            ConfigurationError: "configuration error: {user_message}",
            NonConvergenceError: "not converged: {user_message} [error {error_id}]",
            EdgeBurstError: "error: {user_message} [error {error_id}]",
        }

    def handle_error(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None
    ) -> Dict[str, Any]:
        """
        Log an error raised by a command or a sweep point.

        Args:
            error: Exception that occurred
            context: Additional context information

        Returns:
            Dictionary with error information
        """
        return self._log_error(error, context or {})

    def format_message(self, error: Exception, error_id: Optional[str] = None) -> str:
        """Create the one-line terminal message for an error."""
        template = self.error_templates.get(type(error))

        if template is None:
            for exc_type, tmpl in self.error_templates.items():
                if isinstance(error, exc_type):
                    template = tmpl
                    break

        if template is None:
            template = "unexpected error: {user_message} [error {error_id}]"

        if isinstance(error, EdgeBurstError):
            user_message = error.user_message
            error_id = error_id or error.error_id
        else:
            user_message = str(error) or type(error).__name__

        return template.format(user_message=user_message, error_id=error_id or "-")

    def _log_error(self, error: Exception, context: Dict[str, Any]) -> Dict[str, Any]:
        if isinstance(error, EdgeBurstError):
            error_info = error.to_dict()
        else:
            error_info = {
                'error_id': self._generate_error_id(),
                'error_code': type(error).__name__,
                'message': str(error),
                'user_message': str(error),
                'details': {},
                'severity': ErrorSeverity.HIGH.value,
                'timestamp': datetime.now(timezone.utc).isoformat(),
                'type': type(error).__name__
            }

        error_info['context'] = context
        error_info['traceback'] = "".join(
            traceback.format_exception(type(error), error, error.__traceback__)
        )

        error_type = error_info['error_code']
        self.error_stats[error_type] = self.error_stats.get(error_type, 0) + 1

        self.recent_errors.append(error_info)
        if len(self.recent_errors) > self.max_recent_errors:
            self.recent_errors.pop(0)

        severity = ErrorSeverity(error_info['severity'])
        log_level = {
            ErrorSeverity.LOW: logging.INFO,
            ErrorSeverity.MEDIUM: logging.WARNING,
            ErrorSeverity.HIGH: logging.ERROR,
            ErrorSeverity.CRITICAL: logging.CRITICAL
        }.get(severity, logging.ERROR)

        self.logger.log(
            log_level,
            f"Error {error_info['error_id']}: {error_info['message']}",
            extra={
                'error_id': error_info['error_id'],
                'error_code': error_info['error_code'],
                'context': context,
                'severity': severity.value
            }
        )

        return error_info

    def _generate_error_id(self) -> str:
        return str(uuid.uuid4())[:8].upper()

    def get_error_statistics(self) -> Dict[str, Any]:
        """Error statistics for run summaries."""
        return {
            'total_errors': sum(self.error_stats.values()),
            'error_counts_by_type': self.error_stats.copy(),
            'recent_errors_count': len(self.recent_errors),
        }

    def get_recent_errors(self, limit: int = 10) -> List[Dict[str, Any]]:
        return self.recent_errors[-limit:] if self.recent_errors else []


# Global error handler instance
_error_handler: Optional[ErrorHandler] = None


def get_error_handler() -> ErrorHandler:
    """Get the global error handler instance."""
    global _error_handler
    if _error_handler is None:
        _error_handler = ErrorHandler()
    return _error_handler


def set_error_handler(error_handler: ErrorHandler) -> None:
    """Set the global error handler instance."""
    global _error_handler
    _error_handler = error_handler
