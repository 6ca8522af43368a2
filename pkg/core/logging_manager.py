"""
Structured logging system with JSON format, run IDs, and decorators.

This module provides:
- JSON structured logging
- Size-based log rotation
- Contextual logging with a per-invocation run ID
- Function entry/exit and slow-call logging decorators
"""

import json
import logging
import logging.handlers
import sys
import time
import uuid
from contextvars import ContextVar
from dataclasses import dataclass, asdict
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from config.settings import LoggingSettings


# Context variable for run ID tracking
run_id: ContextVar[Optional[str]] = ContextVar('run_id', default=None)

_RESERVED_ATTRS = {
    'name', 'msg', 'args', 'levelname', 'levelno', 'pathname',
    'filename', 'module', 'lineno', 'funcName', 'created',
    'msecs', 'relativeCreated', 'thread', 'threadName',
    'processName', 'process', 'getMessage', 'exc_info',
    'exc_text', 'stack_info', 'run_id', 'taskName', 'message', 'asctime'
}

_CONTEXT_TAGS = ('command', 'profile', 'n_cells', 'gamma', 'bc', 'operation')


@dataclass
class LogContext:
    """Context information for structured logging."""
    run_id: Optional[str] = None
    command: Optional[str] = None
    profile: Optional[str] = None
    n_cells: Optional[int] = None
    gamma: Optional[float] = None
    bc: Optional[str] = None
    operation: Optional[str] = None
    extra: Optional[Dict[str, Any]] = None


class RunIdFilter(logging.Filter):
    """Filter to add the run ID to log records."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = run_id.get() or 'none'
        return True


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def __init__(self, include_extra_fields: bool = True):
        super().__init__()
        self.include_extra_fields = include_extra_fields

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
            'run_id': getattr(record, 'run_id', 'none')
        }

        if record.exc_info:
            log_entry['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': self.formatException(record.exc_info)
            }

        if self.include_extra_fields:
            extra_fields = {}
            for key, value in record.__dict__.items():
                if key in _RESERVED_ATTRS:
                    continue
                try:
                    json.dumps(value)
                    extra_fields[key] = value
                except (TypeError, ValueError):
                    extra_fields[key] = str(value)

            if extra_fields:
                log_entry['extra'] = extra_fields

        return json.dumps(log_entry, ensure_ascii=False)


class ContextualFormatter(logging.Formatter):
    """Human-readable formatter with contextual information."""

    def __init__(self, date_format: str = "%Y-%m-%d %H:%M:%S"):
        super().__init__()
        self.date_format = date_format

    def format(self, record: logging.LogRecord) -> str:
        run_id_str = getattr(record, 'run_id', 'none')

        base_format = "[{asctime}] [{levelname:<8}] [{run_id}] {name} - {message}"

        extra_context = []
        for tag in _CONTEXT_TAGS:
            value = getattr(record, tag, None)
            if value is not None:
                extra_context.append(f"{tag}:{value}")

        if extra_context:
            base_format += " [" + " ".join(extra_context) + "]"

        formatter = logging.Formatter(
            base_format.replace("{run_id}", run_id_str),
            datefmt=self.date_format,
            style="{"
        )
        return formatter.format(record)


class LoggingManager:
    """Centralized logging manager with structured logging capabilities."""

    def __init__(self, settings: LoggingSettings):
        self.settings = settings
        self._setup_root_logger()

    def _setup_root_logger(self) -> None:
        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, self.settings.level))
        root_logger.handlers.clear()

        run_filter = RunIdFilter()

        if self.settings.console_enabled:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.addFilter(run_filter)

            if self.settings.json_format:
                console_handler.setFormatter(JSONFormatter(self.settings.include_extra_fields))
            else:
                console_handler.setFormatter(ContextualFormatter(self.settings.date_format))

            root_logger.addHandler(console_handler)

        if self.settings.file_enabled:
            self._setup_file_handler(root_logger, run_filter)

    def _setup_file_handler(self, logger: logging.Logger, run_filter: RunIdFilter) -> None:
        log_path = Path(self.settings.file_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            filename=self.settings.file_path,
            maxBytes=self.settings.file_max_bytes,
            backupCount=self.settings.file_backup_count,
            encoding='utf-8'
        )
        file_handler.addFilter(run_filter)

        # File logs are always JSON for later parsing
        file_handler.setFormatter(JSONFormatter(self.settings.include_extra_fields))
        logger.addHandler(file_handler)

    def get_logger(self, name: str) -> logging.Logger:
        return logging.getLogger(name)

    def log_with_context(
        self,
        logger: logging.Logger,
        level: int,
        message: str,
        context: Optional[LogContext] = None,
        **kwargs
    ) -> None:
        """Log a message with contextual information."""
        extra = {}

        if context:
            if context.run_id:
                run_id.set(context.run_id)

            for field, value in asdict(context).items():
                if value is not None and field not in ('extra', 'run_id'):
                    extra[field] = value

            if context.extra:
                extra.update(context.extra)

        extra.update(kwargs)
        logger.log(level, message, extra=extra)


# Global logging manager instance
_logging_manager: Optional[LoggingManager] = None


def get_logging_manager(settings: Optional[LoggingSettings] = None) -> LoggingManager:
    """Get the global logging manager, configuring it on first use."""
    global _logging_manager

    if _logging_manager is None or settings is not None:
        if settings is None:
            from config.settings import get_settings
            settings = get_settings().logging

        _logging_manager = LoggingManager(settings)

    return _logging_manager


def get_logger(name: str) -> logging.Logger:
    """Get a logger with the specified name."""
    return get_logging_manager().get_logger(name)


def set_run_id(rid: Optional[str] = None) -> str:
    """Set the run ID for the current context."""
    if rid is None:
        rid = uuid.uuid4().hex[:12]
    run_id.set(rid)
    return rid


def get_run_id() -> Optional[str]:
    """Get the current run ID."""
    return run_id.get()


def clear_run_id() -> None:
    """Clear the current run ID."""
    run_id.set(None)


def log_function_call(
    logger: Optional[logging.Logger] = None,
    level: int = logging.DEBUG,
    include_duration: bool = True
) -> Callable:
    """
    Decorator for function entry/exit logging.

    Args:
        logger: Logger to use (defaults to the function's module logger)
        level: Log level to use
        include_duration: Whether to log execution duration
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            log = logger or logging.getLogger(func.__module__)
            context_data = {'function_name': func.__name__}

            log.log(level, f"Entering {func.__name__}", extra=context_data)
            start_time = time.perf_counter()

            try:
                result = func(*args, **kwargs)
            except Exception as e:
                error_context = dict(context_data, error=str(e), error_type=type(e).__name__)
                if include_duration:
                    error_context['duration'] = time.perf_counter() - start_time
                log.log(level, f"Exception in {func.__name__}: {e}", extra=error_context)
                raise

            exit_context = dict(context_data)
            if include_duration:
                exit_context['duration'] = time.perf_counter() - start_time
            log.log(level, f"Exiting {func.__name__}", extra=exit_context)
            return result

        return wrapper

    return decorator


def log_performance(
    logger: Optional[logging.Logger] = None,
    threshold_seconds: Optional[float] = None,
    level: int = logging.WARNING
) -> Callable:
    """
    Decorator to log slow calls.

    Args:
        logger: Logger to use (defaults to the function's module logger)
        threshold_seconds: Threshold that triggers the record; None reads
            ``slow_call_threshold`` from the active logging settings
        level: Log level for the record
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            duration = time.perf_counter() - start_time

            threshold = threshold_seconds
            if threshold is None:
                threshold = (
                    _logging_manager.settings.slow_call_threshold
                    if _logging_manager is not None else 5.0
                )

            if duration > threshold:
                log = logger or logging.getLogger(func.__module__)
                log.log(
                    level,
                    f"Slow call: {func.__name__} took {duration:.3f}s",
                    extra={
                        'function_name': func.__name__,
                        'duration': duration,
                        'threshold': threshold
                    }
                )

            return result

        return wrapper

    return decorator
