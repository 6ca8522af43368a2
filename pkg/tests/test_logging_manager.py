"""
Tests for the structured logging system.

This module tests:
- JSON formatting
- Run ID tracking
- File handler output
- Function decorators
- Slow-call logging
"""

import json
import logging
import logging.handlers
import sys

import pytest

from config.settings import LoggingSettings
from core.logging_manager import (
    ContextualFormatter,
    JSONFormatter,
    LogContext,
    LoggingManager,
    RunIdFilter,
    clear_run_id,
    get_run_id,
    log_function_call,
    log_performance,
    set_run_id
)


def _record(msg="Test message", level=logging.INFO, exc_info=None):
    return logging.LogRecord(
        name="test_logger",
        level=level,
        pathname="test.py",
        lineno=10,
        msg=msg,
        args=(),
        exc_info=exc_info
    )


@pytest.fixture
def log_file(tmp_path):
    return tmp_path / "logs" / "edgeburst.log"


@pytest.fixture
def logging_manager(log_file):
    """Create a logging manager that writes JSON to a temporary file."""
    settings = LoggingSettings(
        level="DEBUG",
        file_enabled=True,
        file_path=str(log_file),
        console_enabled=False,
        json_format=True
    )
    manager = LoggingManager(settings)
    yield manager
    for handler in list(logging.getLogger().handlers):
        handler.close()
        logging.getLogger().removeHandler(handler)


def _read_entries(log_file):
    for handler in logging.getLogger().handlers:
        handler.flush()
    return [json.loads(line) for line in log_file.read_text(encoding="utf-8").splitlines() if line.strip()]


class TestJSONFormatter:
    """Test JSON formatter functionality."""

    def test_basic_formatting(self):
        record = _record()
        record.run_id = "run-123"

        log_data = json.loads(JSONFormatter().format(record))

        assert log_data["level"] == "INFO"
        assert log_data["logger"] == "test_logger"
        assert log_data["message"] == "Test message"
        assert log_data["run_id"] == "run-123"
        assert "timestamp" in log_data

    def test_exception_formatting(self):
        try:
            raise ValueError("Test exception")
        except ValueError:
            record = _record("Error occurred", logging.ERROR, exc_info=sys.exc_info())

        log_data = json.loads(JSONFormatter().format(record))

        assert log_data["exception"]["type"] == "ValueError"
        assert log_data["exception"]["message"] == "Test exception"
        assert "traceback" in log_data["exception"]

    def test_extra_fields(self):
        record = _record()
        record.n_cells = 60
        record.profile = "linear"

        log_data = json.loads(JSONFormatter(include_extra_fields=True).format(record))

        assert log_data["extra"]["n_cells"] == 60
        assert log_data["extra"]["profile"] == "linear"

    def test_unserializable_extra_becomes_text(self):
        record = _record()
        record.payload = object()

        log_data = json.loads(JSONFormatter().format(record))
        assert isinstance(log_data["extra"]["payload"], str)

    def test_extra_fields_disabled(self):
        record = _record()
        record.n_cells = 60

        log_data = json.loads(JSONFormatter(include_extra_fields=False).format(record))
        assert "extra" not in log_data


class TestContextualFormatter:
    """Test the human-readable console format."""

    def test_context_tags(self):
        record = _record("Running walk")
        record.run_id = "abc"
        record.command = "simulate"
        record.n_cells = 40

        text = ContextualFormatter().format(record)

        assert "[abc]" in text
        assert "Running walk" in text
        assert "command:simulate" in text
        assert "n_cells:40" in text


class TestRunId:
    """Test run ID propagation."""

    def test_filter_adds_run_id(self):
        record = _record()
        clear_run_id()
        assert RunIdFilter().filter(record) is True
        assert record.run_id == "none"

        set_run_id("run-42")
        RunIdFilter().filter(record)
        assert record.run_id == "run-42"
        clear_run_id()

    def test_generated_run_id(self):
        rid = set_run_id()
        assert len(rid) == 12
        assert get_run_id() == rid
        clear_run_id()
        assert get_run_id() is None


class TestLoggingManager:
    """Test logging manager functionality."""

    def test_get_logger(self, logging_manager):
        logger1 = logging_manager.get_logger("test_module")
        logger2 = logging_manager.get_logger("test_module")
        assert logger1 is logger2
        assert logger1.name == "test_module"

    def test_root_level(self, logging_manager):
        assert logging.getLogger().level == logging.DEBUG

    def test_log_with_context(self, logging_manager, log_file):
        logger = logging_manager.get_logger("edgeburst.test")
        context = LogContext(run_id="ctx-1", command="sweep", gamma=0.5, extra={"jobs": 4})

        logging_manager.log_with_context(logger, logging.INFO, "Sweep started", context)

        entries = _read_entries(log_file)
        entry = entries[-1]
        assert entry["message"] == "Sweep started"
        assert entry["run_id"] == "ctx-1"
        assert entry["extra"]["command"] == "sweep"
        assert entry["extra"]["gamma"] == 0.5
        assert entry["extra"]["jobs"] == 4
        clear_run_id()

    def test_console_disabled_means_file_only(self, logging_manager):
        LoggingManager(logging_manager.settings)
        handlers = logging.getLogger().handlers
        assert len(handlers) == 1
        assert isinstance(handlers[0], logging.handlers.RotatingFileHandler)


class TestDecorators:
    """Test function logging decorators."""

    def test_log_function_call(self, logging_manager, log_file):
        @log_function_call()
        def square(x):
            return x * x

        assert square(3) == 9
        messages = [entry["message"] for entry in _read_entries(log_file)]
        assert "Entering square" in messages
        assert "Exiting square" in messages

    def test_log_function_call_reraises(self, logging_manager, log_file):
        @log_function_call()
        def broken():
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            broken()
        assert any("Exception in broken" in entry["message"] for entry in _read_entries(log_file))

    def test_log_performance_slow_call(self, logging_manager, log_file):
        @log_performance(threshold_seconds=0.0)
        def quick():
            return 1

        quick()
        entry = _read_entries(log_file)[-1]
        assert entry["message"].startswith("Slow call: quick")
        assert entry["level"] == "WARNING"

    def test_log_performance_below_threshold(self, logging_manager, log_file):
        @log_performance(threshold_seconds=60.0)
        def quick():
            return 1

        before = len(_read_entries(log_file)) if log_file.exists() else 0
        assert quick() == 1
        after = len(_read_entries(log_file)) if log_file.exists() else 0
        assert after == before
