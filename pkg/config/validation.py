"""
Configuration validation utilities.

This module validates the settings tree, reads flat key=value run files
and prints a short configuration summary.
"""

import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError
from tabulate import tabulate

from core.exceptions import ConfigurationError
from .settings import IntegratorSettings, LoggingSettings, Settings, SpectralSettings


_SECTIONS = (
    ("logging", LoggingSettings, "EDGEBURST_LOG_"),
    ("integrator", IntegratorSettings, "EDGEBURST_INTEGRATOR_"),
    ("spectral", SpectralSettings, "EDGEBURST_SPECTRAL_"),
)


def _collect_errors(error: ValidationError, section: Optional[str], prefix: str) -> List[str]:
    messages = []
    for item in error.errors():
        loc = [section] if section else []
        loc.extend(str(part) for part in item['loc'])
        messages.append(f"{' -> '.join(loc)}: {item['msg']} (check {prefix}* variables)")
    return messages


def validate_configuration() -> Settings:
    """
    Validate the application configuration and provide helpful error messages.

    Each section is loaded on its own first, so a bad section variable is
    reported as ``section -> field`` together with its environment prefix.

    Returns:
        Settings: The validated settings instance

    Raises:
        ConfigurationError: If configuration validation fails
    """
    error_messages: List[str] = []
    raw_errors: List[str] = []

    for section, model, prefix in _SECTIONS:
        try:
            model()
        except ValidationError as e:
            error_messages.extend(_collect_errors(e, section, prefix))
            raw_errors.extend(str(err.get('msg')) for err in e.errors())

    if not error_messages:
        try:
            settings = Settings()
        except ValidationError as e:
            error_messages.extend(_collect_errors(e, None, "EDGEBURST_"))
            raw_errors.extend(str(err.get('msg')) for err in e.errors())

    if error_messages:
        raise ConfigurationError(
            "settings",
            "; ".join(error_messages),
            details={"errors": raw_errors}
        )

    _validate_file_paths(settings)
    return settings


def _validate_file_paths(settings: Settings) -> None:
    """Validate that the log directory can be created when file logging is on."""
    if settings.logging.file_enabled:
        Path(settings.logging.file_path).parent.mkdir(parents=True, exist_ok=True)
    if settings.out.exists() and not settings.out.is_dir():
        raise ConfigurationError("out", f"{settings.out} exists and is not a directory")


def load_config_file(path: Path, allowed: Optional[Iterable[str]] = None) -> Dict[str, str]:
    """
    Read a flat key=value run file.

    Keys are lower-cased and dashes become underscores, so ``t-max`` and
    ``T_MAX`` both map to ``t_max``. Values stay strings; typing happens in
    the pydantic models that consume them.

    Raises:
        ConfigurationError: If the file is missing or holds unknown keys
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError("config", f"file not found: {path}")

    raw = dotenv_values(path)
    values: Dict[str, str] = {}
    for key, value in raw.items():
        if value is None:
            raise ConfigurationError("config", f"key '{key}' has no value")
        values[key.strip().lower().replace("-", "_")] = value.strip()

    if allowed is not None:
        allowed = set(allowed)
        unknown = sorted(set(values) - allowed)
        if unknown:
            raise ConfigurationError(
                "config",
                f"unknown keys in {path.name}: {', '.join(unknown)}",
                details={"unknown_keys": unknown}
            )

    return values


def print_configuration_summary(settings: Settings, stream=None) -> None:
    """Print a summary of the current configuration."""
    stream = stream or sys.stderr
    rows = [
        ("version", settings.app_version),
        ("output directory", str(settings.out)),
        ("sweep jobs", settings.jobs),
        ("dt", settings.integrator.dt if settings.integrator.dt is not None else "0.01/max(1, max gamma_n)"),
        ("t_max", settings.integrator.t_max),
        ("eps_stop", settings.integrator.eps_stop),
        ("eigen residual tol", settings.spectral.residual_tol),
        ("condition bound", settings.spectral.condition_bound),
        ("log level", settings.logging.level),
        ("file logging", "enabled" if settings.logging.file_enabled else "disabled"),
        ("json logs", "enabled" if settings.logging.json_format else "disabled"),
    ]
    print(tabulate(rows, headers=["setting", "value"], tablefmt="simple"), file=stream)
