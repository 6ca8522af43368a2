"""
Configuration module for the edge-burst toolkit.

Centralized configuration management using Pydantic BaseSettings with
``EDGEBURST_*`` environment variables and flat key=value run files.
"""

from .settings import (
    Settings,
    get_settings,
    LoggingSettings,
    IntegratorSettings,
    SpectralSettings
)
from .validation import (
    validate_configuration,
    load_config_file,
    print_configuration_summary
)

__all__ = [
    # Main settings
    "Settings",
    "get_settings",

    # Component settings
    "LoggingSettings",
    "IntegratorSettings",
    "SpectralSettings",

    # Validation utilities
    "validate_configuration",
    "load_config_file",
    "print_configuration_summary"
]
