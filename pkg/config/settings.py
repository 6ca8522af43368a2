"""
Centralized configuration management using Pydantic BaseSettings.

Every section reads its own ``EDGEBURST_*`` environment prefix and an
optional ``.env`` file in the working directory.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggingSettings(BaseSettings):
    """Logging configuration settings."""

    level: str = Field("INFO", description="Logging level")
    format: str = Field(
        "[{asctime}] [{levelname:<8}] {name}: {message}",
        description="Log message format"
    )
    date_format: str = Field("%Y-%m-%d %H:%M:%S", description="Log date format")

    # Console logging goes to stderr so stdout stays usable for summaries
    console_enabled: bool = Field(True, description="Enable console logging")

    # File logging
    file_enabled: bool = Field(False, description="Enable file logging")
    file_path: str = Field("logs/edgeburst.log", description="Log file path")
    file_max_bytes: int = Field(10_000_000, description="Maximum log file size in bytes")
    file_backup_count: int = Field(5, description="Number of backup log files to keep")

    # Structured logging
    json_format: bool = Field(False, description="Use JSON format for console logs")
    include_extra_fields: bool = Field(True, description="Include extra fields in logs")

    # Performance logging
    slow_call_threshold: float = Field(5.0, description="Seconds after which a call is logged as slow")

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {', '.join(valid_levels)}")
        return v.upper()

    model_config = SettingsConfigDict(env_prefix="EDGEBURST_LOG_")


class IntegratorSettings(BaseSettings):
    """Defaults for the RK4 walk integrator."""

    dt: Optional[float] = Field(
        None,
        description="Fixed time step; unset means 0.01/max(1, max gamma_n)"
    )
    t_max: float = Field(1.0e4, description="Hard time cap for a walk")
    eps_stop: float = Field(1.0e-10, description="Remaining-norm threshold that ends a walk")

    @field_validator('dt')
    @classmethod
    def validate_dt(cls, v):
        if v is not None and v <= 0:
            raise ValueError("Time step must be positive")
        return v

    @field_validator('t_max')
    @classmethod
    def validate_t_max(cls, v):
        if v <= 0:
            raise ValueError("t_max must be positive")
        return v

    @field_validator('eps_stop')
    @classmethod
    def validate_eps_stop(cls, v):
        if not 0 < v < 1:
            raise ValueError("eps_stop must lie strictly between 0 and 1")
        return v

    model_config = SettingsConfigDict(env_prefix="EDGEBURST_INTEGRATOR_")


class SpectralSettings(BaseSettings):
    """Tolerances for the dense eigensolver and the spectral decay expansion."""

    residual_tol: float = Field(1.0e-8, description="Relative eigenpair residual bound")
    condition_bound: float = Field(1.0e8, description="Largest eigenvector condition number accepted")
    max_dim: int = Field(2048, description="Largest Hamiltonian dimension accepted")
    decay_floor: float = Field(1.0e-12, description="Im E above -decay_floor counts as non-decaying")
    overlap_floor: float = Field(1.0e-12, description="Expansion weights below this are ignored")

    @field_validator('max_dim')
    @classmethod
    def validate_max_dim(cls, v):
        if v < 512:
            raise ValueError("max_dim must be at least 512")
        return v

    @field_validator('residual_tol', 'condition_bound', 'decay_floor', 'overlap_floor')
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("Tolerances must be positive")
        return v

    model_config = SettingsConfigDict(env_prefix="EDGEBURST_SPECTRAL_")


class Settings(BaseSettings):
    """Main application settings combining all configuration sections."""

    out: Path = Field(Path("results"), description="Default output directory (EDGEBURST_OUT)")
    jobs: int = Field(1, description="Parallel sweep workers (EDGEBURST_JOBS)")

    # Component settings
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    integrator: IntegratorSettings = Field(default_factory=IntegratorSettings)
    spectral: SpectralSettings = Field(default_factory=SpectralSettings)

    # Application metadata
    app_name: str = Field("edgeburst", description="Application name")
    app_version: str = Field("1.0.0", description="Application version")

    @field_validator('jobs')
    @classmethod
    def validate_jobs(cls, v):
        if v < 1:
            raise ValueError("jobs must be at least 1")
        return v

    model_config = SettingsConfigDict(
        env_prefix="EDGEBURST_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings with caching.

    Returns:
        Settings: The application settings instance

    Raises:
        ValueError: If configuration validation fails
    """
    try:
        return Settings()
    except Exception as e:
        error_msg = f"Configuration validation failed: {str(e)}"

        if "jobs" in str(e):
            error_msg += "\nHint: EDGEBURST_JOBS must be a positive integer"
        elif "eps_stop" in str(e):
            error_msg += "\nHint: EDGEBURST_INTEGRATOR_EPS_STOP must lie in (0, 1)"

        raise ValueError(error_msg) from e
