"""
Tests for settings, environment variables and run files.
"""

from pathlib import Path

import pytest

from config import (
    IntegratorSettings,
    LoggingSettings,
    Settings,
    SpectralSettings,
    load_config_file,
    print_configuration_summary,
    validate_configuration
)
from core.exceptions import ConfigurationError


class TestSettings:
    """Test defaults and environment overrides"""

    def test_defaults(self, clean_env):
        settings = Settings()
        assert settings.out == Path("results")
        assert settings.jobs == 1
        assert settings.integrator.dt is None
        assert settings.integrator.eps_stop == 1e-10
        assert settings.spectral.condition_bound == 1e8
        assert settings.logging.file_enabled is False

    def test_environment_overrides(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_OUT", "elsewhere")
        monkeypatch.setenv("EDGEBURST_JOBS", "3")
        monkeypatch.setenv("EDGEBURST_INTEGRATOR_T_MAX", "500")
        monkeypatch.setenv("EDGEBURST_SPECTRAL_CONDITION_BOUND", "1e6")
        monkeypatch.setenv("EDGEBURST_LOG_LEVEL", "debug")

        settings = Settings()
        assert settings.out == Path("elsewhere")
        assert settings.jobs == 3
        assert settings.integrator.t_max == 500
        assert settings.spectral.condition_bound == 1e6
        assert settings.logging.level == "DEBUG"

    def test_dotenv_file(self, clean_env):
        (clean_env / ".env").write_text("EDGEBURST_JOBS=2\n", encoding="utf-8")
        assert Settings().jobs == 2

    def test_section_validators(self):
        with pytest.raises(ValueError):
            LoggingSettings(level="LOUD")
        with pytest.raises(ValueError):
            IntegratorSettings(eps_stop=2.0)
        with pytest.raises(ValueError):
            SpectralSettings(max_dim=100)


class TestValidateConfiguration:
    """Test settings validation with helpful errors"""

    def test_valid(self, clean_env):
        assert isinstance(validate_configuration(), Settings)

    def test_bad_jobs(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_JOBS", "0")
        with pytest.raises(ConfigurationError):
            validate_configuration()

    def test_bad_integrator_hint(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_INTEGRATOR_EPS_STOP", "5")
        with pytest.raises(ConfigurationError) as excinfo:
            validate_configuration()
        assert "integrator -> eps_stop" in str(excinfo.value)
        assert "EDGEBURST_INTEGRATOR_" in str(excinfo.value)

    def test_every_bad_section_is_reported(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_LOG_LEVEL", "LOUD")
        monkeypatch.setenv("EDGEBURST_SPECTRAL_CONDITION_BOUND", "-1")
        with pytest.raises(ConfigurationError) as excinfo:
            validate_configuration()
        message = str(excinfo.value)
        assert "EDGEBURST_LOG_" in message
        assert "spectral -> condition_bound" in message
        assert "EDGEBURST_SPECTRAL_" in message
        assert len(excinfo.value.details["errors"]) == 2

    def test_out_is_a_file(self, clean_env, monkeypatch):
        (clean_env / "taken").write_text("", encoding="utf-8")
        monkeypatch.setenv("EDGEBURST_OUT", "taken")
        with pytest.raises(ConfigurationError):
            validate_configuration()


class TestLoadConfigFile:
    """Test flat key=value run files"""

    def test_normalizes_keys(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("T-MAX=100\nGamma=0.5\nprofile=linear\n", encoding="utf-8")
        assert load_config_file(path) == {"t_max": "100", "gamma": "0.5", "profile": "linear"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config_file(tmp_path / "absent.env")

    def test_unknown_keys(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("gamma=1\ncolour=blue\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as excinfo:
            load_config_file(path, allowed={"gamma"})
        assert excinfo.value.details["unknown_keys"] == ["colour"]

    def test_key_without_value(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("gamma\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_config_file(path)


def test_configuration_summary(clean_env, capsys):
    print_configuration_summary(Settings())
    err = capsys.readouterr().err
    assert "output directory" in err
    assert "condition bound" in err
