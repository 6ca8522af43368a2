"""
Shared fixtures for the test suite.
"""

import os

import pytest

from config.settings import Settings, SpectralSettings
from tests.factories import make_params


@pytest.fixture
def params_factory():
    return make_params


@pytest.fixture
def spectral_settings():
    return SpectralSettings()


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Run inside an empty directory with no EDGEBURST_* variables set."""
    for key in list(os.environ):
        if key.upper().startswith("EDGEBURST_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def settings(clean_env):
    return Settings(out=clean_env / "results")
