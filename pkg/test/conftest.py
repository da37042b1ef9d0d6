"""
Pytest Configuration Module

This module defines fixtures for the test suite, including:
1. An application instance configured for testing (cache in a temporary directory).
2. A click CliRunner for invoking the `spk` command group.
3. A standalone polynomial repository for persistence tests.
"""

import pytest
from click.testing import CliRunner

from spk_app import create_app
from spk_app.config import Config
from spk_app.repository.poly_repo import PolynomialRepository


class TestConfig(Config):
    """Test configuration: no cache unless a test asks for one, small guard, one worker."""
    CACHE_DIR = None
    RESOURCE_GUARD = 200_000
    JOBS = 1
    LOG_LEVEL = "WARNING"


@pytest.fixture
def app():
    """
    Creates a fresh application instance without a cache.
    """
    return create_app(TestConfig)


@pytest.fixture
def cached_app(tmp_path):
    """
    Creates an application whose polynomial cache lives under tmp_path.
    """
    return create_app(TestConfig, cache_dir=tmp_path / "cache")


@pytest.fixture
def catalog(app):
    return app.catalog


@pytest.fixture
def repository(tmp_path):
    return PolynomialRepository(tmp_path / "polys")


@pytest.fixture
def runner():
    """
    Provides a CliRunner; pass `obj=TestConfig` to invoke() to use the test configuration.
    """
    return CliRunner()


@pytest.fixture
def invoke(runner, monkeypatch):
    """
    Invokes the `spk` group with the test configuration and a clean environment.
    """
    from spk_app.cli import cli

    monkeypatch.delenv("SPK_CACHE_DIR", raising=False)

    def _invoke(*args: str, env=None):
        return runner.invoke(cli, list(args), obj=TestConfig, env=env)

    return _invoke
