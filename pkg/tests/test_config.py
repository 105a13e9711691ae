"""Tests for YAML configuration loading and environment substitution."""

import logging
import os
from pathlib import Path

import pytest

from extropy.config import DEFAULT_CONFIG_PATH, Config, get_config, load_config


class TestConfig:
    """Test suite for the Config loader."""

    def test_bundled_defaults(self):
        """Test that the bundled defaults load without any environment."""
        config = Config()

        assert config.config_path == DEFAULT_CONFIG_PATH
        assert config.get("quadrature.rel_tol") == pytest.approx(1e-10)
        assert config.get("quadrature.max_depth") == 50
        assert config.get("montecarlo.seed") == 20230517

    def test_missing_key_returns_default(self):
        """Test dot-path lookups that miss."""
        config = Config()

        assert config.get("quadrature.missing", 7) == 7
        assert config.get("quadrature.rel_tol.deeper", "x") == "x"

    def test_unset_placeholder_counts_as_missing(self, monkeypatch):
        """Test that an unresolved ${VAR} falls back to the default."""
        monkeypatch.delenv("EXTROPY_THREADS", raising=False)
        config = Config()

        assert config.get("montecarlo.threads", "fallback") == "fallback"
        assert config.montecarlo_defaults().threads == (os.cpu_count() or 1)

    def test_environment_substitution(self, monkeypatch):
        """Test that EXTROPY_THREADS caps the worker count."""
        monkeypatch.setenv("EXTROPY_THREADS", "3")
        config = Config()

        assert config.montecarlo_defaults().threads == 3

    @pytest.mark.parametrize("raw", ["abc", "0", "-2"])
    def test_invalid_thread_cap_falls_back(self, monkeypatch, caplog, raw):
        """Test that a malformed EXTROPY_THREADS falls back to the CPU count."""
        monkeypatch.setenv("EXTROPY_THREADS", raw)
        config = Config()

        with caplog.at_level(logging.WARNING, logger="extropy.config"):
            threads = config.montecarlo_defaults().threads

        assert threads == (os.cpu_count() or 1)
        assert "Ignoring thread cap" in caplog.text

    def test_typed_views(self):
        """Test the quadrature and Monte Carlo views of the defaults."""
        config = Config()
        quadrature = config.quadrature_config()
        defaults = config.montecarlo_defaults()

        assert quadrature.abs_tol == pytest.approx(1e-12)
        assert quadrature.log_epsilon == pytest.approx(1e-12)
        assert defaults.alpha == pytest.approx(0.05)
        assert defaults.m == 1
        assert defaults.reps == 100_000

    def test_custom_file(self, tmp_path: Path):
        """Test loading a user-supplied YAML file."""
        path = tmp_path / "custom.yaml"
        path.write_text("quadrature:\n  max_depth: 20\nmontecarlo:\n  threads: 2\n")
        config = Config(path)

        assert config.quadrature_config().max_depth == 20
        assert config.quadrature_config().rel_tol == pytest.approx(1e-10)
        assert config.montecarlo_defaults().threads == 2

    def test_missing_file(self, tmp_path: Path):
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            Config(tmp_path / "absent.yaml")


class TestConfigSingleton:
    """Test suite for load_config / get_config."""

    def test_get_config_loads_defaults(self):
        """Test that get_config loads the bundled file on first use."""
        assert get_config().config_path == DEFAULT_CONFIG_PATH
        assert get_config() is get_config()

    def test_load_config_replaces_instance(self, tmp_path: Path):
        """Test that load_config swaps the process-wide instance."""
        path = tmp_path / "custom.yaml"
        path.write_text("montecarlo:\n  reps: 5000\n")
        loaded = load_config(path)

        assert get_config() is loaded
        assert get_config().montecarlo_defaults().reps == 5000
