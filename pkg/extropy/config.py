"""Configuration management for the extropy toolkit.

Simple YAML-based configuration with environment variable substitution.
The library ships its own defaults in ``defaults.yaml``; environment
variables (``EXTROPY_THREADS``, ``EXTROPY_LOG_LEVEL``) fill the placeholders.
"""

import logging
import os
import re
from pathlib import Path
from string import Template
from typing import Any

import yaml

from extropy.models import MonteCarloDefaults, QuadratureConfig

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).with_name("defaults.yaml")

_PLACEHOLDER = re.compile(r"^\$\{[A-Za-z_][A-Za-z0-9_]*\}$")


class Config:
    """Simple configuration loader from YAML."""

    def __init__(self, config_path: str | Path = DEFAULT_CONFIG_PATH):
        """Initialize configuration loader.

        Args:
            config_path: Path to YAML configuration file
        """
        self.config_path = Path(config_path)
        self._config = self._load_config()

    def _load_config(self) -> dict[str, Any]:
        """Load and parse YAML config, substituting environment variables.

        Returns:
            Parsed configuration dictionary

        Raises:
            FileNotFoundError: If config file doesn't exist
            yaml.YAMLError: If config file is invalid
        """
        if not self.config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        with open(self.config_path) as f:
            content = f.read()

        # Substitute environment variables (${VAR_NAME} syntax)
        template = Template(content)
        substituted = template.safe_substitute(os.environ)

        return yaml.safe_load(substituted) or {}

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value using dot notation.

        Placeholders whose environment variable is not set are left as
        ``${VAR}`` by the substitution and are treated as missing here.

        Args:
            key_path: Dot-separated path (e.g., 'quadrature.rel_tol')
            default: Default value if key not found

        Returns:
            Configuration value or default

        Example:
            >>> config.get('quadrature.max_depth')
            50
            >>> config.get('montecarlo.threads', 4)
            4
        """
        keys = key_path.split(".")
        value: Any = self._config

        for key in keys:
            if isinstance(value, dict):
                value = value.get(key)
            else:
                return default

        if isinstance(value, str) and (_PLACEHOLDER.match(value) or not value.strip()):
            return default
        return value if value is not None else default

    @property
    def all(self) -> dict[str, Any]:
        """Get all configuration as dictionary."""
        return self._config

    def quadrature_config(self) -> QuadratureConfig:
        """Build the default quadrature settings from the ``quadrature`` section."""
        return QuadratureConfig(
            rel_tol=float(self.get("quadrature.rel_tol", 1e-10)),
            abs_tol=float(self.get("quadrature.abs_tol", 1e-12)),
            max_depth=int(self.get("quadrature.max_depth", 50)),
            log_epsilon=float(self.get("quadrature.log_epsilon", 1e-12)),
        )

    def montecarlo_defaults(self) -> MonteCarloDefaults:
        """Build the Monte Carlo defaults from the ``montecarlo`` section."""
        return MonteCarloDefaults(
            alpha=float(self.get("montecarlo.alpha", 0.05)),
            m=int(self.get("montecarlo.m", 1)),
            reps=int(self.get("montecarlo.reps", 100_000)),
            seed=int(self.get("montecarlo.seed", 20230517)),
            chunk_size=int(self.get("montecarlo.chunk_size", 2048)),
            threads=self._thread_cap(),
        )

    def _thread_cap(self) -> int:
        """Worker thread cap from ``montecarlo.threads``, else the CPU count."""
        fallback = os.cpu_count() or 1
        raw = self.get("montecarlo.threads")
        if raw is None:
            return fallback
        try:
            threads = int(raw)
        except (TypeError, ValueError):
            threads = 0
        if threads < 1:
            logger.warning(f"Ignoring thread cap {raw!r}: expected a positive integer, using {fallback}")
            return fallback
        return threads

    def __repr__(self) -> str:
        """String representation of config."""
        return f"Config(path={self.config_path})"


# Global config instance
_config_instance: Config | None = None


def load_config(config_path: str | Path | None = None) -> Config:
    """Load configuration from YAML file.

    Args:
        config_path: Path to configuration file (bundled defaults if omitted)

    Returns:
        Config instance
    """
    global _config_instance
    _config_instance = Config(config_path or DEFAULT_CONFIG_PATH)
    return _config_instance


def get_config() -> Config:
    """Get current configuration instance.

    Returns:
        Config instance (loads default if not already loaded)
    """
    if _config_instance is None:
        return load_config()
    return _config_instance
