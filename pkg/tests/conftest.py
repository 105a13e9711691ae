"""Shared fixtures for the extropy test suite."""

from collections.abc import Callable, Iterable
from pathlib import Path

import pytest

import extropy.config as config_module
from extropy.distributions import Beta, PowerLaw, Uniform
from extropy.models import QuadratureConfig


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch: pytest.MonkeyPatch) -> None:
    """Reload the bundled defaults for every test."""
    monkeypatch.setattr(config_module, "_config_instance", None)


@pytest.fixture
def unit_uniform() -> Uniform:
    """Standard uniform distribution on [0, 1]."""
    return Uniform(a=0.0, b=1.0)


@pytest.fixture
def power_law() -> PowerLaw:
    """Power-law distribution with lambda = 2 (cdf x^2)."""
    return PowerLaw(lam=2.0)


@pytest.fixture
def symmetric_beta() -> Beta:
    """Beta(2, 2), cdf 3x^2 - 2x^3."""
    return Beta(alpha=2.0, beta=2.0)


@pytest.fixture
def quadrature() -> QuadratureConfig:
    """Default quadrature tolerances."""
    return QuadratureConfig()


@pytest.fixture
def sample_file(tmp_path: Path) -> Callable[..., Path]:
    """Factory writing observations to a sample file, one per line."""

    def write(values: Iterable[float | str], header: str | None = None, name: str = "sample.txt") -> Path:
        lines = [header] if header else []
        lines += [str(v) for v in values]
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n")
        return path

    return write
