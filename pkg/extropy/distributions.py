"""
Catalog of non-negative distributions with bounded support.

Three families are available: ``Uniform(a, b)``, ``PowerLaw(lam)`` with
density ``lam * x**(lam - 1)`` on [0, 1], and ``Beta(alpha, beta)``.
Unbounded families are not part of the catalog because every cumulative
past measure diverges for them.
"""

import math
from abc import ABC, abstractmethod
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy import special

from extropy.exceptions import DistributionError, DomainError, UnsupportedMeasureError
from extropy.models import MeasureKind, MeasureTag
from extropy.streams import RandomStream

ArrayLike = float | np.ndarray


def _fmt(value: float) -> str:
    return f"{value:.15g}"


def _finish(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values) if scalar else values


class BoundedDistribution(BaseModel, ABC):
    """A parametric distribution on a bounded interval of [0, inf)."""

    model_config = ConfigDict(frozen=True)

    # ------------------------------------------------------------------
    # Family specific pieces
    # ------------------------------------------------------------------

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]:
        """Support interval ``(lo, hi)``."""

    @property
    @abstractmethod
    def spec(self) -> str:
        """Canonical text form, e.g. ``uniform:0,1``."""

    @abstractmethod
    def _cdf_inside(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _pdf_inside(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _quantile(self, u: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _draw(self, generator: np.random.Generator, count: int) -> np.ndarray: ...

    @abstractmethod
    def raw_moment(self, k: float) -> float:
        """E[X^k] for k >= 0."""

    def _closed_form(self, kind: MeasureKind) -> float:
        raise UnsupportedMeasureError(f"No closed form for {kind.label} of {self.spec}")

    # ------------------------------------------------------------------
    # Public interface
    # ------------------------------------------------------------------

    @property
    def lo(self) -> float:
        return self.support[0]

    @property
    def hi(self) -> float:
        return self.support[1]

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """P(X <= x); 0 below the support and 1 above it."""
        arr = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = self._cdf_inside(np.clip(arr, lo, hi))
        values = np.where(arr < lo, 0.0, np.where(arr >= hi, 1.0, inside))
        return _finish(np.clip(values, 0.0, 1.0), arr.ndim == 0)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density; 0 outside the support."""
        arr = np.asarray(x, dtype=float)
        lo, hi = self.support
        with np.errstate(divide="ignore", invalid="ignore"):
            inside = self._pdf_inside(np.clip(arr, lo, hi))
        values = np.where((arr < lo) | (arr > hi), 0.0, inside)
        return _finish(values, arr.ndim == 0)

    def quantile(self, u: ArrayLike) -> ArrayLike:
        """
        Smallest x with cdf(x) >= u.

        Raises:
            DomainError: If any u lies outside [0, 1]
        """
        arr = np.asarray(u, dtype=float)
        if np.any(~np.isfinite(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
            raise DomainError(f"quantile level must lie in [0, 1], got {u}")
        lo, hi = self.support
        values = np.clip(self._quantile(arr), lo, hi)
        return _finish(values, arr.ndim == 0)

    def sample(self, stream: RandomStream, count: int) -> np.ndarray:
        """
        Draw ``count`` values using the caller's stream.

        Args:
            stream: Stream to consume; only its generator state changes
            count: Number of draws (>= 1)

        Returns:
            Array of draws inside the support
        """
        if count < 1:
            raise DomainError(f"count must be positive, got {count}")
        lo, hi = self.support
        return np.clip(self._draw(stream.generator, count), lo, hi)

    def mean(self) -> float:
        """E[X]."""
        return self.raw_moment(1)

    def closed_form(self, kind: MeasureKind) -> float:
        """Published closed form of ``kind``; see ``closed_form_measure``."""
        return self._closed_form(kind)

    def __str__(self) -> str:
        return self.spec


# ============================================================================
# Families
# ============================================================================


class Uniform(BoundedDistribution):
    """Uniform distribution on [a, b] with 0 <= a < b."""

    a: float = Field(..., ge=0.0, allow_inf_nan=False)
    b: float = Field(..., allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_order(self) -> "Uniform":
        if not self.a < self.b:
            raise ValueError(f"Uniform requires a < b, got a={self.a}, b={self.b}")
        return self

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def spec(self) -> str:
        return f"uniform:{_fmt(self.a)},{_fmt(self.b)}"

    def _cdf_inside(self, x: np.ndarray) -> np.ndarray:
        return (x - self.a) / (self.b - self.a)

    def _pdf_inside(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(x, 1.0 / (self.b - self.a))

    def _quantile(self, u: np.ndarray) -> np.ndarray:
        return self.a + u * (self.b - self.a)

    def _draw(self, generator: np.random.Generator, count: int) -> np.ndarray:
        return generator.uniform(self.a, self.b, count)

    def raw_moment(self, k: float) -> float:
        a, b = self.a, self.b
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))

    def weight_effect(self) -> int:
        """
        Sign of WCPJ(m=1) - CPJ predicted by comparing (E[X] + b) / 2 with 1.

        Returns:
            -1 when the weighted measure is smaller, +1 when larger, 0 when equal
        """
        factor = (self.mean() + self.b) / 2.0
        if math.isclose(factor, 1.0, rel_tol=1e-12, abs_tol=1e-15):
            return 0
        return -1 if factor > 1.0 else 1

    def _closed_form(self, kind: MeasureKind) -> float:
        a, b, m = self.a, self.b, kind.m
        width = b - a
        match kind.tag:
            case MeasureTag.EXTROPY:
                return -1.0 / (2.0 * width)
            case MeasureTag.CRJ | MeasureTag.CPJ:
                return -width / 6.0
            case MeasureTag.WCRJ:
                return (a - b) / 24.0 * (3.0 * a + b)
            case MeasureTag.WCPJ if m == 0:
                return -width / 6.0
            case MeasureTag.WCPJ:
                top = b ** (m + 1)
                numerator = (
                    top * width**2 * m**2
                    + top * width * (3.0 * b - 5.0 * a) * m
                    + 2.0 * top * (b**2 - 3.0 * a * b + 3.0 * a**2)
                    - 2.0 * a ** (m + 3)
                )
                return -numerator / (2.0 * width**2 * (m + 1) * (m + 2) * (m + 3))
            case MeasureTag.ORDER_MAX if a == 0.0:
                return -(b ** (m + 1)) / (2.0 * (2 * kind.n + m + 1))
            case MeasureTag.PHI_P if a == 0.0 and b == 1.0:
                assert kind.p is not None
                return -(kind.p ** (m + 3)) / (2.0 * (m + 3))
        return super()._closed_form(kind)


class PowerLaw(BoundedDistribution):
    """Power-law distribution with density lam * x**(lam - 1) on [0, 1], lam > 1."""

    lam: float = Field(..., gt=1.0, allow_inf_nan=False, description="Shape lambda")

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0)

    @property
    def spec(self) -> str:
        return f"powerlaw:{_fmt(self.lam)}"

    def _cdf_inside(self, x: np.ndarray) -> np.ndarray:
        return x**self.lam

    def _pdf_inside(self, x: np.ndarray) -> np.ndarray:
        return self.lam * x ** (self.lam - 1.0)

    def _quantile(self, u: np.ndarray) -> np.ndarray:
        return u ** (1.0 / self.lam)

    def _draw(self, generator: np.random.Generator, count: int) -> np.ndarray:
        return generator.power(self.lam, count)

    def raw_moment(self, k: float) -> float:
        return self.lam / (self.lam + k)

    def _closed_form(self, kind: MeasureKind) -> float:
        lam, m = self.lam, kind.m
        match kind.tag:
            case MeasureTag.EXTROPY:
                return -(lam**2) / (2.0 * (2.0 * lam - 1.0))
            case MeasureTag.CRJ:
                return -(lam**2) / ((lam + 1.0) * (2.0 * lam + 1.0))
            case MeasureTag.WCRJ:
                return -(lam**2) / (4.0 * (lam + 1.0) * (lam + 2.0))
            case MeasureTag.CPJ:
                return -1.0 / (2.0 * (2.0 * lam + 1.0))
            case MeasureTag.WCPJ:
                return -1.0 / (4.0 * lam + 2.0 * m + 2.0)
            case MeasureTag.ORDER_MAX:
                return -1.0 / (2.0 * (2.0 * kind.n * lam + m + 1.0))
            case MeasureTag.PHI_P:
                assert kind.p is not None
                exponent = 2.0 * lam + m + 1.0
                return -(kind.p**exponent) / (2.0 * exponent)
        return super()._closed_form(kind)


class Beta(BoundedDistribution):
    """Beta(alpha, beta) distribution on [0, 1]."""

    alpha: float = Field(..., gt=0.0, allow_inf_nan=False)
    beta: float = Field(..., gt=0.0, allow_inf_nan=False)

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0)

    @property
    def spec(self) -> str:
        return f"beta:{_fmt(self.alpha)},{_fmt(self.beta)}"

    def _cdf_inside(self, x: np.ndarray) -> np.ndarray:
        return special.betainc(self.alpha, self.beta, x)

    def _pdf_inside(self, x: np.ndarray) -> np.ndarray:
        log_density = (
            special.xlogy(self.alpha - 1.0, x)
            + special.xlog1py(self.beta - 1.0, -x)
            - special.betaln(self.alpha, self.beta)
        )
        return np.exp(log_density)

    def _quantile(self, u: np.ndarray) -> np.ndarray:
        return special.betaincinv(self.alpha, self.beta, u)

    def _draw(self, generator: np.random.Generator, count: int) -> np.ndarray:
        # gamma ratio: G_a / (G_a + G_b)
        left = generator.standard_gamma(self.alpha, count)
        right = generator.standard_gamma(self.beta, count)
        return left / (left + right)

    def raw_moment(self, k: float) -> float:
        return math.exp(
            special.betaln(self.alpha + k, self.beta) - special.betaln(self.alpha, self.beta)
        )


# ============================================================================
# Module level helpers
# ============================================================================


def closed_form_measure(
    dist: BoundedDistribution,
    measure: MeasureKind | MeasureTag | str,
    m: int | None = None,
    **params: Any,
) -> float:
    """
    Published closed-form value of a measure.

    Args:
        dist: Catalog distribution
        measure: A MeasureKind, or a tag such as ``"wcpj"``
        m: Weight order (overrides ``measure.m`` when given)
        **params: ``n`` and ``p`` for order-max and phi-p tags

    Returns:
        The exact value

    Raises:
        UnsupportedMeasureError: If no closed form is known for the pair

    Example:
        >>> closed_form_measure(Uniform(a=0, b=1), "wcpj", m=1)
        -0.125
    """
    if isinstance(measure, MeasureKind):
        kind = measure if m is None else measure.model_copy(update={"m": m})
    else:
        kind = MeasureKind.of(measure, m=m or 0, **params)
    return dist.closed_form(kind)


def parse_distribution(text: str) -> BoundedDistribution:
    """
    Parse ``uniform:a,b``, ``powerlaw:l`` or ``beta:a,b``.

    Raises:
        DistributionError: For unknown families, bad numbers or invalid parameters
    """
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    try:
        values = [float(part) for part in args.split(",")] if args.strip() else []
    except ValueError as e:
        raise DistributionError(f"Cannot parse parameters of {text!r}: {e}") from e

    arity = {"uniform": 2, "powerlaw": 1, "power-law": 1, "beta": 2}
    if name not in arity:
        raise DistributionError(
            f"Unknown or unbounded distribution {name!r}; expected uniform, powerlaw or beta"
        )
    if len(values) != arity[name]:
        raise DistributionError(
            f"{name} takes {arity[name]} parameter(s), got {len(values)} in {text!r}"
        )

    try:
        if name == "uniform":
            return Uniform(a=values[0], b=values[1])
        if name == "beta":
            return Beta(alpha=values[0], beta=values[1])
        return PowerLaw(lam=values[0])
    except ValidationError as e:
        raise DistributionError(f"Invalid parameters in {text!r}: {e}") from e


def affine(dist: BoundedDistribution, a: float, b: float) -> BoundedDistribution:
    """
    Distribution of ``a * X + b`` for a > 0, b >= 0.

    Only uniforms stay inside the catalog under affine maps.

    Raises:
        DistributionError: For invalid coefficients or families without an affine image
    """
    if a <= 0.0 or b < 0.0:
        raise DistributionError(f"affine map requires a > 0 and b >= 0, got a={a}, b={b}")
    if isinstance(dist, Uniform):
        return Uniform(a=a * dist.a + b, b=a * dist.b + b)
    if a == 1.0 and b == 0.0:
        return dist
    raise DistributionError(f"The image of {dist.spec} under x -> {a}x + {b} is not in the catalog")
