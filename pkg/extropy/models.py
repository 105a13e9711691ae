"""
Data models shared across the toolkit.
Value types are frozen pydantic models so they can be passed between threads.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

# ============================================================================
# Numerical settings
# ============================================================================


class QuadratureConfig(BaseModel):
    """Tolerances for adaptive quadrature."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(1e-10, gt=0.0, description="Relative error target")
    abs_tol: float = Field(1e-12, gt=0.0, description="Absolute error target")
    max_depth: int = Field(
        50, ge=10, description="Maximum number of subintervals before giving up"
    )
    log_epsilon: float = Field(
        1e-12,
        gt=0.0,
        lt=1e-3,
        description="Left cut-off for integrands with a log singularity at 0",
    )


class MonteCarloDefaults(BaseModel):
    """Defaults for the Monte Carlo engine and the CLI."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(0.05, gt=0.0, lt=1.0)
    m: int = Field(1, ge=0)
    reps: int = Field(100_000, ge=1)
    seed: int = Field(20230517, ge=0, lt=2**64)
    chunk_size: int = Field(2048, ge=1, description="Replications per worker task")
    threads: int = Field(1, ge=1, description="Worker thread cap")


# ============================================================================
# Measures
# ============================================================================


class MeasureTag(str, Enum):
    """Which information measure to evaluate."""

    EXTROPY = "extropy"
    CRJ = "crj"
    CPJ = "cpj"
    WCRJ = "wcrj"
    WCPJ = "wcpj"
    ORDER_MAX = "order-max"
    PHI_P = "phi-p"


class EvaluationMethod(str, Enum):
    """How a measure is evaluated."""

    CLOSED = "closed"
    QUADRATURE = "quadrature"
    BOTH = "both"


class MeasureKind(BaseModel):
    """A measure together with its parameters (weight order m, n, p)."""

    model_config = ConfigDict(frozen=True)

    tag: MeasureTag
    m: int = Field(0, ge=0, description="Weight exponent of x^m")
    n: int = Field(1, ge=1, description="Sample size of the maximum X_{n:n}")
    p: float | None = Field(None, description="Upper limit of the partial integral")

    @model_validator(mode="after")
    def _check_p(self) -> "MeasureKind":
        if self.tag is MeasureTag.PHI_P:
            if self.p is None or not 0.0 < self.p < 1.0:
                raise ValueError(f"phi-p requires 0 < p < 1, got {self.p}")
        return self

    @classmethod
    def of(
        cls, tag: "MeasureTag | str", m: int = 0, n: int = 1, p: float | None = None
    ) -> "MeasureKind":
        """Build a kind from a tag name such as ``"wcpj"``."""
        return cls(tag=MeasureTag(tag), m=m, n=n, p=p)

    @property
    def label(self) -> str:
        """Short human-readable label, e.g. ``wcpj(m=1)``."""
        if self.tag is MeasureTag.ORDER_MAX:
            return f"{self.tag.value}(n={self.n}, m={self.m})"
        if self.tag is MeasureTag.PHI_P:
            return f"{self.tag.value}(p={self.p}, m={self.m})"
        if self.tag is MeasureTag.WCPJ:
            return f"{self.tag.value}(m={self.m})"
        return self.tag.value


class MeasureReport(BaseModel):
    """Result of evaluating one measure on one distribution."""

    dist: str = Field(..., description="Distribution spec, e.g. uniform:0,1")
    measure: str = Field(..., description="Measure label")
    closed_form: float | None = None
    quadrature: float | None = None
    discrepancy: float | None = Field(
        None, description="|closed_form - quadrature| when both were evaluated"
    )


# ============================================================================
# Monte Carlo and testing
# ============================================================================


class TestConfig(BaseModel):
    """Configuration of a Monte Carlo run for the uniformity test."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Sample size")
    m: int = Field(1, ge=0, description="Weight order")
    alpha: float = Field(0.05, gt=0.0, lt=1.0, description="Significance level")
    reps: int = Field(100_000, ge=1, description="Replication count")
    master_seed: int = Field(20230517, ge=0, lt=2**64, description="Master seed")


class CriticalValues(BaseModel):
    """Lower and upper critical values G1(alpha), G2(alpha)."""

    model_config = ConfigDict(frozen=True)

    g1: float = Field(..., description="Lower critical value")
    g2: float = Field(..., description="Upper critical value")
    config: TestConfig

    @model_validator(mode="after")
    def _check_order(self) -> "CriticalValues":
        if not self.g1 < self.g2:
            raise ValueError(f"g1 must be below g2, got g1={self.g1}, g2={self.g2}")
        if not self.g2 < 0.0:
            raise ValueError(f"critical values must be negative, got g2={self.g2}")
        return self


class UniformityDecision(BaseModel):
    """Outcome of the uniformity test on one sample."""

    statistic: float
    reject: bool
    support_violation: bool = Field(
        False, description="True when data outside [0, 1] forced the rejection"
    )


class TestReport(BaseModel):
    """JSON report emitted by ``test-uniformity``."""


    schema_version: int = 1
    n: int
    m: int
    alpha: float
    statistic: float
    g1: float
    g2: float
    reject: bool
    support_violation: bool = False
    table_source: str = Field(..., description="Table file path or 'generated'")


class TableRow(BaseModel):
    """One row of a critical-value table."""

    n: int
    m: int
    alpha: float
    reps: int
    seed: int
    g1: float
    g2: float


class PowerRow(BaseModel):
    """One row of a power table."""

    alt: str
    n: int
    m: int
    alpha: float
    reps: int
    seed: int
    power: float = Field(..., ge=0.0, le=1.0)


class PropertyResult(BaseModel):
    """Outcome of one invariant check."""

    name: str
    passed: bool
    detail: str = ""
