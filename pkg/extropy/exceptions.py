"""
Error hierarchy for the extropy toolkit.

Every error derives from ``ExtropyError`` and from the builtin it refines,
so callers that catch ``ValueError`` or ``ArithmeticError`` keep working.
"""


class ExtropyError(Exception):
    """Base class for all toolkit errors."""


# ============================================================================
# Argument and parameter errors
# ============================================================================


class DomainError(ExtropyError, ValueError):
    """An argument lies outside the domain of the operation."""


class DistributionError(DomainError):
    """Invalid distribution parameters, unknown kind or unparsable spec."""


class UnsupportedMeasureError(ExtropyError, ValueError):
    """No published closed form exists for the (distribution, measure) pair."""


class LengthMismatchError(ExtropyError, ValueError):
    """Sequence inputs have inconsistent lengths."""


# ============================================================================
# Numerical errors
# ============================================================================


class QuadratureError(ExtropyError, ArithmeticError):
    """Adaptive quadrature failed."""


class QuadratureDepthError(QuadratureError):
    """Refinement hit the subdivision limit without converging."""

    def __init__(self, lo: float, hi: float, max_depth: int, detail: str = "") -> None:
        self.lo = lo
        self.hi = hi
        self.max_depth = max_depth
        message = f"Quadrature on [{lo}, {hi}] did not converge within {max_depth} subdivisions"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class DivergenceError(QuadratureError):
    """A log-expectation integral is non-finite or unstable under its cut-off."""


# ============================================================================
# Sample errors
# ============================================================================


class SampleError(ExtropyError, ValueError):
    """Invalid sample input."""


class EmptySampleError(SampleError):
    """The sample has no observations."""

    def __init__(self) -> None:
        super().__init__("Sample must contain at least one observation")


class NegativeValueError(SampleError):
    """An observation is negative."""

    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"Observation {index} is negative: {value}")


class NonFiniteValueError(SampleError):
    """An observation is NaN or infinite."""

    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"Observation {index} is not finite: {value}")


# ============================================================================
# Conditioning and testing errors
# ============================================================================


class PartitionError(ExtropyError, ValueError):
    """Invalid breakpoints or a null atom."""


class AtomIndexError(ExtropyError, IndexError):
    """Atom index outside the partition."""


class SupportViolationError(ExtropyError, ValueError):
    """Data or an alternative distribution lies outside [0, 1]."""


class SampleSizeMismatchError(ExtropyError, ValueError):
    """Sample size differs from the size the critical values were built for."""
