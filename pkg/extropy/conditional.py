"""
Conditional weighted cumulative past extropy given a finite partition.

A sub-sigma-field is realised as the sigma-field generated by a finite set of
disjoint intervals (atoms) covering the support. Atoms are closed on the left
and open on the right, except the last which is closed.
"""

import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from extropy.distributions import BoundedDistribution
from extropy.exceptions import AtomIndexError, PartitionError
from extropy.measures import extropy_bound, integrate
from extropy.models import QuadratureConfig

logger = logging.getLogger(__name__)

MIN_ATOM_PROB = 1e-12


class Partition(BaseModel):
    """Finite partition of a distribution's support into positive-probability atoms."""

    model_config = ConfigDict(frozen=True)

    breakpoints: tuple[float, ...] = Field(default=(), description="Interior breakpoints")
    atoms: tuple[tuple[float, float], ...] = Field(..., min_length=1)
    atom_probs: tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_atoms(self) -> "Partition":
        if len(self.atoms) != len(self.atom_probs):
            raise ValueError("atoms and atom_probs differ in length")
        if len(self.atoms) != len(self.breakpoints) + 1:
            raise ValueError("a partition has one more atom than breakpoints")
        if abs(sum(self.atom_probs) - 1.0) > 1e-12:
            raise ValueError(f"atom probabilities sum to {sum(self.atom_probs)}, not 1")
        return self

    @property
    def size(self) -> int:
        """Number of atoms."""
        return len(self.atoms)

    @property
    def is_trivial(self) -> bool:
        """True for the one-atom partition, i.e. the trivial sigma-field."""
        return self.size == 1

    def atom(self, index: int) -> tuple[float, float]:
        """Bounds of atom ``index``."""
        if not 0 <= index < self.size:
            raise AtomIndexError(f"atom index {index} outside 0..{self.size - 1}")
        return self.atoms[index]


def partition_from_breakpoints(dist: BoundedDistribution, breaks: Sequence[float]) -> Partition:
    """
    Partition the support of ``dist`` at the given interior breakpoints.

    Args:
        dist: Catalog distribution
        breaks: Strictly increasing points inside (lo, hi); empty for the trivial partition

    Returns:
        Partition with exact atom probabilities from cdf differences

    Raises:
        PartitionError: For breakpoints out of order, outside the support,
            or producing an atom with probability below 1e-12
    """
    lo, hi = dist.support
    points = [float(b) for b in breaks]
    for left, right in zip(points, points[1:], strict=False):
        if not left < right:
            raise PartitionError(f"breakpoints must be strictly increasing, got {points}")
    if points and not (lo < points[0] and points[-1] < hi):
        raise PartitionError(f"breakpoints must lie inside ({lo}, {hi}), got {points}")

    edges = [lo, *points, hi]
    atoms = tuple(zip(edges[:-1], edges[1:], strict=True))
    levels = [0.0, *(dist.cdf(p) for p in points), 1.0]
    probs = [right - left for left, right in zip(levels[:-1], levels[1:], strict=True)]
    for index, prob in enumerate(probs):
        if prob < MIN_ATOM_PROB:
            raise PartitionError(f"atom {index} {atoms[index]} has probability {prob}")

    # absorb rounding so the probabilities sum to one
    probs[-1] = 1.0 - sum(probs[:-1])
    return Partition(breakpoints=tuple(points), atoms=atoms, atom_probs=tuple(probs))


def refine(dist: BoundedDistribution, part: Partition, extra_breaks: Sequence[float]) -> Partition:
    """Refinement of ``part`` obtained by adding breakpoints."""
    merged = sorted(set(part.breakpoints) | {float(b) for b in extra_breaks})
    return partition_from_breakpoints(dist, merged)


def conditional_cdf(dist: BoundedDistribution, part: Partition, atom_index: int, x: float) -> float:
    """P(X <= x | X in atom); 0 below the atom and 1 above it."""
    left, right = part.atom(atom_index)
    if x < left:
        return 0.0
    if x >= right:
        return 1.0
    prob = part.atom_probs[atom_index]
    level = (dist.cdf(x) - dist.cdf(left)) / prob
    return min(max(level, 0.0), 1.0)


def conditional_wcpj(
    dist: BoundedDistribution,
    part: Partition,
    atom_index: int,
    m: int,
    cfg: QuadratureConfig | None = None,
) -> float:
    """
    Conditional weighted measure on one atom.

    The integral runs over the whole support [0, sup B]: above the atom the
    conditional cdf is 1, and that plateau is integrated in closed form.
    """
    left, right = part.atom(atom_index)
    hi = dist.hi
    inside = integrate(
        lambda x: x**m * conditional_cdf(dist, part, atom_index, x) ** 2, left, right, cfg
    )
    plateau = (hi ** (m + 1) - right ** (m + 1)) / (m + 1)
    return -0.5 * (inside + plateau)


def expected_conditional_wcpj(
    dist: BoundedDistribution, part: Partition, m: int, cfg: QuadratureConfig | None = None
) -> float:
    """Expectation of the conditional measure over the atoms."""
    value = sum(
        prob * conditional_wcpj(dist, part, index, m, cfg)
        for index, prob in enumerate(part.atom_probs)
    )
    logger.debug(f"E[conditional wcpj] over {part.size} atoms of {dist.spec}, m={m}: {value}")
    return value


class TowerCheck(BaseModel):
    """Comparison on one coarse atom of the averaged refined measure and the coarse one."""

    atom_index: int
    coarse: float = Field(..., description="Conditional measure on the coarse atom")
    refined_average: float = Field(..., description="Average of the refined atoms' measures")

    @property
    def holds(self) -> bool:
        return self.refined_average <= self.coarse + 1e-10


def tower_check(
    dist: BoundedDistribution,
    coarse: Partition,
    fine: Partition,
    m: int,
    cfg: QuadratureConfig | None = None,
) -> list[TowerCheck]:
    """
    Average of the fine-atom measures within each coarse atom.

    Raises:
        PartitionError: If ``fine`` does not refine ``coarse``
    """
    if not set(coarse.breakpoints) <= set(fine.breakpoints):
        raise PartitionError("the fine partition must contain every coarse breakpoint")

    checks = []
    for index, (left, right) in enumerate(coarse.atoms):
        weighted = 0.0
        for fine_index, (f_left, f_right) in enumerate(fine.atoms):
            if left <= f_left and f_right <= right:
                weighted += fine.atom_probs[fine_index] * conditional_wcpj(
                    dist, fine, fine_index, m, cfg
                )
        checks.append(
            TowerCheck(
                atom_index=index,
                coarse=conditional_wcpj(dist, coarse, index, m, cfg),
                refined_average=weighted / coarse.atom_probs[index],
            )
        )
    return checks


def conditional_extropy(
    dist: BoundedDistribution,
    part: Partition,
    atom_index: int,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Extropy of the density truncated to one atom."""
    left, right = part.atom(atom_index)
    prob = part.atom_probs[atom_index]
    return -0.5 * integrate(lambda x: (dist.pdf(x) / prob) ** 2, left, right, cfg)


def conditional_bound(
    dist: BoundedDistribution,
    part: Partition,
    atom_index: int,
    m: int,
    cfg: QuadratureConfig | None = None,
) -> float:
    """
    Per-atom extropy bound B* exp(2 J(X | atom)).

    B* uses the conditional cdf and the truncated density of the atom.
    """
    left, right = part.atom(atom_index)
    prob = part.atom_probs[atom_index]
    return extropy_bound(
        lambda x: dist.pdf(x) / prob,
        lambda x: conditional_cdf(dist, part, atom_index, x),
        left,
        right,
        m,
        cfg,
    )
