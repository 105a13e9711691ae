"""
Seeded Monte Carlo engine for the uniformity test.

Replication ``r`` of a run always draws from ``derive_stream(seed, offset + r)``
and writes its statistic into slot ``r`` of a result buffer, so the output does
not depend on how replications are scheduled across worker threads. Critical
values use indices [0, reps); power studies use [reps, 2 * reps).
"""

import csv
import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TextIO

import numpy as np

from extropy.config import get_config
from extropy.distributions import BoundedDistribution, Uniform
from extropy.empirical import Sample, wcpj_statistic
from extropy.exceptions import DomainError, SampleSizeMismatchError, SupportViolationError
from extropy.models import CriticalValues, PowerRow, TableRow, TestConfig, UniformityDecision
from extropy.streams import RandomStream, derive_stream

logger = logging.getLogger(__name__)

NULL_DISTRIBUTION = Uniform(a=0.0, b=1.0)
MIN_TABLE_REPS = 1000

TABLE_HEADER = ["n", "m", "alpha", "reps", "seed", "g1", "g2"]
POWER_HEADER = ["alt", "n", "m", "alpha", "reps", "seed", "power"]

__all__ = [
    "RandomStream",
    "critical_value_table",
    "critical_values",
    "derive_stream",
    "empirical_quantile",
    "find_table_row",
    "power",
    "power_table",
    "read_table_csv",
    "simulate_statistic",
    "size_standard_error",
    "uniformity_test",
    "write_power_csv",
    "write_table_csv",
]


# ============================================================================
# Simulation
# ============================================================================


def simulate_statistic(
    dist: BoundedDistribution,
    cfg: TestConfig,
    offset: int = 0,
    threads: int | None = None,
    chunk_size: int | None = None,
) -> np.ndarray:
    """
    Empirical weighted measure of ``cfg.reps`` independent samples of size ``cfg.n``.

    Args:
        dist: Distribution to sample from
        cfg: Sample size, weight order, replication count and master seed
        offset: First stream index (replication r uses index offset + r)
        threads: Worker cap; configuration default when omitted
        chunk_size: Replications per worker task; configuration default when omitted

    Returns:
        Array of length ``cfg.reps`` indexed by replication
    """
    if offset < 0:
        raise DomainError(f"stream offset must be non-negative, got {offset}")
    defaults = get_config().montecarlo_defaults()
    workers = threads or defaults.threads
    chunk = chunk_size or defaults.chunk_size
    buffer = np.empty(cfg.reps, dtype=float)

    def run_chunk(bounds: tuple[int, int]) -> None:
        for r in range(*bounds):
            stream = derive_stream(cfg.master_seed, offset + r)
            draws = np.sort(dist.sample(stream, cfg.n))
            buffer[r] = wcpj_statistic(draws, cfg.m)

    chunks = [(start, min(start + chunk, cfg.reps)) for start in range(0, cfg.reps, chunk)]
    workers = max(1, min(workers, len(chunks)))
    logger.debug(
        f"Simulating {cfg.reps} replications of {dist.spec} (n={cfg.n}, m={cfg.m}) "
        f"on {workers} worker(s), offset {offset}"
    )
    if workers == 1:
        for bounds in chunks:
            run_chunk(bounds)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            list(executor.map(run_chunk, chunks))
    return buffer


def empirical_quantile(values: Sequence[float] | np.ndarray, q: float) -> float:
    """
    Order statistic of rank ceil(q * R) among R values.

    ``q * R`` is rounded to 9 decimals before the ceiling so that levels such
    as 0.975 * 100000 land on rank 97500 rather than drifting to 97501.

    Raises:
        DomainError: If values is empty or q is outside (0, 1]
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"quantile level must lie in (0, 1], got {q}")
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size == 0:
        raise DomainError("cannot take a quantile of no values")
    rank = max(1, math.ceil(round(q * ordered.size, 9)))
    return float(ordered[rank - 1])


def critical_values(cfg: TestConfig, threads: int | None = None) -> CriticalValues:
    """
    Critical values of the uniformity test under the standard uniform null.

    Raises:
        DomainError: If fewer than 1000 replications are requested
    """
    if cfg.reps < MIN_TABLE_REPS:
        raise DomainError(f"critical values need at least {MIN_TABLE_REPS} replications")
    statistics = simulate_statistic(NULL_DISTRIBUTION, cfg, offset=0, threads=threads)
    g1 = empirical_quantile(statistics, cfg.alpha / 2.0)
    g2 = empirical_quantile(statistics, 1.0 - cfg.alpha / 2.0)
    logger.info(f"Critical values n={cfg.n}, m={cfg.m}, alpha={cfg.alpha}: g1={g1:.6f}, g2={g2:.6f}")
    return CriticalValues(g1=g1, g2=g2, config=cfg)


# ============================================================================
# Testing and power
# ============================================================================


def uniformity_test(s: Sample, cv: CriticalValues, strict: bool = False) -> UniformityDecision:
    """
    Test H0: the sample comes from the standard uniform distribution.

    Observations above 1 refute H0 outright: the decision is a rejection with
    ``support_violation`` set.

    Args:
        s: Sample to test
        cv: Critical values
        strict: Raise instead of warning when the sample size differs from ``cv``

    Returns:
        Decision with the statistic and the reject flag

    Raises:
        SampleSizeMismatchError: If ``strict`` and the sizes differ
    """
    if s.n != cv.config.n:
        message = f"sample size {s.n} differs from the critical values' n={cv.config.n}"
        if strict:
            raise SampleSizeMismatchError(message)
        logger.warning(message)

    statistic = wcpj_statistic(s.array, cv.config.m)
    if s.values[-1] > 1.0:
        logger.warning(f"Observation {s.values[-1]} lies outside [0, 1]; rejecting")
        return UniformityDecision(statistic=statistic, reject=True, support_violation=True)

    reject = statistic < cv.g1 or statistic > cv.g2
    return UniformityDecision(statistic=statistic, reject=reject)


def _check_unit_support(dist: BoundedDistribution) -> None:
    lo, hi = dist.support
    if lo < 0.0 or hi > 1.0:
        raise SupportViolationError(f"{dist.spec} has support [{lo}, {hi}] outside [0, 1]")


def power(
    alt: BoundedDistribution,
    cfg: TestConfig,
    cv: CriticalValues,
    threads: int | None = None,
) -> float:
    """
    Share of replications under ``alt`` whose statistic falls outside [g1, g2].

    Streams start right after the index range used for the critical values.

    Raises:
        SupportViolationError: If ``alt`` is not supported inside [0, 1]
        SampleSizeMismatchError: If ``cfg.n`` differs from the critical values' n
        DomainError: If ``cfg`` and the critical values disagree on m or alpha
    """
    _check_unit_support(alt)
    table = cv.config
    if cfg.n != table.n:
        raise SampleSizeMismatchError(
            f"power at n={cfg.n} needs critical values for that n, got n={table.n}"
        )
    if (cfg.m, cfg.alpha) != (table.m, table.alpha):
        raise DomainError(
            f"power at m={cfg.m}, alpha={cfg.alpha} does not match critical values "
            f"for m={table.m}, alpha={table.alpha}"
        )
    statistics = simulate_statistic(alt, cfg, offset=table.reps, threads=threads)
    rejected = np.count_nonzero((statistics < cv.g1) | (statistics > cv.g2))
    return rejected / cfg.reps


def size_standard_error(alpha: float, reps: int) -> float:
    """Binomial standard error of an estimated rejection rate near ``alpha``."""
    return math.sqrt(alpha * (1.0 - alpha) / reps)


def critical_value_table(
    n_list: Iterable[int], m: int, alpha: float, reps: int, seed: int, threads: int | None = None
) -> list[TableRow]:
    """One row of critical values per sample size."""
    rows = []
    for n in n_list:
        cv = critical_values(TestConfig(n=n, m=m, alpha=alpha, reps=reps, master_seed=seed), threads)
        rows.append(TableRow(n=n, m=m, alpha=alpha, reps=reps, seed=seed, g1=cv.g1, g2=cv.g2))
    if not rows:
        raise DomainError("at least one sample size is required")
    return rows


def power_table(
    alt: BoundedDistribution,
    n_list: Iterable[int],
    m: int,
    alpha: float,
    reps: int,
    seed: int,
    threads: int | None = None,
) -> list[PowerRow]:
    """One power estimate per sample size, each with its own null critical values."""
    _check_unit_support(alt)
    rows = []
    for n in n_list:
        cfg = TestConfig(n=n, m=m, alpha=alpha, reps=reps, master_seed=seed)
        cv = critical_values(cfg, threads)
        estimate = power(alt, cfg, cv, threads)
        logger.info(f"Power of {alt.spec} at n={n}, m={m}: {estimate:.6f}")
        rows.append(
            PowerRow(alt=alt.spec, n=n, m=m, alpha=alpha, reps=reps, seed=seed, power=estimate)
        )
    if not rows:
        raise DomainError("at least one sample size is required")
    return rows


# ============================================================================
# CSV output
# ============================================================================


def _fixed(value: float) -> str:
    return f"{value:.6f}"


def _write_rows(header: list[str], rows: list[list[str]], out: str | Path | TextIO) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as f:
            _write_rows(header, rows, f)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def write_table_csv(rows: Sequence[TableRow], out: str | Path | TextIO) -> None:
    """Write critical-value rows with header ``n,m,alpha,reps,seed,g1,g2``."""
    _write_rows(
        TABLE_HEADER,
        [
            [str(r.n), str(r.m), _fixed(r.alpha), str(r.reps), str(r.seed), _fixed(r.g1), _fixed(r.g2)]
            for r in rows
        ],
        out,
    )


def write_power_csv(rows: Sequence[PowerRow], out: str | Path | TextIO) -> None:
    """Write power rows with header ``alt,n,m,alpha,reps,seed,power``."""
    _write_rows(
        POWER_HEADER,
        [
            [r.alt, str(r.n), str(r.m), _fixed(r.alpha), str(r.reps), str(r.seed), _fixed(r.power)]
            for r in rows
        ],
        out,
    )


def read_table_csv(path: str | Path) -> list[TableRow]:
    """
    Read a critical-value table written by ``write_table_csv``.

    Raises:
        OSError: If the file cannot be read
        ValueError: If the header or a row is malformed
    """
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or set(TABLE_HEADER) - set(reader.fieldnames):
            raise ValueError(f"{path}: expected header {','.join(TABLE_HEADER)}")
        rows = [TableRow.model_validate(record) for record in reader]
    logger.info(f"Read {len(rows)} critical-value rows from {path}")
    return rows


def find_table_row(rows: Sequence[TableRow], n: int, m: int, alpha: float) -> TableRow:
    """
    Row of a table matching (n, m, alpha).

    Raises:
        DomainError: If the table has no such row
    """
    for row in rows:
        if row.n == n and row.m == m and math.isclose(row.alpha, alpha, abs_tol=1e-9):
            return row
    raise DomainError(f"critical-value table has no row for n={n}, m={m}, alpha={alpha}")
