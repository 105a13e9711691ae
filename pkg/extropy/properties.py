"""
Invariant suite behind ``verify-properties``.

Every identity and inequality the toolkit promises is evaluated on a fixed
grid of catalog cases. Monte Carlo invariants run at reduced replication
counts unless the full suite is requested.
"""

import logging
import math
from collections.abc import Callable, Iterable

import numpy as np

from extropy.conditional import (
    conditional_bound,
    conditional_wcpj,
    expected_conditional_wcpj,
    partition_from_breakpoints,
    refine,
    tower_check,
)
from extropy.distributions import Beta, BoundedDistribution, PowerLaw, Uniform, closed_form_measure
from extropy.empirical import empirical_wcpj, empirical_wcpj_oracle, make_sample
from extropy.exceptions import ExtropyError, UnsupportedMeasureError
from extropy.measures import (
    cdf_lower_bound,
    cpj,
    extropy_upper_bound,
    left_endpoint_bound,
    phi_p,
    quadrature_measure,
    wcpj,
    wcpj_on_horizon,
    wcpj_order_max,
    wcpj_order_max_quantile,
    wcpj_via_gf,
    zero_based_bounds,
)
from extropy.models import MeasureKind, MeasureTag, PropertyResult, TestConfig
from extropy.montecarlo import (
    critical_values,
    power,
    simulate_statistic,
    size_standard_error,
)
from extropy.streams import derive_stream

logger = logging.getLogger(__name__)

CATALOG: tuple[BoundedDistribution, ...] = (
    Uniform(a=0.0, b=1.0),
    Uniform(a=0.0, b=2.0),
    Uniform(a=1.0, b=2.0),
    Uniform(a=0.5, b=3.0),
    PowerLaw(lam=1.5),
    PowerLaw(lam=2.0),
    PowerLaw(lam=3.5),
    Beta(alpha=2.0, beta=2.0),
    Beta(alpha=1.5, beta=1.5),
    Beta(alpha=2.0, beta=5.0),
)
ORDERS = (0, 1, 2, 3)
SUITE_SEED = 20230517

# (distribution, breakpoints of a coarse partition, extra breakpoints of a refinement)
PARTITION_CASES: tuple[tuple[BoundedDistribution, tuple[float, ...], tuple[float, ...]], ...] = (
    (Uniform(a=0.0, b=1.0), (0.5,), (0.25, 0.75)),
    (Uniform(a=1.0, b=2.0), (1.4,), (1.2, 1.7)),
    (PowerLaw(lam=2.0), (0.5,), (0.3, 0.8)),
    (Beta(alpha=2.0, beta=2.0), (0.3, 0.6), (0.45,)),
)


def _kinds_for(dist: BoundedDistribution, m: int) -> list[MeasureKind]:
    kinds = [MeasureKind.of(tag, m=m) for tag in ("extropy", "crj", "cpj", "wcrj", "wcpj")]
    kinds += [MeasureKind.of("order-max", m=m, n=n) for n in (1, 2, 3)]
    lo, hi = dist.support
    if lo >= 0.0 and hi <= 1.0:
        kinds += [MeasureKind.of("phi-p", m=m, p=p) for p in (0.25, 0.5)]
    return kinds


class PropertySuite:
    """Runs invariant checks and collects one PropertyResult per invariant."""

    def __init__(self, fast: bool = True) -> None:
        self.fast = fast
        self.results: list[PropertyResult] = []

    def check(self, name: str, probe: Callable[[], tuple[bool, str]]) -> PropertyResult:
        """
        Run one probe; toolkit errors count as failures rather than aborting the suite.

        Args:
            name: Invariant name reported on failure
            probe: Returns (passed, detail)
        """
        try:
            passed, detail = probe()
        except ExtropyError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        result = PropertyResult(name=name, passed=passed, detail=detail)
        level = logging.INFO if passed else logging.WARNING
        logger.log(level, f"{'PASS' if passed else 'FAIL'} {name} {detail}".rstrip())
        self.results.append(result)
        return result

    # ------------------------------------------------------------------
    # Measures
    # ------------------------------------------------------------------

    def closed_forms(self) -> None:
        def probe() -> tuple[bool, str]:
            worst, where, compared = 0.0, "", 0
            for dist in CATALOG:
                for m in ORDERS:
                    for kind in _kinds_for(dist, m):
                        try:
                            exact = closed_form_measure(dist, kind)
                        except UnsupportedMeasureError:
                            continue
                        gap = abs(exact - quadrature_measure(dist, kind))
                        compared += 1
                        if gap > worst:
                            worst, where = gap, f"{dist.spec} {kind.label}"
            return worst < 1e-8, f"{compared} pairs, worst {worst:.2e} at {where or '-'}"

        self.check("closed-form-matches-quadrature", probe)

    def weight_ratios(self) -> None:
        def probe() -> tuple[bool, str]:
            worst = 0.0
            for a, b in ((0.0, 1.0), (1.0, 2.0), (0.5, 3.0)):
                dist = Uniform(a=a, b=b)
                worst = max(worst, abs(wcpj(dist, 1) - (a + 3.0 * b) / 4.0 * cpj(dist)))
            for lam in (1.5, 2.0, 3.5):
                dist = PowerLaw(lam=lam)
                ratio = (2.0 * lam + 1.0) / (2.0 * lam + 2.0)
                worst = max(worst, abs(wcpj(dist, 1) - ratio * cpj(dist)))
            return worst < 1e-10, f"worst {worst:.2e}"

        self.check("order-one-weight-ratio", probe)

    def quantile_inverts_cdf(self) -> None:
        def probe() -> tuple[bool, str]:
            worst, where = 0.0, ""
            for dist in CATALOG:
                lo, hi = dist.support
                grid = np.linspace(lo, hi, 102)[1:-1]
                gaps = np.abs(dist.quantile(dist.cdf(grid)) - grid)
                # a cdf rounded by a few ulps moves the quantile by ulps / density
                tolerance = 1e-12 + 4.0 * np.finfo(float).eps / dist.pdf(grid)
                if np.any(gaps >= tolerance):
                    at = int(np.argmax(gaps - tolerance))
                    return False, f"{dist.spec}: gap {gaps[at]:.2e} at x={grid[at]:.4g}"
                if gaps.max() > worst:
                    worst, where = float(gaps.max()), dist.spec
            return True, f"worst {worst:.2e} at {where or '-'}"

        self.check("quantile-inverts-cdf", probe)

    def measure_identities(self) -> None:
        def reduction() -> tuple[bool, str]:
            gap = max(abs(wcpj(d, 0) - cpj(d)) for d in CATALOG)
            return gap < 1e-10, f"worst {gap:.2e}"

        def gf_representation() -> tuple[bool, str]:
            gap = max(abs(wcpj_via_gf(d, m) - wcpj(d, m)) for d in CATALOG for m in (0, 1, 2))
            return gap < 1e-6, f"worst {gap:.2e}"

        def strictly_negative() -> tuple[bool, str]:
            worst = max(wcpj(d, m) for d in CATALOG for m in ORDERS)
            return worst < 0.0, f"largest value {worst:.6g}"

        self.check("order-zero-reduces-to-cpj", reduction)
        self.check("gf-representation", gf_representation)
        self.check("measure-strictly-negative", strictly_negative)

    def bounds(self) -> None:
        def lower_by_cdf() -> tuple[bool, str]:
            bad = [
                f"{d.spec} m={m}"
                for d in CATALOG
                for m in ORDERS
                if wcpj(d, m) < cdf_lower_bound(d, m) - 1e-12
            ]
            return not bad, ", ".join(bad)

        def extropy_upper() -> tuple[bool, str]:
            bad = [
                f"{d.spec} m={m}"
                for d in CATALOG
                for m in ORDERS
                if wcpj(d, m) > extropy_upper_bound(d, m) + 1e-12
            ]
            return not bad, ", ".join(bad)

        def shifted_support_upper() -> tuple[bool, str]:
            cases = [(d, m) for d in CATALOG if d.lo > 0.0 for m in ORDERS]
            bad = [f"{d.spec} m={m}" for d, m in cases if wcpj(d, m) > left_endpoint_bound(d, m) + 1e-12]
            return not bad, f"{len(cases)} cases {', '.join(bad)}".rstrip()

        def zero_based_bracket() -> tuple[bool, str]:
            cases = [(d, m) for d in CATALOG if d.lo == 0.0 for m in ORDERS]
            bad = []
            for d, m in cases:
                value = wcpj(d, m)
                lower, upper = zero_based_bounds(d, m)
                _, sharp_upper = zero_based_bounds(d, m, sharp=True)
                if not lower - 1e-12 <= value <= min(upper, sharp_upper) + 1e-12:
                    bad.append(f"{d.spec} m={m}")
            return not bad, f"{len(cases)} cases {', '.join(bad)}".rstrip()

        self.check("cdf-integral-lower-bound", lower_by_cdf)
        self.check("extropy-upper-bound", extropy_upper)
        self.check("left-endpoint-upper-bound", shifted_support_upper)
        self.check("zero-based-support-bounds", zero_based_bracket)

    def orderings(self) -> None:
        def stochastic_order() -> tuple[bool, str]:
            bad = []
            for a, b in ((0.0, 1.0), (0.5, 2.0), (1.0, 3.0)):
                for delta in (0.25, 1.0):
                    low, high = Uniform(a=a, b=b), Uniform(a=a + delta, b=b + delta)
                    grid = np.linspace(a, b + delta, 200)
                    if np.any(low.cdf(grid) < high.cdf(grid)):
                        bad.append(f"cdf order {low.spec} vs {high.spec}")
                        continue
                    horizon = b + delta
                    for m in (0, 1, 2):
                        if wcpj_on_horizon(low, m, horizon) > wcpj_on_horizon(high, m, horizon) + 1e-12:
                            bad.append(f"{low.spec} vs {high.spec} m={m}")
            return not bad, ", ".join(bad)

        def maximum_dominates() -> tuple[bool, str]:
            bad = [
                f"{d.spec} n={n} m={m}"
                for d in CATALOG
                for m in (0, 1, 2)
                for n in range(1, 11)
                if wcpj_order_max(d, n, m) - wcpj(d, m) < -1e-12
            ]
            return not bad, ", ".join(bad)

        def maximum_characterises() -> tuple[bool, str]:
            worst = 0.0
            for d in (Uniform(a=0.0, b=1.0), Uniform(a=1.0, b=2.0), PowerLaw(lam=2.0)):
                twin = d.model_copy()
                for n in range(1, 11):
                    direct = wcpj_order_max(d, n, 1)
                    if direct != wcpj_order_max(twin, n, 1):
                        return False, f"{d.spec} n={n}: identical laws differ"
                    worst = max(worst, abs(direct - wcpj_order_max_quantile(twin, n, 1)))
            return worst < 1e-8, f"worst {worst:.2e}"

        def partial_separates() -> tuple[bool, str]:
            left, right = PowerLaw(lam=2.0), Uniform(a=0.0, b=1.0)
            gaps = [abs(phi_p(left, p, m) - phi_p(right, p, m)) for p in (0.25, 0.5, 0.75) for m in (0, 1)]
            return min(gaps) > 1e-6, f"smallest gap {min(gaps):.2e}"

        self.check("stochastic-order-monotone", stochastic_order)
        self.check("maximum-dominates-parent", maximum_dominates)
        self.check("maximum-characterises-law", maximum_characterises)
        self.check("partial-measure-separates", partial_separates)

    # ------------------------------------------------------------------
    # Empirical estimator
    # ------------------------------------------------------------------

    def estimator(self) -> None:
        def oracle() -> tuple[bool, str]:
            count = 200 if self.fast else 1000
            worst = 0.0
            for index in range(count):
                stream = derive_stream(SUITE_SEED, index)
                n = int(stream.generator.integers(2, 51))
                sample = make_sample(stream.generator.uniform(0.0, 1.0, n))
                for m in (0, 1, 2):
                    worst = max(worst, abs(empirical_wcpj(sample, m) - empirical_wcpj_oracle(sample, m)))
            hand = empirical_wcpj(make_sample([0.2, 0.4, 0.6, 0.8, 1.0]), 1)
            passed = worst < 1e-12 and math.isclose(hand, -0.092, abs_tol=1e-12)
            return passed, f"{count} samples, worst {worst:.2e}, worked case {hand:.6f}"

        def homogeneous() -> tuple[bool, str]:
            sample = make_sample(derive_stream(SUITE_SEED, 0).generator.uniform(0.0, 1.0, 30))
            worst = 0.0
            for factor in (0.5, 2.0, 7.0):
                for m in (0, 1, 2):
                    expected = factor ** (m + 1) * empirical_wcpj(sample, m)
                    got = empirical_wcpj(sample.scaled(factor), m)
                    worst = max(worst, abs(got - expected) / abs(expected))
            return worst < 1e-10, f"worst relative gap {worst:.2e}"

        def sign() -> tuple[bool, str]:
            constant = empirical_wcpj(make_sample([0.3] * 10), 1)
            spread = empirical_wcpj(make_sample([0.3] * 9 + [0.4]), 1)
            return constant == 0.0 and spread < 0.0, f"constant {constant}, spread {spread:.6g}"

        def consistent() -> tuple[bool, str]:
            count = 20 if self.fast else 100
            cfg = TestConfig(n=5000, m=1, reps=count, master_seed=SUITE_SEED)
            mean = float(np.mean(simulate_statistic(Uniform(a=0.0, b=1.0), cfg)))
            return abs(mean + 0.125) < 0.005, f"mean over {count} samples {mean:.6f}"

        self.check("estimator-matches-step-integral", oracle)
        self.check("estimator-scale-homogeneous", homogeneous)
        self.check("estimator-sign", sign)
        self.check("estimator-consistent", consistent)

    # ------------------------------------------------------------------
    # Conditional measure
    # ------------------------------------------------------------------

    def conditional(self) -> None:
        def trivial_field() -> tuple[bool, str]:
            worst = 0.0
            for d in CATALOG:
                trivial = partition_from_breakpoints(d, [])
                for m in (0, 1, 2):
                    worst = max(worst, abs(conditional_wcpj(d, trivial, 0, m) - wcpj(d, m)))
            return worst < 1e-10, f"worst {worst:.2e}"

        def jensen() -> tuple[bool, str]:
            bad = []
            for d, coarse, extra in PARTITION_CASES:
                part = partition_from_breakpoints(d, coarse)
                for m in ORDERS:
                    expected = expected_conditional_wcpj(d, part, m)
                    if not expected < wcpj(d, m) - 1e-10:
                        bad.append(f"{d.spec} {coarse} m={m}")
            worked = expected_conditional_wcpj(
                Uniform(a=0.0, b=1.0), partition_from_breakpoints(Uniform(a=0.0, b=1.0), [0.5]), 1
            )
            if abs(worked + 0.1458333333333333) > 1e-9:
                bad.append(f"worked case {worked:.7f}")
            return not bad, ", ".join(bad)

        def tower() -> tuple[bool, str]:
            bad = []
            for d, coarse_breaks, extra in PARTITION_CASES:
                coarse = partition_from_breakpoints(d, coarse_breaks)
                fine = refine(d, coarse, extra)
                for m in (0, 1, 2):
                    if not all(c.holds for c in tower_check(d, coarse, fine, m)):
                        bad.append(f"{d.spec} m={m} atoms")
                    if expected_conditional_wcpj(d, fine, m) > expected_conditional_wcpj(d, coarse, m) + 1e-10:
                        bad.append(f"{d.spec} m={m} expectation")
            return not bad, ", ".join(bad)

        def atom_bound() -> tuple[bool, str]:
            bad = []
            for d, coarse, _ in PARTITION_CASES:
                part = partition_from_breakpoints(d, coarse)
                for index in range(part.size):
                    for m in (0, 1):
                        if conditional_wcpj(d, part, index, m) > conditional_bound(d, part, index, m) + 1e-12:
                            bad.append(f"{d.spec} atom {index} m={m}")
            return not bad, ", ".join(bad)

        self.check("trivial-field-recovers-measure", trivial_field)
        self.check("conditioning-lowers-expectation", jensen)
        self.check("refinement-tower", tower)
        self.check("per-atom-extropy-bound", atom_bound)

    # ------------------------------------------------------------------
    # Monte Carlo
    # ------------------------------------------------------------------

    def montecarlo(self) -> None:
        table_reps = 20_000 if self.fast else 100_000
        power_reps = 4_000 if self.fast else 100_000
        null = Uniform(a=0.0, b=1.0)

        def deterministic() -> tuple[bool, str]:
            cfg = TestConfig(n=20, m=1, reps=1000, master_seed=SUITE_SEED)
            first = simulate_statistic(null, cfg, threads=1)
            second = simulate_statistic(null, cfg, threads=4, chunk_size=100)
            return bool(np.array_equal(first, second)), "1 worker vs 4 workers on 10 chunks"

        def non_positive() -> tuple[bool, str]:
            cfg = TestConfig(n=10, m=2, reps=2000, master_seed=SUITE_SEED)
            largest = float(np.max(simulate_statistic(Beta(alpha=2.0, beta=5.0), cfg)))
            return largest <= 0.0, f"largest {largest:.6g}"

        def calibrated() -> tuple[bool, str]:
            cv = critical_values(TestConfig(n=50, m=1, reps=table_reps, master_seed=SUITE_SEED))
            run = TestConfig(n=50, m=1, reps=power_reps, master_seed=SUITE_SEED)
            size = power(Beta(alpha=1.0, beta=1.0), run, cv)
            spread = math.hypot(
                size_standard_error(cv.config.alpha, power_reps),
                size_standard_error(cv.config.alpha, table_reps),
            )
            return abs(size - cv.config.alpha) <= 3.0 * spread, f"size {size:.5f} +/- {3.0 * spread:.5f}"

        def table_shape() -> tuple[bool, str]:
            rows = [
                critical_values(TestConfig(n=n, m=1, reps=table_reps, master_seed=SUITE_SEED))
                for n in (20, 30, 40, 50)
            ]
            upper = [cv.g2 for cv in rows]
            lower = [cv.g1 for cv in rows]
            passed = all(later < earlier for earlier, later in zip(upper, upper[1:], strict=False))
            # the lower tail drifts up by less than its Monte Carlo error at reduced reps
            if not self.fast:
                passed = passed and lower[-1] > lower[0]
            detail = ", ".join(f"({g1:.5f}, {g2:.5f})" for g1, g2 in zip(lower, upper, strict=True))
            return passed, detail

        self.check("simulation-deterministic", deterministic)
        self.check("statistic-non-positive", non_positive)
        self.check("size-calibrated", calibrated)
        self.check("critical-values-shape", table_shape)

    def run(self) -> list[PropertyResult]:
        """Run every group and return the collected results."""
        logger.info(f"Running {'fast' if self.fast else 'full'} property suite")
        self.closed_forms()
        self.weight_ratios()
        self.quantile_inverts_cdf()
        self.measure_identities()
        self.bounds()
        self.orderings()
        self.estimator()
        self.conditional()
        self.montecarlo()
        failed = sum(1 for r in self.results if not r.passed)
        logger.info(f"Property suite finished: {len(self.results) - failed} passed, {failed} failed")
        return self.results


def run_property_suite(fast: bool = True) -> list[PropertyResult]:
    """Evaluate every invariant; Monte Carlo checks use reduced reps when ``fast``."""
    return PropertySuite(fast=fast).run()


def first_failure(results: Iterable[PropertyResult]) -> str | None:
    """Name of the first failing invariant, or None when all passed."""
    return next((r.name for r in results if not r.passed), None)
