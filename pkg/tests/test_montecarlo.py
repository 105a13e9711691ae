"""Tests for seeded streams, critical values, the uniformity test and power."""

import io
import logging
import math

import numpy as np
import pytest

from extropy.distributions import Beta, Uniform
from extropy.empirical import empirical_wcpj, make_sample
from extropy.exceptions import (
    DomainError,
    SampleSizeMismatchError,
    SupportViolationError,
)
from extropy.models import CriticalValues, PowerRow, TableRow, TestConfig, TestReport
from extropy.montecarlo import (
    critical_value_table,
    critical_values,
    derive_stream,
    empirical_quantile,
    find_table_row,
    power,
    power_table,
    read_table_csv,
    simulate_statistic,
    size_standard_error,
    uniformity_test,
    write_power_csv,
    write_table_csv,
)

# Published critical values at alpha = 0.05, keyed by n: (g1, g2)
TABLE_M1 = {
    20: (-0.144891, -0.066024),
    30: (-0.144001, -0.078560),
    40: (-0.143339, -0.085851),
    50: (-0.142433, -0.090792),
}
TABLE_M2 = {
    20: (-0.109538, -0.047356),
    30: (-0.110579, -0.059339),
    40: (-0.110441, -0.066270),
    50: (-0.110317, -0.070851),
}
POWER_BETA_15 = {40: 0.08527, 50: 0.08509, 100: 0.08363, 150: 0.09927}
SIZE_NULL_BETA = {40: 0.05046, 50: 0.05131, 100: 0.051, 150: 0.04934}


def expected_uniform_statistic(n: int) -> float:
    """Exact null mean of the m = 1 statistic, from E[X_(k)^2] = k(k+1)/((n+1)(n+2))."""
    total = sum(i * i * (i + 1) for i in range(1, n))
    return -0.5 * total / (n * n * (n + 1) * (n + 2))


@pytest.fixture
def row_n20() -> CriticalValues:
    """Published critical values for n = 20, m = 1."""
    g1, g2 = TABLE_M1[20]
    return CriticalValues(g1=g1, g2=g2, config=TestConfig(n=20, m=1))


class TestStreams:
    """Test suite for seeded stream derivation."""

    def test_replay(self):
        """Test that identical (seed, index) pairs replay identical draws."""
        first = derive_stream(7, 3).generator.random(5)
        second = derive_stream(7, 3).generator.random(5)

        np.testing.assert_array_equal(first, second)

    def test_distinct_indices(self):
        """Test that neighbouring indices give different draws."""
        first = derive_stream(7, 3).generator.random(5)
        second = derive_stream(7, 4).generator.random(5)

        assert not np.array_equal(first, second)

    @pytest.mark.parametrize(("seed", "index"), [(-1, 0), (2**64, 0), (1, -1)])
    def test_invalid(self, seed, index):
        """Test seed and index ranges."""
        with pytest.raises(DomainError):
            derive_stream(seed, index)


class TestEmpiricalQuantile:
    """Test suite for the order-statistic quantile."""

    @pytest.mark.parametrize(("q", "expected"), [(0.025, 3.0), (0.5, 50.0), (0.975, 98.0), (1.0, 100.0)])
    def test_ranks(self, q, expected):
        """Test rank ceil(q * R) on 1..100."""
        values = np.arange(100, 0, -1, dtype=float)

        assert empirical_quantile(values, q) == expected

    def test_single_value(self):
        """Test that any level returns the only value."""
        assert empirical_quantile([4.2], 0.01) == 4.2

    def test_rounding_guard(self):
        """Test that 0.975 * 100000 gives rank 97500."""
        values = np.arange(1, 100_001, dtype=float)

        assert empirical_quantile(values, 0.975) == 97_500.0

    @pytest.mark.parametrize("q", [0.0, -0.1, 1.5])
    def test_invalid_level(self, q):
        """Test levels outside (0, 1]."""
        with pytest.raises(DomainError):
            empirical_quantile([1.0, 2.0], q)

    def test_empty(self):
        """Test that an empty input is rejected."""
        with pytest.raises(DomainError):
            empirical_quantile([], 0.5)


class TestSimulation:
    """Test suite for the replication engine."""

    def test_non_positive(self, unit_uniform):
        """Test that every simulated statistic is <= 0."""
        stats = simulate_statistic(unit_uniform, TestConfig(n=10, m=2, reps=500, master_seed=3))

        assert stats.shape == (500,)
        assert np.all(stats <= 0.0)

    def test_null_mean(self, unit_uniform):
        """Test the simulated mean against the exact null mean for n = 50."""
        stats = simulate_statistic(unit_uniform, TestConfig(n=50, m=1, reps=2000, master_seed=11))

        assert float(np.mean(stats)) == pytest.approx(expected_uniform_statistic(50), abs=0.003)
        assert float(np.mean(stats)) == pytest.approx(-0.125, abs=0.02)

    def test_deterministic(self, unit_uniform):
        """Test that two runs with one seed are identical."""
        cfg = TestConfig(n=20, m=1, reps=300, master_seed=99)

        np.testing.assert_array_equal(
            simulate_statistic(unit_uniform, cfg), simulate_statistic(unit_uniform, cfg)
        )

    def test_thread_count_independent(self, symmetric_beta):
        """Test that the result does not depend on worker count or chunking."""
        cfg = TestConfig(n=15, m=1, reps=250, master_seed=5)

        serial = simulate_statistic(symmetric_beta, cfg, threads=1, chunk_size=250)
        threaded = simulate_statistic(symmetric_beta, cfg, threads=4, chunk_size=7)

        np.testing.assert_array_equal(serial, threaded)

    def test_offset_shifts_streams(self, unit_uniform):
        """Test that replication r uses stream offset + r."""
        cfg = TestConfig(n=10, m=1, reps=20, master_seed=1)

        shifted = simulate_statistic(unit_uniform, cfg, offset=10)
        base = simulate_statistic(unit_uniform, cfg.model_copy(update={"reps": 30}))

        np.testing.assert_array_equal(shifted[:20], base[10:30])

    def test_negative_offset(self, unit_uniform):
        """Test that a negative offset is rejected."""
        with pytest.raises(DomainError):
            simulate_statistic(unit_uniform, TestConfig(n=5, reps=2), offset=-1)


class TestCriticalValues:
    """Test suite for critical-value generation."""

    def test_too_few_reps(self):
        """Test that fewer than 1000 replications are refused."""
        with pytest.raises(DomainError):
            critical_values(TestConfig(n=20, m=1, reps=999))

    def test_ordering(self):
        """Test g1 < g2 < 0 with a short run."""
        cv = critical_values(TestConfig(n=20, m=1, reps=2000, master_seed=17))

        assert cv.g1 < cv.g2 < 0.0
        assert cv.config.n == 20

    def test_reproducible(self):
        """Test that repeated runs give identical values."""
        cfg = TestConfig(n=25, m=1, reps=1500, master_seed=23)

        assert critical_values(cfg) == critical_values(cfg)

    def test_model_rejects_bad_order(self):
        """Test that g1 >= g2 or positive values are invalid."""
        cfg = TestConfig(n=20)
        with pytest.raises(ValueError):
            CriticalValues(g1=-0.05, g2=-0.1, config=cfg)
        with pytest.raises(ValueError):
            CriticalValues(g1=-0.05, g2=0.01, config=cfg)

    @pytest.mark.parametrize("model", [TestConfig, TestReport], ids=lambda model: model.__name__)
    def test_models_free_of_test_hooks(self, model):
        """Test that run models carry no test-runner attributes."""
        assert "__test__" not in vars(model)

    def test_table(self):
        """Test one row per sample size, in order."""
        rows = critical_value_table([20, 30], 1, 0.05, 1000, 1)

        assert [row.n for row in rows] == [20, 30]
        assert all(row.g1 < row.g2 < 0.0 for row in rows)

    def test_empty_table(self):
        """Test that no sample sizes is an error."""
        with pytest.raises(DomainError):
            critical_value_table([], 1, 0.05, 1000, 1)


class TestUniformityTest:
    """Test suite for the two-sided uniformity decision."""

    def test_decision_by_interval(self):
        """Test accept inside [g1, g2] and reject outside."""
        sample = make_sample(np.linspace(0.03, 0.97, 20))
        stat = empirical_wcpj(sample, 1)
        cfg = TestConfig(n=20, m=1)

        inside = CriticalValues(g1=stat - 0.01, g2=stat + 0.01, config=cfg)
        below = CriticalValues(g1=stat + 0.001, g2=stat + 0.01, config=cfg)
        above = CriticalValues(g1=stat - 0.01, g2=stat - 0.001, config=cfg)

        assert not uniformity_test(sample, inside).reject
        assert uniformity_test(sample, below).reject
        assert uniformity_test(sample, above).reject
        assert uniformity_test(sample, inside).statistic == stat

    def test_published_row(self, row_n20):
        """Test an evenly spread sample against the n = 20 row."""
        sample = make_sample((i + 0.5) / 20 for i in range(20))

        decision = uniformity_test(sample, row_n20)

        assert row_n20.g1 <= decision.statistic <= row_n20.g2
        assert not decision.reject

    def test_constant_sample_rejected(self, row_n20):
        """Test that a constant sample has statistic 0 > g2."""
        decision = uniformity_test(make_sample([0.5] * 20), row_n20)

        assert decision.statistic == 0.0
        assert decision.reject
        assert not decision.support_violation

    def test_support_violation(self, row_n20):
        """Test that a value above 1 forces a rejection."""
        values = [(i + 0.5) / 20 for i in range(19)] + [1.5]

        decision = uniformity_test(make_sample(values), row_n20)

        assert decision.reject
        assert decision.support_violation

    def test_size_mismatch_warns(self, row_n20, caplog):
        """Test that a different sample size logs a warning."""
        sample = make_sample((i + 0.5) / 25 for i in range(25))

        with caplog.at_level(logging.WARNING, logger="extropy.montecarlo"):
            uniformity_test(sample, row_n20)

        assert "differs" in caplog.text

    def test_size_mismatch_strict(self, row_n20):
        """Test that strict mode raises on a size mismatch."""
        sample = make_sample((i + 0.5) / 25 for i in range(25))

        with pytest.raises(SampleSizeMismatchError):
            uniformity_test(sample, row_n20, strict=True)


class TestPower:
    """Test suite for power estimation."""

    def test_support_outside_unit_interval(self):
        """Test that an alternative on [0, 2] is refused."""
        cv = critical_values(TestConfig(n=20, reps=1000))

        with pytest.raises(SupportViolationError):
            power(Uniform(a=0.0, b=2.0), cv.config, cv)
        with pytest.raises(SupportViolationError):
            power_table(Uniform(a=0.0, b=2.0), [20], 1, 0.05, 1000, 1)

    def test_mismatched_sample_size(self, unit_uniform):
        """Test that critical values for another n are refused."""
        cv = critical_values(TestConfig(n=20, reps=1000))

        with pytest.raises(SampleSizeMismatchError):
            power(unit_uniform, TestConfig(n=200, reps=1000), cv)

    @pytest.mark.parametrize(("m", "alpha"), [(2, 0.05), (1, 0.10)])
    def test_mismatched_order_or_level(self, unit_uniform, m, alpha):
        """Test that critical values for another m or alpha are refused."""
        cv = critical_values(TestConfig(n=20, m=1, alpha=0.05, reps=1000))

        with pytest.raises(DomainError):
            power(unit_uniform, TestConfig(n=20, m=m, alpha=alpha, reps=1000), cv)

    def test_size_calibrated(self, unit_uniform):
        """Test that the rejection rate under the null is near alpha."""
        cv = critical_values(TestConfig(n=30, m=1, reps=20_000, master_seed=41))
        cfg = TestConfig(n=30, m=1, reps=4000, master_seed=41)

        size = power(unit_uniform, cfg, cv)
        tolerance = 3 * math.hypot(size_standard_error(0.05, 4000), size_standard_error(0.05, 20_000))

        assert size == pytest.approx(0.05, abs=tolerance)

    def test_power_table_rows(self):
        """Test row contents of a small power table."""
        rows = power_table(Beta(alpha=2.0, beta=5.0), [20, 30], 1, 0.05, 1000, 8)

        assert [row.n for row in rows] == [20, 30]
        assert all(0.0 <= row.power <= 1.0 for row in rows)
        assert rows[0].alt == "beta:2,5"

    def test_skewed_alternative_detected(self):
        """Test that Beta(2, 5) is rejected far more often than alpha."""
        row = power_table(Beta(alpha=2.0, beta=5.0), [50], 1, 0.05, 2000, 8)[0]

        assert row.power > 0.5


class TestCsv:
    """Test suite for table files."""

    @pytest.fixture
    def rows(self) -> list[TableRow]:
        return [
            TableRow(n=20, m=1, alpha=0.05, reps=100000, seed=1, g1=-0.1448912345, g2=-0.066024),
            TableRow(n=30, m=1, alpha=0.05, reps=100000, seed=1, g1=-0.144001, g2=-0.07856),
        ]

    def test_table_format(self, rows):
        """Test header and six-decimal formatting."""
        buffer = io.StringIO()
        write_table_csv(rows, buffer)

        lines = buffer.getvalue().splitlines()
        assert lines[0] == "n,m,alpha,reps,seed,g1,g2"
        assert lines[1] == "20,1,0.050000,100000,1,-0.144891,-0.066024"
        assert len(lines) == 3

    def test_power_format(self):
        """Test the power header and one row."""
        buffer = io.StringIO()
        write_power_csv(
            [PowerRow(alt="beta:1.5,1.5", n=40, m=1, alpha=0.05, reps=100000, seed=1, power=0.08527)],
            buffer,
        )

        # the distribution string contains a comma and is quoted
        assert buffer.getvalue() == (
            'alt,n,m,alpha,reps,seed,power\n"beta:1.5,1.5",40,1,0.050000,100000,1,0.085270\n'
        )

    def test_read_back(self, rows, tmp_path):
        """Test that a written table is read back row by row."""
        path = tmp_path / "table.csv"
        write_table_csv(rows, path)

        loaded = read_table_csv(path)

        assert [row.n for row in loaded] == [20, 30]
        assert loaded[0].g1 == pytest.approx(-0.144891, abs=1e-12)

    def test_byte_identical(self, tmp_path):
        """Test that one seed produces byte-identical files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_table_csv(critical_value_table([20], 1, 0.05, 1000, 5), first)
        write_table_csv(critical_value_table([20], 1, 0.05, 1000, 5), second)

        assert first.read_bytes() == second.read_bytes()

    def test_bad_header(self, tmp_path):
        """Test that a file without the expected header is rejected."""
        path = tmp_path / "bad.csv"
        path.write_text("n,g1\n20,-0.1\n")

        with pytest.raises(ValueError):
            read_table_csv(path)

    def test_find_row(self, rows):
        """Test lookup by (n, m, alpha) and a missing row."""
        assert find_table_row(rows, 30, 1, 0.05).g2 == -0.07856
        with pytest.raises(DomainError):
            find_table_row(rows, 40, 1, 0.05)


@pytest.mark.slow
class TestPublishedTables:
    """Test suite reproducing published tables at full replication counts."""

    @pytest.mark.parametrize(("m", "table"), [(1, TABLE_M1), (2, TABLE_M2)])
    def test_critical_values(self, m, table):
        """Test critical values within 0.003 of the published ones."""
        rows = critical_value_table(sorted(table), m, 0.05, 100_000, 20230517)

        for row in rows:
            g1, g2 = table[row.n]
            assert row.g1 == pytest.approx(g1, abs=0.003)
            assert row.g2 == pytest.approx(g2, abs=0.003)

    def test_power_symmetric_beta(self):
        """Test power against Beta(1.5, 1.5) within 0.02."""
        rows = power_table(Beta(alpha=1.5, beta=1.5), sorted(POWER_BETA_15), 1, 0.05, 100_000, 20230517)

        for row in rows:
            assert row.power == pytest.approx(POWER_BETA_15[row.n], abs=0.02)

    def test_size_null_beta(self):
        """Test the Beta(1, 1) rejection rate within 0.015."""
        rows = power_table(Beta(alpha=1.0, beta=1.0), sorted(SIZE_NULL_BETA), 1, 0.05, 100_000, 20230517)

        for row in rows:
            assert row.power == pytest.approx(SIZE_NULL_BETA[row.n], abs=0.015)
