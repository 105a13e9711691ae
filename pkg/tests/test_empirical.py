"""Tests for samples, the empirical cdf and the plug-in estimator."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from extropy.distributions import Uniform
from extropy.empirical import (
    Sample,
    ecdf,
    empirical_cpj,
    empirical_wcpj,
    empirical_wcpj_oracle,
    make_sample,
    read_sample_file,
    wcpj_statistic,
)
from extropy.exceptions import (
    EmptySampleError,
    NegativeValueError,
    NonFiniteValueError,
    SampleError,
)
from extropy.streams import derive_stream

WORKED = [0.2, 0.4, 0.6, 0.8, 1.0]


class TestSample:
    """Test suite for sample validation."""

    def test_sorted_on_construction(self):
        """Test that make_sample sorts its input."""
        sample = make_sample([0.5, 0.1, 0.3])

        assert sample.values == (0.1, 0.3, 0.5)
        assert sample.n == 3

    def test_empty(self):
        """Test that no observations raise EmptySampleError."""
        with pytest.raises(EmptySampleError):
            make_sample([])

    def test_negative_reports_index(self):
        """Test that a negative value reports its position."""
        with pytest.raises(NegativeValueError) as excinfo:
            make_sample([0.1, 0.2, -0.3])

        assert excinfo.value.index == 2
        assert excinfo.value.value == -0.3

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite(self, bad):
        """Test that NaN and infinity raise NonFiniteValueError."""
        with pytest.raises(NonFiniteValueError):
            make_sample([0.1, bad])

    def test_errors_are_sample_errors(self):
        """Test the error hierarchy."""
        with pytest.raises(SampleError):
            make_sample([-1.0])
        with pytest.raises(ValueError):
            make_sample([])

    def test_direct_construction_checks_order(self):
        """Test that the model rejects unsorted or negative values."""
        with pytest.raises(ValidationError):
            Sample(values=(0.3, 0.1))
        with pytest.raises(ValidationError):
            Sample(values=(-0.1, 0.1))

    def test_array_is_read_only(self):
        """Test that the array view cannot be mutated."""
        arr = make_sample(WORKED).array

        with pytest.raises(ValueError):
            arr[0] = 5.0


class TestEcdf:
    """Test suite for the empirical cdf."""

    def test_right_continuous(self):
        """Test values at, between and outside observations."""
        sample = make_sample(WORKED)

        assert ecdf(sample, 0.1) == 0.0
        assert ecdf(sample, 0.2) == pytest.approx(0.2)
        assert ecdf(sample, 0.5) == pytest.approx(0.4)
        assert ecdf(sample, 1.0) == 1.0
        assert ecdf(sample, 3.0) == 1.0

    def test_ties(self):
        """Test that tied observations jump together."""
        sample = make_sample([0.5, 0.5, 0.7])

        assert ecdf(sample, 0.5) == pytest.approx(2 / 3)


class TestEstimator:
    """Test suite for the plug-in estimator."""

    def test_worked_example(self):
        """Test -1/4 * sum of (X_{i+1}^2 - X_i^2)(i/5)^2 = -0.092."""
        sample = make_sample(WORKED)

        assert empirical_wcpj(sample, 1) == pytest.approx(-0.092, abs=1e-12)
        assert empirical_wcpj_oracle(sample, 1) == pytest.approx(-0.092, abs=1e-12)

    def test_degenerate_samples(self):
        """Test that one value or all-equal values give exactly 0."""
        assert empirical_wcpj(make_sample([0.4]), 1) == 0.0
        assert empirical_wcpj(make_sample([0.3] * 20), 2) == 0.0

    def test_two_distinct_values_negative(self):
        """Test strict negativity with two distinct values."""
        assert empirical_wcpj(make_sample([0.3, 0.3, 0.6]), 1) < 0.0

    def test_cpj_is_order_zero(self):
        """Test the order-zero shortcut."""
        sample = make_sample(WORKED)

        assert empirical_cpj(sample) == empirical_wcpj(sample, 0)

    def test_negative_order(self):
        """Test that a negative order is rejected."""
        with pytest.raises(ValueError):
            empirical_wcpj(make_sample(WORKED), -1)

    def test_matches_step_integral(self):
        """Test the sum against exact piecewise integration on 1000 random samples."""
        for index in range(1000):
            generator = derive_stream(99, index).generator
            n = int(generator.integers(2, 51))
            sample = make_sample(generator.uniform(0.0, 1.0, n))
            for m in (0, 1, 2):
                assert abs(empirical_wcpj(sample, m) - empirical_wcpj_oracle(sample, m)) < 1e-12

    def test_step_integral_with_ties(self):
        """Test the oracle on tied observations."""
        sample = make_sample([0.1, 0.4, 0.4, 0.4, 0.9, 0.9])

        for m in (0, 1, 3):
            assert empirical_wcpj(sample, m) == pytest.approx(empirical_wcpj_oracle(sample, m), abs=1e-14)

    @pytest.mark.parametrize("factor", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_scale_homogeneity(self, factor, m):
        """Test estimator(a * s) = a^(m+1) * estimator(s)."""
        sample = make_sample(derive_stream(5, 0).generator.uniform(0.0, 1.0, 40))
        expected = factor ** (m + 1) * empirical_wcpj(sample, m)

        assert empirical_wcpj(sample.scaled(factor), m) == pytest.approx(expected, rel=1e-10)

    def test_statistic_on_raw_array(self):
        """Test the unvalidated hot path on a sorted array."""
        assert wcpj_statistic(np.array(WORKED), 1) == pytest.approx(-0.092, abs=1e-12)
        assert wcpj_statistic(np.array([0.5]), 1) == 0.0

    def test_consistency(self):
        """Test that the mean over 100 samples of 5000 is within 0.005 of -1/8."""
        dist = Uniform(a=0.0, b=1.0)
        values = [
            empirical_wcpj(make_sample(dist.sample(derive_stream(20230517, r), 5000)), 1)
            for r in range(100)
        ]

        assert abs(float(np.mean(values)) + 0.125) < 0.005


class TestSampleFile:
    """Test suite for reading sample files."""

    def test_plain_file(self, sample_file):
        """Test one value per line."""
        sample = read_sample_file(sample_file(WORKED))

        assert sample.values == tuple(WORKED)

    def test_header_and_blank_lines(self, sample_file):
        """Test that a '#' header and blank lines are skipped."""
        path = sample_file(["0.5", "", "0.25", "  "], header="# draws from U(0, 1)")

        assert read_sample_file(path).values == (0.25, 0.5)

    def test_bad_line_reports_position(self, sample_file):
        """Test that a non-numeric line is reported with its 1-based line number."""
        path = sample_file(["0.5", "abc"], header="# header")

        with pytest.raises(ValueError, match=r":3: not a number"):
            read_sample_file(path)

    def test_comment_after_first_line(self, sample_file):
        """Test that only the first line may be a header."""
        path = sample_file(["0.5", "# late comment"])

        with pytest.raises(ValueError, match=r":2:"):
            read_sample_file(path)

    def test_negative_value(self, sample_file):
        """Test that sample contract violations surface as SampleError."""
        with pytest.raises(NegativeValueError):
            read_sample_file(sample_file(["0.5", "-0.1"]))

    def test_empty_file(self, sample_file):
        """Test that a header-only file raises EmptySampleError."""
        with pytest.raises(EmptySampleError):
            read_sample_file(sample_file([], header="# nothing"))

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises OSError."""
        with pytest.raises(OSError):
            read_sample_file(tmp_path / "absent.txt")

    def test_thousands_separator_rejected(self, sample_file):
        """Test that thousands separators are not accepted."""
        with pytest.raises(ValueError):
            read_sample_file(sample_file(["1,000.5"]))

    def test_non_finite_text(self, sample_file):
        """Test that 'nan' parses but fails the sample contract."""
        with pytest.raises(NonFiniteValueError):
            read_sample_file(sample_file(["0.5", "nan"]))

    def test_precision_kept(self, sample_file):
        """Test that values are parsed without rounding."""
        assert read_sample_file(sample_file(["0.1234567890123"])).values == (0.1234567890123,)

    def test_scientific_notation(self, sample_file):
        """Test exponent notation."""
        assert math.isclose(read_sample_file(sample_file(["2.5e-1"])).values[0], 0.25)
