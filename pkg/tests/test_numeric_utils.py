import math

import numpy as np
import pytest

from src.utils.numeric_utils import exp_or_inf, log1mexp, log_diff_exp, log_one_minus_power, power_cdf_log


class TestLog1mexp:
    def test_small_argument(self):
        assert log1mexp(1e-20) == pytest.approx(math.log(1e-20), rel=1e-14)

    def test_large_argument(self):
        assert log1mexp(50.0) == pytest.approx(-math.exp(-50.0), rel=1e-12)

    def test_vectorized(self):
        a = np.array([0.1, 1.0, 10.0])
        np.testing.assert_allclose(log1mexp(a), np.log(1.0 - np.exp(-a)), rtol=1e-12)

    def test_edges(self):
        assert log1mexp(0.0) == -math.inf
        assert log1mexp(math.inf) == 0.0


class TestLogDiffExp:
    def test_value(self):
        assert log_diff_exp(math.log(3.0), 0.0) == pytest.approx(math.log(2.0), rel=1e-14)

    def test_equal_arguments(self):
        assert log_diff_exp(-5.0, -5.0) == -math.inf

    def test_subtracting_nothing(self):
        assert log_diff_exp(-700.0, -math.inf) == -700.0


class TestOneMinusPower:
    def test_matches_the_direct_form(self):
        direct = math.log(-math.expm1(100 * math.log1p(-1e-4)))
        assert log_one_minus_power(math.log(1e-4), 100) == pytest.approx(direct, rel=1e-13)

    def test_far_below_the_float_range(self):
        assert log_one_minus_power(-1000.0, 10**6) == pytest.approx(math.log(1e6) - 1000.0, rel=1e-14)

    def test_saturates_at_certainty(self):
        assert log_one_minus_power(math.log(0.5), 10**4) == 0.0

    def test_power_cdf_log(self):
        assert power_cdf_log(math.log(0.25), 3) == pytest.approx(3.0 * math.log(0.75), rel=1e-14)
        assert power_cdf_log(0.0, 5) == -math.inf


class TestExpOrInf:
    def test_saturates(self):
        assert exp_or_inf(709.0) == math.exp(709.0)
        assert exp_or_inf(710.0) == math.inf
        assert exp_or_inf(math.inf) == math.inf
        assert exp_or_inf(-math.inf) == 0.0
