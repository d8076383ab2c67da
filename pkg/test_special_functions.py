"""Tests for log-gamma, theta, Lambert W, Ei and the sieve tables."""

import math
import sys
from pathlib import Path

import mpmath
import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from riemann_zeros.errors import DomainError, PoleError, ResourceLimitError, TableTooSmallError
from riemann_zeros.precision import PrecisionContext
from riemann_zeros.special_functions import (
    bernoulli_number,
    bernoulli_ratio,
    build_arithmetic_tables,
    exp_integral_ei,
    lambert_w0,
    log_gamma,
    log_integral,
    prime_counts,
    riemann_siegel_theta,
    sieve_primes,
    theta_asymptotic,
)


@pytest.fixture
def ctx():
    return PrecisionContext(30)


def _close(a, b, rel):
    return abs(complex(a) - complex(b)) <= rel * max(1.0, abs(complex(b)))


class TestBernoulli:
    def test_first_values(self, ctx):
        assert bernoulli_number(1, ctx) == ctx.mpf(1) / 6
        assert bernoulli_number(2, ctx) == -ctx.mpf(1) / 30
        assert bernoulli_number(6, ctx) == ctx.mpf(691) / -2730

    def test_ratio_divides_by_factorial(self, ctx):
        assert abs(bernoulli_ratio(2, ctx) - (-ctx.mpf(1) / 30) / 24) < ctx.tolerance

    def test_index_zero_rejected(self, ctx):
        with pytest.raises(DomainError):
            bernoulli_number(0, ctx)


class TestLogGamma:
    @pytest.mark.parametrize("z", [
        complex(0.25, 7.0),
        complex(0.25, 50.0),
        complex(3.5, -2.0),
        complex(-2.5, 0.5),
        complex(0.5, 0.0),
        complex(10.0, 0.0),
    ])
    def test_matches_mpmath(self, ctx, z):
        with mpmath.workdps(40):
            expected = mpmath.loggamma(z)
        assert _close(log_gamma(z, ctx), expected, 1e-25)

    def test_real_argument(self, ctx):
        # log Gamma(5) = log 24
        assert abs(log_gamma(5, ctx).real - ctx.mp.log(24)) < 1e-25

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, ctx, z):
        with pytest.raises(PoleError):
            log_gamma(z, ctx)

    def test_branch_is_continuous_in_t(self, ctx):
        # Im log Gamma(1/4 + it/2) has no 2 pi jumps as t grows
        previous = None
        for t in range(1, 200, 7):
            value = log_gamma(ctx.mpc(0.25, t / 2), ctx).imag
            if previous is not None:
                assert abs(value - previous) < 20
            previous = value


class TestTheta:
    @pytest.mark.parametrize("t", [1, 14.134725, 100, 1000, 74920.83])
    def test_matches_siegeltheta(self, ctx, t):
        with mpmath.workdps(40):
            expected = mpmath.siegeltheta(t)
        assert abs(riemann_siegel_theta(t, ctx) - expected) < 1e-22 * max(1, abs(expected))

    def test_zero_and_negative(self, ctx):
        assert riemann_siegel_theta(0, ctx) == 0
        with pytest.raises(DomainError):
            riemann_siegel_theta(-1, ctx)

    def test_increasing_above_its_minimum(self, ctx):
        values = [riemann_siegel_theta(t, ctx) for t in np.linspace(7, 1000, 200)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_asymptotic_form_at_height_100(self, ctx):
        assert abs(theta_asymptotic(100, ctx) - riemann_siegel_theta(100, ctx)) < 1e-10

    def test_asymptotic_needs_positive_t(self, ctx):
        with pytest.raises(DomainError):
            theta_asymptotic(0, ctx)


class TestLambertW:
    @pytest.mark.parametrize("x", [1e-5, 0.5, 1, 10, 1e6, -0.2, -0.36])
    def test_matches_mpmath(self, ctx, x):
        with mpmath.workdps(40):
            expected = mpmath.lambertw(x).real
        assert abs(lambert_w0(x, ctx) - expected) < 1e-25 * max(1, abs(expected))

    @pytest.mark.parametrize("x", list(10.0 ** np.random.default_rng(3).uniform(-3, 50, 8)))
    def test_random_log_uniform(self, ctx, x):
        x = ctx.mpf(x)
        w = lambert_w0(x, ctx)
        assert abs(w * ctx.mp.exp(w) - x) / x < 1e-25

    def test_huge_argument(self):
        ctx = PrecisionContext(60)
        x = ctx.mpf(10) ** 200
        w = lambert_w0(x, ctx)
        assert abs(w * ctx.mp.exp(w) - x) / x < ctx.mpf(10) ** -55

    def test_special_points(self, ctx):
        assert lambert_w0(0, ctx) == 0
        assert lambert_w0(-1 / ctx.mp.e, ctx) == -1

    def test_below_branch_point(self, ctx):
        with pytest.raises(DomainError):
            lambert_w0(-1, ctx)


class TestExponentialIntegral:
    @pytest.mark.parametrize("x", [0.1, 1, 2.5, 10, -1, -3])
    def test_real_matches_mpmath(self, ctx, x):
        with mpmath.workdps(40):
            expected = mpmath.ei(x)
        value = exp_integral_ei(x, ctx)
        assert value.imag == 0
        assert abs(value - expected) < 1e-24 * max(1, abs(expected))

    def test_complex_series_region(self, ctx):
        z = complex(0.5, 14.134725) * math.log(10)
        with mpmath.workdps(40):
            expected = mpmath.ei(z)
        assert _close(exp_integral_ei(ctx.mpc(z.real, z.imag), ctx), expected, 1e-22)

    def test_complex_asymptotic_region(self, ctx):
        z = complex(0.5, 100.0) * math.log(50)
        with mpmath.workdps(40):
            expected = mpmath.ei(z)
        assert _close(exp_integral_ei(ctx.mpc(z.real, z.imag), ctx), expected, 1e-20)

    def test_conjugate_pair_is_real(self, ctx):
        z = ctx.mpc(0.5, 21.022) * ctx.mp.log(30)
        pair = exp_integral_ei(z, ctx) + exp_integral_ei(ctx.mp.conj(z), ctx)
        assert abs(pair.imag) < 1e-25

    def test_pole(self, ctx):
        with pytest.raises(PoleError):
            exp_integral_ei(0, ctx)

    def test_log_integral(self, ctx):
        with mpmath.workdps(40):
            expected = mpmath.li(100)
        assert abs(log_integral(100, ctx) - expected) < 1e-24
        with pytest.raises(PoleError):
            log_integral(1, ctx)
        with pytest.raises(DomainError):
            log_integral(-2, ctx)


class TestSieve:
    def test_small_primes(self):
        assert list(np.flatnonzero(sieve_primes(30))) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_prime_counts(self):
        counts = prime_counts(1000)
        assert counts[10] == 4
        assert counts[100] == 25
        assert counts[1000] == 168

    def test_limits(self):
        with pytest.raises(DomainError):
            sieve_primes(1)
        with pytest.raises(ResourceLimitError):
            sieve_primes(1000, cap=100)


class TestArithmeticTables:
    @pytest.fixture(scope="class")
    def tables(self):
        return build_arithmetic_tables(200)

    def test_mobius(self, tables):
        assert [tables.mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
        assert tables.mobius(30) == -1
        assert tables.mobius(0) == 0

    def test_mertens_sum(self, tables):
        assert int(np.sum(tables.mobius_values[1:101])) == 1

    def test_von_mangoldt(self, tables):
        assert tables.von_mangoldt(8) == pytest.approx(math.log(2))
        assert tables.von_mangoldt(9) == pytest.approx(math.log(3))
        assert tables.von_mangoldt(6) == 0.0
        assert tables.von_mangoldt(1) == 0.0
        assert tables.prime_power_base(125) == 5

    def test_prefix_sums(self, tables):
        assert tables.prime_count(100) == 25
        assert tables.chebyshev_psi(10) == pytest.approx(math.log(2520))

    def test_beyond_limit(self, tables):
        with pytest.raises(TableTooSmallError):
            tables.mobius(201)

    def test_von_mangoldt_divisor_sum_is_log(self):
        limit = 10 ** 4
        tables = build_arithmetic_tables(limit)
        sums = np.zeros(limit + 1)
        for d in range(1, limit + 1):
            sums[d::d] += tables.von_mangoldt_values[d]
        assert np.allclose(sums[1:], np.log(np.arange(1, limit + 1)), rtol=0, atol=1e-9)

    def test_mobius_divisor_sum(self, tables):
        sums = np.zeros(tables.limit + 1, dtype=np.int64)
        for d in range(1, tables.limit + 1):
            sums[d::d] += tables.mobius_values[d]
        assert sums[1] == 1
        assert not sums[2:].any()

    def test_arrays_are_read_only(self, tables):
        with pytest.raises(ValueError):
            tables.mobius_values[1] = 5
