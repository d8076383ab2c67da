"""Tests for the explicit-formula reconstruction of J, pi and psi."""

import math
import sys
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from riemann_zeros.errors import DomainError, TableTooSmallError
from riemann_zeros.models import ZeroMethod, ZeroRecord
from riemann_zeros.precision import PrecisionContext
from riemann_zeros.prime_reconstruct import (
    j_from_zeros,
    j_oracle,
    pi_from_j,
    pi_oracle,
    psi_from_zeros,
    psi_oracle,
    reconstruct_comparison,
    reconstruct_figure,
    reconstruction_error,
    series_for,
    tail_integral,
)
from riemann_zeros.special_functions import build_arithmetic_tables
from riemann_zeros.zero_solver import seed_record


@pytest.fixture(scope="module")
def ctx():
    return PrecisionContext(20)


@pytest.fixture(scope="module")
def tables():
    return build_arithmetic_tables(200)


def _zeros(count):
    with mpmath.workdps(25):
        return [
            ZeroRecord(n=n, y=mpmath.nstr(mpmath.zetazero(n).imag, 20), method=ZeroMethod.IMPORTED)
            for n in range(1, count + 1)
        ]


@pytest.fixture(scope="module")
def zeros10():
    return _zeros(10)


class TestSmoothTerms:
    @pytest.mark.parametrize("x", [1.5, 2.0, 10.0, 100.0])
    def test_tail_integral(self, x):
        with mpmath.workdps(20):
            expected = mpmath.quad(lambda t: 1 / (t * (t ** 2 - 1) * mpmath.log(t)), [x, mpmath.inf])
        assert tail_integral(x) == pytest.approx(float(expected), rel=1e-9)

    def test_tail_integral_domain(self):
        with pytest.raises(DomainError):
            tail_integral(1.0)

    def test_j_without_zeros(self, ctx):
        with mpmath.workdps(20):
            expected = mpmath.li(100) - math.log(2)
        expected = float(expected) + tail_integral(100.0)
        assert j_from_zeros(100.0, [], ctx) == pytest.approx(expected, rel=1e-12)

    def test_psi_without_zeros(self, ctx):
        x = 10.0
        expected = x - math.log(2 * math.pi) - 0.5 * math.log(1 - x ** -2)
        assert psi_from_zeros(x, [], ctx) == pytest.approx(expected, rel=1e-12)

    def test_domain(self, ctx):
        with pytest.raises(DomainError):
            j_from_zeros(1.0, [], ctx)
        with pytest.raises(DomainError):
            psi_from_zeros(0.5, [], ctx)


class TestOracles:
    def test_pi_and_psi(self, tables):
        assert pi_oracle(100, tables) == 25
        assert pi_oracle(1.5, tables) == 0
        assert psi_oracle(10.5, tables) == pytest.approx(math.log(2520))

    def test_j_is_exact(self, tables):
        assert j_oracle(100, tables) == Fraction(428, 15)

    @pytest.mark.parametrize("x", [10, 57.5, 99.5, 150.5])
    def test_mobius_inversion_is_exact(self, tables, x):
        def j(t):
            return j_oracle(t, tables)
        assert pi_from_j(x, j, tables) == pi_oracle(x, tables)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_inversion_recovers_a_random_function(self, tables, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.uniform(-2, 2, 2)

        def g(t):
            return a * t + b * math.log(t) if t >= 2 else 0.0

        def j(t):
            total, m = 0.0, 1
            while t ** (1.0 / m) >= 2:
                total += g(t ** (1.0 / m)) / m
                m += 1
            return total

        for x in rng.uniform(2.5, 150, 5):
            assert float(pi_from_j(x, j, tables)) == pytest.approx(g(x), rel=1e-9, abs=1e-9)

    @pytest.mark.slow
    def test_inversion_is_exact_at_every_half_integer(self):
        limit = 10 ** 4
        big = build_arithmetic_tables(limit)

        def j(t):
            return j_oracle(t, big)
        for k in range(2, limit):
            x = k + 0.5
            assert pi_from_j(x, j, big) == pi_oracle(x, big), x

    def test_inversion_needs_table(self):
        small = build_arithmetic_tables(3)
        with pytest.raises(TableTooSmallError):
            pi_from_j(1e6, lambda t: 0, small)

    def test_inversion_domain(self, tables):
        with pytest.raises(DomainError):
            pi_from_j(1.5, lambda t: 0, tables)


class TestReconstruction:
    def test_zeros_improve_j(self, ctx, tables, zeros10):
        smooth = reconstruction_error([], ctx, tables, x_hi=30.0, what="j")
        with_zeros = reconstruction_error(zeros10, ctx, tables, x_hi=30.0, what="j")
        assert with_zeros["l2"] < smooth["l2"]

    def test_figure(self, ctx, tables, zeros10):
        rec = reconstruct_figure(2, 30, 15, zeros10, ctx, tables)
        assert len(rec.xs) == 15
        assert rec.xs[0] == 2 and rec.xs[-1] == 30
        assert rec.zero_count == 10
        assert rec.source == ZeroMethod.IMPORTED
        assert rec.pi_true[-1] == 10
        frame = rec.to_frame()
        assert list(frame.columns) == ["x", "j", "j_true", "pi", "pi_true", "psi", "psi_true"]

    def test_series(self, ctx, tables, zeros10):
        rec = reconstruct_figure(2, 30, 5, zeros10, ctx, tables)
        rows = series_for("psi", rec)
        assert len(rows) == 5
        assert rows[-1][0] == 30
        assert rows[-1][2] == pytest.approx(psi_oracle(30, tables))
        with pytest.raises(DomainError):
            series_for("theta", rec)

    def test_pi_error_shrinks_with_zeros(self, ctx, tables, zeros10):
        smooth = reconstruction_error([], ctx, tables, x_hi=30.0)
        with_zeros = reconstruction_error(zeros10, ctx, tables, x_hi=30.0)
        assert with_zeros["samples"] == 28
        assert with_zeros["l2"] < smooth["l2"]

    def test_seeds_are_worse_than_solved_zeros(self, ctx, tables, zeros10):
        seeds = [seed_record(n, ctx) for n in range(1, 11)]
        seeded = reconstruction_error(seeds, ctx, tables, x_hi=30.0)
        solved = reconstruction_error(zeros10, ctx, tables, x_hi=30.0)
        assert solved["l2"] < seeded["l2"]

    def test_comparison_lengths(self, ctx, tables, zeros10):
        seeds = [seed_record(n, ctx) for n in range(1, 4)]
        with pytest.raises(DomainError):
            reconstruct_comparison(2, 30, 5, seeds, zeros10, ctx, tables)

    def test_comparison(self, ctx, tables, zeros10):
        seeds = [seed_record(n, ctx) for n in range(1, 11)]
        seeded, solved = reconstruct_comparison(2, 30, 5, seeds, zeros10, ctx, tables)
        assert seeded.source == ZeroMethod.LAMBERT_SEED
        assert solved.source == ZeroMethod.IMPORTED
        assert seeded.pi_true == solved.pi_true

    def test_range_checks(self, ctx, tables, zeros10):
        with pytest.raises(TableTooSmallError):
            reconstruct_figure(2, 500, 5, zeros10, ctx, tables)
        with pytest.raises(DomainError):
            reconstruct_figure(1, 30, 5, zeros10, ctx, tables)
        with pytest.raises(DomainError):
            reconstruct_figure(2, 30, 1, zeros10, ctx, tables)
        with pytest.raises(DomainError):
            reconstruction_error(zeros10, ctx, tables, x_hi=30.0, what="theta")

    @pytest.mark.slow
    def test_fifty_zeros_up_to_100(self, ctx, tables):
        zeros = _zeros(50)
        pi_error = reconstruction_error(zeros, ctx, tables, x_hi=100.0)
        smooth = reconstruction_error([], ctx, tables, x_hi=100.0)
        assert pi_error["max"] < 1.0
        assert pi_error["l2"] < smooth["l2"]
        psi_error = reconstruction_error(zeros, ctx, tables, x_hi=100.0, what="psi")
        assert psi_error["samples"] == 98
