"""Tests for the Lambert seed, the asymptotic and exact zero solvers and zero counting."""

import sys
import warnings
from functools import lru_cache
from pathlib import Path

import mpmath
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from riemann_zeros.errors import (
    ConvergenceError,
    DomainError,
    MisindexError,
    NearZeroWarning,
    ResourceLimitError,
)
from riemann_zeros.models import SolverConfig, ZeroMethod
from riemann_zeros.precision import PrecisionContext
from riemann_zeros.special_functions import riemann_siegel_theta
from riemann_zeros.utils import agreed_digits, integer_digits
from riemann_zeros.zero_solver import (
    CountingVariant,
    _check_vanishes,
    _verify_index,
    asymptotic_lhs,
    count_zeros_smooth,
    exact_lhs,
    gram_point,
    lambert_seed,
    local_spacing,
    seed_record,
    seed_vs_solved,
    solve_range,
    solve_zero,
    solve_zero_asymptotic,
    solve_zero_exact,
)


PRECISE_ZEROS = {
    1: "14.1347251417346937904572519835624702707842571156992431756855",
    2: "21.0220396387715549926284795938969027773343405249027817546295",
    3: "25.0108575801456887632137909925628218186595496725579966724965",
    4: "30.4248761258595132103118975305840913201815600237154401809621",
    5: "32.9350615877391896906623689640749034888127156035170390092800",
    126: "279.229250927745189228409880451955359283492637405561293594727",
}

ZERO_1000 = (
    "1419.42248094599568646598903807991681923210060106416601630469081468460867641759301041791134329117920998748098423226056011874139744795265063706725083428898315184544768825259311594423942519548468770816394625633238145779152841855934315118793290577642799801273605240944611733704181896"
)


@pytest.fixture
def ctx():
    return PrecisionContext(30)


@pytest.fixture
def cfg():
    return SolverConfig()


def _within(value, expected, significant, ulps=5):
    """True if value matches the decimal string expected to ``significant`` digits."""
    ctx = PrecisionContext(max(significant + 10, 15))
    value = ctx.mpf(value)
    expected = ctx.mpf(expected)
    ulp = ctx.mpf(10) ** (integer_digits(expected) - significant)
    return abs(value - expected) <= ulps * ulp


@lru_cache(maxsize=None)
def _reference(n, dps=40):
    """Ordinate of the n-th zero from mpmath, as a decimal string."""
    with mpmath.workdps(dps):
        return mpmath.nstr(mpmath.zetazero(n).imag, dps - 5)


class TestLambertSeed:
    @pytest.mark.parametrize("n, expected", [
        (1, 14.52),
        (10, 50.23),
        (100, 235.99),
        (1000, 1419.52),
        (10 ** 4, 9877.63),
        (10 ** 5, 74920.89),
        (10 ** 6, 600269.64),
    ])
    def test_seed_table(self, ctx, n, expected):
        assert round(float(lambert_seed(n, ctx)), 2) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("n, expected, digits", [
        (10 ** 22 + 1, "1.370919909931995308226770e21", 25),
        (10 ** 50, "5.741532903784313725642221053588442131126693322343461e48", 52),
        (
            10 ** 100,
            "2.80690383842894069903195445838256400084548030162846045192360059224930922349073043060335653109252473234e98",
            102,
        ),
    ])
    def test_seed_at_huge_index(self, n, expected, digits):
        ctx = PrecisionContext(digits + 20)
        seed = lambert_seed(n, ctx)
        relative = abs(seed - ctx.mpf(expected)) / ctx.mpf(expected)
        assert relative < ctx.mpf(10) ** (1 - digits)

    @pytest.mark.parametrize("n", [0, -3, 1.5])
    def test_invalid_index(self, ctx, n):
        with pytest.raises(DomainError):
            lambert_seed(n, ctx)

    def test_seed_is_root_without_arg_term(self, ctx):
        seed = lambert_seed(500, ctx)
        assert abs(asymptotic_lhs(seed, 500, 1e-9, ctx, with_arg=False)) < 1e-30

    def test_seed_record(self, ctx):
        record = seed_record(1, ctx)
        assert record.method == ZeroMethod.LAMBERT_SEED
        assert record.digits_certified == 0
        assert record.value == pytest.approx(14.52, abs=0.005)

    def test_seed_beats_first_gram_point(self, ctx):
        y1 = ctx.mpf(PRECISE_ZEROS[1])
        assert abs(gram_point(0, ctx) - y1) > abs(lambert_seed(1, ctx) - y1)


class TestEquations:
    def test_local_spacing(self, ctx):
        assert float(local_spacing(10 ** 6, ctx)) == pytest.approx(0.5246, abs=1e-3)
        # finite below 2 pi e
        assert float(local_spacing(5, ctx)) == pytest.approx(2 * 3.141592653589793)

    def test_exact_lhs_vanishes_at_first_zero(self, ctx):
        assert abs(exact_lhs(PRECISE_ZEROS[1], 1, 1e-12, ctx)) < 1e-6

    def test_non_positive_height(self, ctx):
        with pytest.raises(DomainError):
            asymptotic_lhs(0, 1, 1e-9, ctx)
        with pytest.raises(DomainError):
            exact_lhs(-1, 1, 1e-9, ctx)


class TestCounting:
    def test_backlund_count_at_100(self, ctx):
        assert int(ctx.mp.nint(count_zeros_smooth(100, CountingVariant.BACKLUND_EXACT, ctx))) == 29

    @pytest.mark.parametrize("variant", list(CountingVariant))
    def test_all_variants_near_29(self, ctx, variant):
        assert abs(count_zeros_smooth(100, variant, ctx) - 29) < 0.5

    def test_count_between_zeros_is_integer(self, ctx):
        value = count_zeros_smooth(20, CountingVariant.CRITICAL_LINE_EXACT, ctx)
        assert abs(value - 1) < 1e-10

    def test_near_zero_warning(self, ctx):
        with pytest.warns(NearZeroWarning):
            count_zeros_smooth(PRECISE_ZEROS[1], CountingVariant.BACKLUND_EXACT, ctx)

    def test_no_warning_away_from_zeros(self, ctx):
        with warnings.catch_warnings():
            warnings.simplefilter("error", NearZeroWarning)
            count_zeros_smooth(50, CountingVariant.BACKLUND_EXACT, ctx)

    def test_low_height_rejected(self, ctx):
        with pytest.raises(DomainError):
            count_zeros_smooth(6, CountingVariant.RIEMANN_ASYMPTOTIC, ctx)

    def test_gram_points(self, ctx):
        g0 = gram_point(0, ctx)
        assert float(g0) == pytest.approx(17.8455, abs=1e-4)
        g5 = gram_point(5, ctx)
        assert abs(riemann_siegel_theta(g5, ctx) - 5 * ctx.mp.pi) < 1e-25
        with pytest.raises(DomainError):
            gram_point(-1, ctx)

    def test_index_guard(self, ctx):
        y1 = ctx.mpf(PRECISE_ZEROS[1])
        _verify_index(y1, 1, ctx.mpf(1e-7), ctx)
        with pytest.raises(MisindexError):
            _verify_index(y1, 2, ctx.mpf(1e-7), ctx)

    def test_index_guard_past_argument_wrap(self, ctx):
        y = ctx.mpf(_reference(127))
        _verify_index(y, 127, ctx.mpf(1e-7), ctx)
        with pytest.raises(MisindexError):
            _verify_index(y, 129, ctx.mpf(1e-7), ctx)

    def test_vanishing_check(self, ctx):
        _check_vanishes(ctx.mpf(PRECISE_ZEROS[1]), 1, 25, ctx)
        with pytest.raises(ConvergenceError):
            # about 0.01 above the 136th zero
            _check_vanishes(ctx.mpf("295.583906974228"), 136, 10, ctx)

    @pytest.mark.parametrize("T", [500, 1000])
    def test_count_matches_mpmath(self, ctx, T):
        expected = mpmath.nzeros(T)
        value = count_zeros_smooth(T, CountingVariant.BACKLUND_EXACT, ctx)
        assert abs(value - expected) < 1e-8
        asymptotic = count_zeros_smooth(T, CountingVariant.CRITICAL_LINE_ASYMPTOTIC, ctx)
        assert int(ctx.mp.nint(asymptotic)) == expected

    def test_staircase_past_argument_wrap(self, ctx):
        for n in range(120, 140):
            middle = (float(_reference(n)) + float(_reference(n + 1))) / 2
            value = count_zeros_smooth(middle, CountingVariant.BACKLUND_EXACT, ctx)
            assert int(ctx.mp.nint(value)) == n

    @pytest.mark.slow
    def test_staircase_first_300(self, ctx):
        for n in range(1, 301):
            middle = (float(_reference(n)) + float(_reference(n + 1))) / 2
            value = count_zeros_smooth(middle, CountingVariant.CRITICAL_LINE_EXACT, ctx)
            assert abs(value - n) < 1e-6


class TestAsymptoticSolver:
    @pytest.mark.parametrize("n, expected", [
        (1, 14.134725142),
        (10, 49.773832478),
        (100, 236.524229666),
        (1000, 1419.422480946),
    ])
    def test_known_zeros(self, ctx, cfg, n, expected):
        record = solve_zero_asymptotic(n, cfg, ctx)
        assert record.value == pytest.approx(expected, abs=2e-9)
        assert record.method == ZeroMethod.ASYMPTOTIC
        assert record.residual < 0.25
        assert record.delta == cfg.final_delta
        assert record.digits_certified >= 9

    @pytest.mark.slow
    @pytest.mark.parametrize("n, expected", [
        (10 ** 4, 9877.782654006),
        (10 ** 5, 74920.827498994),
    ])
    def test_high_zeros(self, ctx, cfg, n, expected):
        record = solve_zero_asymptotic(n, cfg, ctx)
        assert record.value == pytest.approx(expected, abs=2e-9)

    @pytest.mark.slow
    def test_window_below_100000(self, ctx, cfg):
        expected = [74917.719415828, 74918.370580227, 74918.691433454,
                    74919.075161121, 74920.259793259, 74920.827498994]
        records, failures = solve_range(range(10 ** 5 - 5, 10 ** 5 + 1), ZeroMethod.ASYMPTOTIC, cfg, ctx)
        assert not failures
        assert [r.n for r in records] == list(range(10 ** 5 - 5, 10 ** 5 + 1))
        for record, value in zip(records, expected):
            assert record.value == pytest.approx(value, abs=1e-8)

    def test_index_cap(self, ctx):
        with pytest.raises(ResourceLimitError):
            solve_zero_asymptotic(11, SolverConfig(max_index=10), ctx)


class TestExactSolver:
    def test_first_zero_to_30_digits(self, ctx, cfg):
        record = solve_zero_exact(1, cfg, ctx)
        assert record.method == ZeroMethod.EXACT
        assert record.digits_certified == 30
        assert _within(record.y, PRECISE_ZEROS[1], 30)
        assert record.residual < 1e-30

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 126])
    def test_sixty_digits(self, n):
        ctx = PrecisionContext(60)
        record = solve_zero_exact(n, SolverConfig(target_digits=60), ctx)
        assert record.digits_certified == 60
        assert _within(record.y, PRECISE_ZEROS[n], 60)

    @pytest.mark.slow
    def test_zero_1000_to_100_digits(self):
        ctx = PrecisionContext(100)
        record = solve_zero_exact(1000, SolverConfig(target_digits=100), ctx)
        assert _within(record.y, ZERO_1000, 100)


class TestDispatch:
    def test_methods(self, ctx, cfg):
        assert solve_zero(1, ZeroMethod.LAMBERT_SEED, cfg, ctx).digits_certified == 0
        assert solve_zero(2, ZeroMethod.ASYMPTOTIC, cfg, ctx).value == pytest.approx(21.022039639, abs=2e-9)
        with pytest.raises(DomainError):
            solve_zero(1, ZeroMethod.IMPORTED, cfg, ctx)

    def test_solve_range_sorted(self, ctx, cfg):
        records, failures = solve_range([3, 1, 2, 2], ZeroMethod.ASYMPTOTIC, cfg, ctx)
        assert failures == {}
        assert [r.n for r in records] == [1, 2, 3]
        assert records[0].value < records[1].value < records[2].value

    def test_parallel_range_matches_serial(self, ctx, cfg):
        serial, _ = solve_range([1, 2, 3], ZeroMethod.ASYMPTOTIC, cfg, ctx)
        parallel, failures = solve_range([1, 2, 3], ZeroMethod.ASYMPTOTIC, cfg, ctx, jobs=2)
        assert failures == {}
        assert parallel == serial

    def test_seed_vs_solved(self, ctx, cfg):
        records, _ = solve_range([1, 10], ZeroMethod.ASYMPTOTIC, cfg, ctx)
        rows = seed_vs_solved(records, ctx)
        assert [row[0] for row in rows] == [1, 10]
        assert rows[0][1] == pytest.approx(14.52, abs=0.01)
        assert rows[1][2] == pytest.approx(49.773832478, abs=2e-9)


class TestArgumentWrap:
    """Zeros above the first height where |S(T)| exceeds 1."""

    @pytest.mark.parametrize("n", [127, 136, 196, 212, 213])
    def test_asymptotic(self, ctx, cfg, n):
        record = solve_zero_asymptotic(n, cfg, ctx)
        assert record.value == pytest.approx(float(_reference(n)), abs=2e-9)
        assert record.residual < 0.25

    @pytest.mark.parametrize("n", [127, 136])
    def test_exact(self, ctx, cfg, n):
        record = solve_zero_exact(n, cfg, ctx)
        assert record.digits_certified == 30
        assert _within(record.y, _reference(n), 30)

    @pytest.mark.parametrize("n", [127, 136])
    def test_exact_lhs_vanishes_at_the_zero(self, ctx, n):
        assert abs(exact_lhs(_reference(n), n, 1e-12, ctx)) < 1e-6

    def test_interleaving(self, ctx, cfg):
        self._check_interleaving(range(120, 141), ctx, cfg)

    @pytest.mark.slow
    def test_interleaving_first_300(self, ctx, cfg):
        self._check_interleaving(range(1, 301), ctx, cfg)

    @pytest.mark.slow
    @pytest.mark.parametrize("start", [2490, 4990, 9990])
    def test_interleaving_below_10000(self, ctx, cfg, start):
        self._check_interleaving(range(start, start + 11), ctx, cfg)

    def _check_interleaving(self, indices, ctx, cfg):
        records, failures = solve_range(indices, ZeroMethod.ASYMPTOTIC, cfg, ctx)
        assert failures == {}
        assert [r.n for r in records] == list(indices)
        values = [r.value for r in records]
        assert all(a < b for a, b in zip(values, values[1:]))
        for record in records:
            below = float(_reference(record.n - 1)) if record.n > 1 else 0.0
            assert below < record.value < float(_reference(record.n + 1))
            assert record.value == pytest.approx(float(_reference(record.n)), abs=2e-9)


class TestCrossMethod:
    def test_methods_agree_past_argument_wrap(self, ctx, cfg):
        asymptotic = solve_zero_asymptotic(136, cfg, ctx)
        exact = solve_zero_exact(136, cfg, ctx)
        assert agreed_digits(ctx.mpf(asymptotic.y), ctx.mpf(exact.y), ctx) >= 9

    @pytest.mark.slow
    @pytest.mark.parametrize("n", list(range(126, 138)) + [1000])
    def test_methods_agree(self, ctx, cfg, n):
        asymptotic = solve_zero_asymptotic(n, cfg, ctx)
        exact = solve_zero_exact(n, cfg, ctx)
        assert agreed_digits(ctx.mpf(asymptotic.y), ctx.mpf(exact.y), ctx) >= 9
