"""Tests for Brent's method and bracket sliding."""

import math
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from riemann_zeros.errors import BracketError, ConvergenceError
from riemann_zeros.precision import PrecisionContext
from riemann_zeros.rootfinding import brentq, expand_bracket


def test_brentq_float():
    result = brentq(lambda x: x * x - 2, 0.0, 2.0, 1e-14)
    assert result.root == pytest.approx(math.sqrt(2), abs=1e-13)
    assert result.iterations > 0
    lo, hi = result.bracket
    assert lo <= result.root <= hi


def test_brentq_high_precision():
    ctx = PrecisionContext(50)
    mp = ctx.mp
    result = brentq(lambda x: x ** 3 - 2, ctx.mpf(1), ctx.mpf(2), mp.mpf(10) ** -48)
    assert abs(result.root - mp.cbrt(2)) < mp.mpf(10) ** -47


def test_brentq_known_endpoint_values():
    f = lambda x: x - 0.3  # noqa: E731
    result = brentq(f, 0.0, 1.0, 1e-12, fa=-0.3, fb=0.7)
    assert result.root == pytest.approx(0.3)


def test_brentq_root_at_endpoint():
    result = brentq(lambda x: x - 1.0, 1.0, 2.0, 1e-12)
    assert result.root == 1.0
    assert result.iterations == 0


def test_brentq_requires_sign_change():
    with pytest.raises(BracketError):
        brentq(lambda x: x * x + 1, -1.0, 1.0, 1e-10)


def test_brentq_iteration_cap():
    with pytest.raises(ConvergenceError):
        brentq(lambda x: x * x - 2, 0.0, 2.0, 1e-15, max_iterations=1)


class TestExpandBracket:
    def test_already_bracketed(self):
        a, b, fa, fb = expand_bracket(lambda x: x - 1.0, 1.0, 0.5, 1.5, 10)
        assert (a, b) == (0.5, 1.5)
        assert fa < 0 < fb

    def test_slides_left(self):
        a, b, fa, fb = expand_bracket(lambda x: x + 5.0, 0.0, 0.5, 1.5, 20)
        assert a < -5.0 < b
        assert fa < 0 < fb

    def test_slides_right(self):
        a, b, fa, fb = expand_bracket(lambda x: x - 7.0, 0.0, 0.5, 1.5, 20)
        assert a < 7.0 < b

    def test_walls_are_respected(self):
        with pytest.raises(BracketError):
            expand_bracket(lambda x: x - 7.0, 0.0, 0.5, 1.5, 20, walls=(None, 3.0))

    def test_gives_up(self):
        with pytest.raises(BracketError):
            expand_bracket(lambda x: x - 1e6, 0.0, 0.5, 1.1, 3)
