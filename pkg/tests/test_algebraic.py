from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grover_pst.algebraic import (
    MINUS_ONE,
    ONE,
    QUADRATIC_TABLE,
    RATIONAL_TABLE,
    ZERO,
    CosPi,
    FloatValue,
    Quadratic,
    Rational,
    cospi,
    quadratic,
    snap,
)


def test_canonical_collapse():
    assert quadratic(F(1, 2), 0, 5) == Rational(F(1, 2))
    assert quadratic(0, 1, 4) == Rational(2)
    assert quadratic(0, 1, 12) == Quadratic(F(0), F(2), 3)
    assert cospi(F(1, 3)) == Rational(F(1, 2))
    assert cospi(F(1, 4)) == Quadratic(F(0), F(1, 2), 2)
    assert cospi(F(2, 7)) == CosPi(F(2, 7))
    assert cospi(F(12, 7)) == CosPi(F(2, 7))


@pytest.mark.parametrize(
    "value,text",
    [
        (Rational(F(-1, 2)), "-1/2"),
        (Rational(F(1)), "1"),
        (Quadratic(F(0), F(1, 2), 3), "√3/2"),
        (Quadratic(F(-1, 4), F(1, 4), 5), "-1/4+√5/4"),
        (Quadratic(F(0), F(-1, 2), 2), "-√2/2"),
        (CosPi(F(2, 5)), "cos(2π/5)"),
        (CosPi(F(1, 7)), "cos(π/7)"),
    ],
)
def test_str(value, text):
    assert str(value) == text


def test_exact_field_arithmetic():
    r5 = Quadratic(F(0), F(1), 5)
    golden = (1 + r5) * F(1, 2)
    # phi^2 = phi + 1
    assert golden * golden == golden + 1
    assert (r5 * r5) == Rational(5)
    assert (ONE - ONE) == ZERO
    assert -MINUS_ONE == ONE
    with pytest.raises(TypeError):
        _ = Quadratic(F(0), F(1), 2) + Quadratic(F(0), F(1), 3)


def test_tables_cover_niven_values():
    assert {str(v) for v in RATIONAL_TABLE} == {"1", "1/2", "0", "-1/2", "-1"}
    assert {str(v) for v in QUADRATIC_TABLE} == {
        "√3/2", "-√3/2", "√2/2", "-√2/2",
        "1/4+√5/4", "-1/4+√5/4", "1/4-√5/4", "-1/4-√5/4",
    }


@pytest.mark.parametrize("v", list(RATIONAL_TABLE) + list(QUADRATIC_TABLE))
def test_angles_are_consistent(v):
    assert math.isclose(math.cos(math.pi * float(v.angle())), v.float_value, abs_tol=1e-15)


@pytest.mark.parametrize(
    "x,expected",
    [
        (1 / 3, Rational(F(1, 3))),
        (-2 / 3, Rational(F(-2, 3))),
        (math.sqrt(3) / 2, Quadratic(F(0), F(1, 2), 3)),
        ((math.sqrt(5) - 1) / 4, Quadratic(F(-1, 4), F(1, 4), 5)),
        (math.cos(2 * math.pi / 7), CosPi(F(2, 7))),
        # (sqrt6 + sqrt2)/4 is quartic, so only the cosine form catches it
        (math.cos(math.pi / 12), CosPi(F(1, 12))),
    ],
)
def test_snap(x, expected):
    assert snap(x) == expected


def test_snap_extra_denominator():
    # 7/67 is out of reach of the default <= 64 search
    x = 7 / 67
    assert isinstance(snap(x), (FloatValue, CosPi))
    assert snap(x, denominators=(67,)) == Rational(F(7, 67))


def test_snap_falls_back_to_float():
    v = snap(math.pi / 10)
    assert isinstance(v, FloatValue) and not v.exact


@given(st.fractions(min_value=-1, max_value=1, max_denominator=64))
def test_snap_rationals_roundtrip(r):
    assert snap(float(r)) == Rational(r)


@given(st.integers(1, 400), st.integers(1, 512))
def test_float_shadow_close(p, q):
    v = cospi(F(p, q))
    assert math.isclose(v.float_value, math.cos(math.pi * p / q), abs_tol=1e-12)
