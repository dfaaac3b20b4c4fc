"""Exact representations of discriminant eigenvalues.

Four kinds cover every value the PST criteria need to reason about exactly:

* :class:`Rational`   p/q in lowest terms
* :class:`Quadratic`  a + b*sqrt(m), a and b rational, m squarefree > 1
* :class:`CosPi`      cos(r*pi) for rational r in (0, 1) of algebraic degree > 2
* :class:`FloatValue` anything unrecognised, kept as a double

Values are canonical: a cosine that happens to be rational or quadratic is
always stored as a Rational or Quadratic, so structural equality is exact
equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

SNAP_TOLERANCE = 1e-9
MAX_RATIONAL_DENOMINATOR = 64
MAX_COSPI_DENOMINATOR = 512

Number = Union[int, Fraction]


class AlgebraicValue:
    kind: str = ""
    exact: bool = True

    @property
    def float_value(self) -> float:
        raise NotImplementedError

    def angle(self) -> Fraction | None:
        """arccos(self)/pi as an exact rational, or None if not known to be one."""
        return None

    def __float__(self) -> float:
        return self.float_value


# arccos/pi for the rational and quadratic members of the set of real parts
# of roots of unity (Niven: these are the only rational and quadratic ones).
_RATIONAL_ANGLES = {
    Fraction(1): Fraction(0),
    Fraction(1, 2): Fraction(1, 3),
    Fraction(0): Fraction(1, 2),
    Fraction(-1, 2): Fraction(2, 3),
    Fraction(-1): Fraction(1),
}

_F = Fraction
_QUADRATIC_ANGLES = {
    (_F(0), _F(1, 2), 3): _F(1, 6),
    (_F(0), _F(-1, 2), 3): _F(5, 6),
    (_F(0), _F(1, 2), 2): _F(1, 4),
    (_F(0), _F(-1, 2), 2): _F(3, 4),
    (_F(1, 4), _F(1, 4), 5): _F(1, 5),
    (_F(-1, 4), _F(1, 4), 5): _F(2, 5),
    (_F(1, 4), _F(-1, 4), 5): _F(3, 5),
    (_F(-1, 4), _F(-1, 4), 5): _F(4, 5),
}
_ANGLE_TO_RATIONAL = {v: k for k, v in _RATIONAL_ANGLES.items()}
_ANGLE_TO_QUADRATIC = {v: k for k, v in _QUADRATIC_ANGLES.items()}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class _FieldArithmetic(AlgebraicValue):
    """Exact +, -, * shared by Rational and Quadratic."""

    def _parts(self) -> tuple[Fraction, Fraction, int]:
        raise NotImplementedError

    @staticmethod
    def _coerce(other) -> tuple[Fraction, Fraction, int] | None:
        if isinstance(other, _FieldArithmetic):
            return other._parts()
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), 0
        return None

    def _combine(self, other, op):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a1, b1, m1 = self._parts()
        a2, b2, m2 = rhs
        if m1 and m2 and m1 != m2:
            raise TypeError(f"cannot combine Q(sqrt({m1})) with Q(sqrt({m2}))")
        m = m1 or m2
        if op == "add":
            return quadratic(a1 + a2, b1 + b2, m)
        if op == "mul":
            return quadratic(a1 * a2 + b1 * b2 * m, a1 * b2 + a2 * b1, m)
        raise AssertionError(op)

    def __add__(self, other):
        return self._combine(other, "add")

    __radd__ = __add__

    def __mul__(self, other):
        return self._combine(other, "mul")

    __rmul__ = __mul__

    def __neg__(self):
        a, b, m = self._parts()
        return quadratic(-a, -b, m)

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + quadratic(-rhs[0], -rhs[1], rhs[2])

    def __rsub__(self, other):
        return (-self) + other


@dataclass(frozen=True)
class Rational(_FieldArithmetic):
    value: Fraction

    kind = "rational"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))

    def _parts(self):
        return self.value, Fraction(0), 0

    @property
    def float_value(self) -> float:
        return float(self.value)

    def angle(self) -> Fraction | None:
        return _RATIONAL_ANGLES.get(self.value)

    def __str__(self) -> str:
        return _frac_str(self.value)


@dataclass(frozen=True)
class Quadratic(_FieldArithmetic):
    a: Fraction
    b: Fraction
    m: int

    kind = "quadratic"

    def _parts(self):
        return self.a, self.b, self.m

    @property
    def float_value(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def angle(self) -> Fraction | None:
        return _QUADRATIC_ANGLES.get((self.a, self.b, self.m))

    def __str__(self) -> str:
        b = self.b
        coeff = "" if abs(b.numerator) == 1 else str(abs(b.numerator))
        surd = f"{coeff}√{self.m}" + ("" if b.denominator == 1 else f"/{b.denominator}")
        if self.a == 0:
            return ("-" if b < 0 else "") + surd
        return _frac_str(self.a) + ("-" if b < 0 else "+") + surd


@dataclass(frozen=True)
class CosPi(AlgebraicValue):
    r: Fraction

    kind = "cospi"

    @property
    def float_value(self) -> float:
        return math.cos(float(self.r) * math.pi)

    def angle(self) -> Fraction:
        return self.r

    def __str__(self) -> str:
        p, q = self.r.numerator, self.r.denominator
        num = "π" if p == 1 else f"{p}π"
        return f"cos({num})" if q == 1 else f"cos({num}/{q})"


@dataclass(frozen=True)
class FloatValue(AlgebraicValue):
    value: float

    kind = "float"
    exact = False

    @property
    def float_value(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return repr(float(self.value))


ONE = Rational(Fraction(1))
MINUS_ONE = Rational(Fraction(-1))
ZERO = Rational(Fraction(0))


def _squarefree_part(m: int) -> tuple[int, int]:
    """Write m = s^2 * f with f squarefree; return (s, f)."""
    s, f, p = 1, m, 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1
    return s, f


def quadratic(a: Number, b: Number, m: int) -> Rational | Quadratic:
    """Canonical a + b*sqrt(m); collapses to Rational when the surd vanishes."""
    a, b = Fraction(a), Fraction(b)
    if b == 0 or m == 0:
        return Rational(a)
    if m < 0:
        raise ValueError("only real quadratic fields are supported")
    s, f = _squarefree_part(m)
    b *= s
    if f == 1:
        return Rational(a + b)
    return Quadratic(a, b, f)


def cospi(r: Number) -> Rational | Quadratic | CosPi:
    """cos(r*pi) in canonical form, with r reduced into [0, 1]."""
    r = Fraction(r) % 2
    if r > 1:
        r = 2 - r
    if r in _ANGLE_TO_RATIONAL:
        return Rational(_ANGLE_TO_RATIONAL[r])
    if r in _ANGLE_TO_QUADRATIC:
        return Quadratic(*_ANGLE_TO_QUADRATIC[r])
    return CosPi(r)


def as_algebraic(x) -> AlgebraicValue:
    if isinstance(x, AlgebraicValue):
        return x
    if isinstance(x, (int, Fraction)):
        return Rational(Fraction(x))
    return FloatValue(float(x))


QUADRATIC_TABLE: tuple[Quadratic, ...] = tuple(Quadratic(*k) for k in _QUADRATIC_ANGLES)
RATIONAL_TABLE: tuple[Rational, ...] = tuple(Rational(k) for k in _RATIONAL_ANGLES)


def snap(
    x: float,
    denominators: Iterable[int] = (),
    tol: float = SNAP_TOLERANCE,
) -> AlgebraicValue:
    """Recognise a float as an exact value.

    Tries, in order: a rational with denominator <= 64 (continued fractions)
    or dividing one of ``denominators``; one of the quadratic surds
    +-sqrt(3)/2, +-1/sqrt(2), +-1/4+-sqrt(5)/4; cos(p*pi/q) with q <= 512.
    Falls back to FloatValue.
    """
    x = float(x)
    r = Fraction(x).limit_denominator(MAX_RATIONAL_DENOMINATOR)
    if abs(x - float(r)) <= tol:
        return Rational(r)
    for q in denominators:
        if q > 0:
            r = Fraction(round(x * q), q)
            if abs(x - float(r)) <= tol:
                return Rational(r)
    for qv in QUADRATIC_TABLE:
        if abs(x - qv.float_value) <= tol:
            return qv
    if -1.0 - tol <= x <= 1.0 + tol:
        t = math.acos(min(1.0, max(-1.0, x))) / math.pi
        r = Fraction(t).limit_denominator(MAX_COSPI_DENOMINATOR)
        if abs(t - float(r)) <= tol and abs(math.cos(float(r) * math.pi) - x) <= tol:
            return cospi(r)
    return FloatValue(x)
