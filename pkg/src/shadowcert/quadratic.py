"""Exact arithmetic in the quadratic field Q(sqrt5).

Numbers are kept as a + b*sqrt5 with rational a, b.  All predicates
(sign, comparison, floor) are decided exactly, without floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from math import isqrt

_SQRT5_FLOAT = 5.0**0.5
_F_ZERO = Fraction(0)

_PARSE_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?:(?P<sign>[+-]?)\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*s5)?\s*$"
)


def _floor_sqrt5_multiple(b: Fraction) -> int:
    """floor(b * sqrt5) for rational b, via integer square roots."""
    if b == 0:
        return 0
    p, q = b.numerator, b.denominator
    if p > 0:
        return isqrt(5 * p * p) // q
    # floor(-x) = -floor(x) - 1 for irrational x
    return -(isqrt(5 * p * p) // q) - 1


@total_ordering
class QuadraticNumber:
    """An element a + b*sqrt5 of Q(sqrt5), with exact rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", a if type(a) is Fraction else Fraction(a))
        object.__setattr__(self, "b", b if type(b) is Fraction else Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "QuadraticNumber":
        """Internal fast constructor: both parts must be Fractions."""
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        return self

    @classmethod
    def coerce(cls, value) -> "QuadraticNumber":
        if isinstance(value, QuadraticNumber):
            return value
        if type(value) is Fraction:
            return cls._raw(value, _F_ZERO)
        return cls._raw(Fraction(value), _F_ZERO)

    @classmethod
    def parse(cls, text: str) -> "QuadraticNumber":
        """Parse 'a/b+c/d*s5' (either part optional, signs allowed)."""
        m = _PARSE_RE.match(text)
        if m is None or (m.group("a") is None and m.group("b") is None):
            raise ValueError(f"not a quadratic number: {text!r}")
        a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
        b = Fraction(0)
        if m.group("b"):
            b = Fraction(m.group("b"))
            if m.group("sign") == "-":
                b = -b
        return cls(a, b)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        o = QuadraticNumber.coerce(other)
        return QuadraticNumber._raw(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber._raw(-self.a, -self.b)

    def __sub__(self, other):
        o = QuadraticNumber.coerce(other)
        return QuadraticNumber._raw(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = QuadraticNumber.coerce(other)
        return QuadraticNumber._raw(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = QuadraticNumber.coerce(other)
        return QuadraticNumber._raw(
            self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        norm = self.a * self.a - 5 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return QuadraticNumber(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * QuadraticNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadraticNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = QuadraticNumber(1)
        k = abs(n)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- exact predicates --------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 5 b^2
        lhs, rhs = a * a, 5 * b * b
        if a > 0:  # b < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return (self - other).sign() < 0
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def floor(self) -> int:
        a, b = self.a, self.b
        if not b:
            return a.numerator // a.denominator
        # near-unit fast path: decide floor in (-1, 1) by sign alone
        s = self.sign()
        if s >= 0:
            if (self - 1).sign() < 0:
                return 0
        elif (self + 1).sign() >= 0:
            return -1
        n = (a.numerator // a.denominator) + _floor_sqrt5_multiple(b)
        # fractional parts may add up past 1; one exact correction step
        if (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def mod1(self) -> "QuadraticNumber":
        return self - self.floor()

    # -- conversion --------------------------------------------------

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * _SQRT5_FLOAT

    def __repr__(self):
        return f"QuadraticNumber({self.a!r}, {self.b!r})"

    def __str__(self):
        a, b = self.a, self.b
        sign = "-" if b < 0 else "+"
        return (
            f"{a.numerator}/{a.denominator}"
            f"{sign}{abs(b).numerator}/{abs(b).denominator}*s5"
        )


SQRT5 = QuadraticNumber(0, 1)
PHI = QuadraticNumber(Fraction(1, 2), Fraction(1, 2))
PHI_INV = QuadraticNumber(Fraction(-1, 2), Fraction(1, 2))
LAMBDA = QuadraticNumber(Fraction(3, 2), Fraction(1, 2))
LAMBDA_INV = QuadraticNumber(Fraction(3, 2), Fraction(-1, 2))
