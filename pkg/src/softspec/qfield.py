"""Exact arithmetic in real quadratic fields Q(sqrt(d))."""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def squarefree_split(m: int) -> tuple[int, int]:
    """Return (f, d) with m == f*f*d and d square-free (m > 0)."""
    if m <= 0:
        raise ValueError("squarefree_split expects a positive integer")
    f, d = 1, 1
    k = 2
    rest = m
    while k * k <= rest:
        while rest % (k * k) == 0:
            rest //= k * k
            f *= k
        if rest % k == 0:
            rest //= k
            d *= k
        k += 1
    return f, d * rest


def is_square(m: int) -> bool:
    return m >= 0 and math.isqrt(m) ** 2 == m


class QuadraticNumber:
    """a + b*sqrt(d) with rational a, b and square-free d > 1.

    Mixed arithmetic with ints and Fractions is supported; combining two
    numbers from different fields raises ValueError.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 2):
        if d <= 1 or squarefree_split(d)[0] != 1:
            raise ValueError(f"d must be square-free and > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a * o.a + self.b * o.b * self.d,
                               self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b) == (other.a, other.b) and (self.d == other.d or not self.b)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0 or sb == 0 or sa == sb:
            return sa or sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        b = abs(self.b)
        bs = "" if b == 1 else f"{b}*"
        return f"{self.a} {sign} {bs}sqrt({self.d})" if self.a else (
            f"{'-' if self.b < 0 else ''}{bs}sqrt({self.d})")


def quadratic_root(p: int, q: int, d: int, r: int) -> QuadraticNumber:
    """The number (p + q*sqrt(d)) / r."""
    return QuadraticNumber(Fraction(p, r), Fraction(q, r), d)
