"""Exact scalars: rationals and the quadratic extension Q(sqrt(t)).

Rationals are plain :class:`fractions.Fraction` values.  :class:`Surd`
represents ``a + b*sqrt(t)`` with rational ``a, b, t`` and is closed under
the four field operations as long as both operands share the radicand.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 128

__all__ = [
    "DEFAULT_PRECISION",
    "Surd",
    "exact",
    "is_exact",
    "rat_arith",
    "rational_sqrt",
    "sign",
    "surd_arith",
    "to_float",
]


def exact(value) -> Fraction | "Surd":
    """Convert ``value`` to an exact scalar.

    Floats go through their shortest repr, so ``exact(0.1) == Fraction(1, 10)``.
    Strings accept anything :class:`Fraction` parses (``"3/7"``, ``"1e-3"``).
    """
    if isinstance(value, (Fraction, Surd)):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, Surd)) and not isinstance(value, bool)


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def rat_arith(lhs, rhs, op: str) -> Fraction:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        if rhs == 0:
            raise ZeroDivisionError("rational division by zero")
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


class Surd:
    """Element ``a + b*sqrt(t)`` of Q(sqrt(t)), immutable.

    A perfect-square radicand folds ``b*sqrt(t)`` into ``a``.  Combining two
    irrational surds with different radicands raises ``ValueError``.
    """

    __slots__ = ("a", "b", "t")

    def __init__(self, a=0, b=0, t=0):
        a, b, t = Fraction(a), Fraction(b), Fraction(t)
        if t < 0:
            raise ValueError("radicand must be non-negative")
        if b != 0:
            r = rational_sqrt(t)
            if r is not None:
                a, b = a + b * r, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", t)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def sqrt_of(cls, t) -> "Surd":
        return cls(0, 1, t)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def _radicand_with(self, other: "Surd") -> Fraction:
        if self.b == 0:
            return other.t
        if other.b == 0 or other.t == self.t:
            return self.t
        raise ValueError(f"radicand mismatch: sqrt({self.t}) vs sqrt({other.t})")

    def _coerce(self, other) -> "Surd | None":
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Surd(other, 0, self.t)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self._radicand_with(o)
        return Surd(self.a + o.a, self.b + o.b, t)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.t)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self._radicand_with(o)
        return Surd(self.a * o.a + self.b * o.b * t, self.a * o.b + self.b * o.a, t)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.t)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - b^2 t``; zero only for the zero element."""
        return self.a * self.a - self.b * self.b * self.t

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("surd division by zero")
        return Surd(self.a / n, -self.b / n, self.t)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._radicand_with(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Surd(1, 0, self.t), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        """Exact sign, decided without floating point."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 t
        diff = self.a * self.a - self.b * self.b * self.t
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def __bool__(self):
        return self.sign() != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        if self.t != o.t and self.b != 0 and o.b != 0:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.t))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(to_float(self, 64))

    def sqrt(self) -> "Surd | None":
        """Square root inside Q(sqrt(t)) when one exists, else None.

        Solves (c + d sqrt(t))^2 = a + b sqrt(t) for rational c, d.
        """
        s = self.sign()
        if s < 0:
            return None
        if s == 0:
            return Surd(0, 0, self.t)
        if self.b == 0:
            r = rational_sqrt(self.a)
            if r is not None:
                return Surd(r, 0, self.t)
            if self.t == 0:
                return None
            # a = d^2 t  ->  sqrt(a) = d sqrt(t)
            r = rational_sqrt(self.a / self.t)
            return Surd(0, r, self.t) if r is not None else None
        disc = rational_sqrt(self.norm())
        if disc is None:
            return None
        for c2 in ((self.a + disc) / 2, (self.a - disc) / 2):
            c = rational_sqrt(c2)
            if c is None or c == 0:
                continue
            cand = Surd(c, self.b / (2 * c), self.t)
            if cand * cand == self:
                return cand if cand.sign() >= 0 else -cand
        return None

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.t})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        head = "" if self.a == 0 else f"{self.a} "
        op = "-" if self.b < 0 else "+"
        if not head:
            op = "-" if self.b < 0 else ""
        coef = abs(self.b)
        coef_s = "" if coef == 1 else f"{coef}*"
        return f"{head}{op}{' ' if head else ''}{coef_s}sqrt({self.t})"


def surd_arith(lhs: Surd, rhs: Surd, op: str) -> Surd:
    if not isinstance(lhs, Surd):
        lhs = Surd(lhs, 0, rhs.t if isinstance(rhs, Surd) else 0)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def sign(value) -> int:
    """Sign of an exact or floating scalar."""
    if isinstance(value, Surd):
        return value.sign()
    return (value > 0) - (value < 0)


def to_float(value, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Round an exact scalar to an mpmath float with ``precision`` bits."""
    with mpmath.workprec(precision + 32):
        if isinstance(value, Surd):
            a = mpmath.mpf(value.a.numerator) / value.a.denominator
            if value.b == 0:
                v = a
            else:
                b = mpmath.mpf(value.b.numerator) / value.b.denominator
                t = mpmath.mpf(value.t.numerator) / value.t.denominator
                root = b * mpmath.sqrt(t)
                if value.a * value.b < 0:
                    # a + b sqrt(t) = norm / (a - b sqrt(t)); avoids cancellation
                    n = value.norm()
                    v = (mpmath.mpf(n.numerator) / n.denominator) / (a - root)
                else:
                    v = a + root
        elif isinstance(value, Fraction):
            v = mpmath.mpf(value.numerator) / value.denominator
        else:
            v = mpmath.mpf(value)
    with mpmath.workprec(precision):
        return +v
