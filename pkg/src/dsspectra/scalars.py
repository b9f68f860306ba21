"""Exact scalars: rationals (``fractions.Fraction``) and elements of Q(sqrt d).

Rational arithmetic is delegated to :class:`fractions.Fraction`.  A
:class:`QuadScalar` represents ``a + b*sqrt(d)`` with rational ``a, b`` and a
square-free radicand ``d > 1``.  Arithmetic that cancels the radical part
returns a plain ``Fraction`` so that rational results never carry a dead
radicand around.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

TRIAL_DIVISION_BOUND = 10**6

Scalar = Union[Fraction, "QuadScalar"]


class RadicandMismatch(ValueError):
    """Raised when two quadratic scalars with different radicands meet."""


def squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``d == s*s*r`` and ``r`` square-free.

    Square factors are removed by trial division up to 10**6.  A cofactor
    left over after trial division that is too large to be classified
    (>= 10**18) is rejected.
    """
    if d < 1:
        raise ValueError(f"radicand must be a positive integer, got {d}")
    s, r, free = 1, d, 1
    p = 2
    while p <= TRIAL_DIVISION_BOUND and p * p <= r:
        e = 0
        while r % p == 0:
            r //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            free *= p
        p += 1 if p == 2 else 2
    if r > 1 and p * p <= r:
        # every prime factor of r exceeds the trial bound
        if r >= TRIAL_DIVISION_BOUND**3:
            raise ValueError(f"radicand {d} too large for square-free normalization")
        root = math.isqrt(r)
        if root * root == r:
            return s * root, free
    return s, free * r


def sqrt_rational(x: Fraction | int) -> Scalar:
    """Exact square root of a nonnegative rational, in Q or Q(sqrt d)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    s, r = squarefree_split(x.numerator * x.denominator)
    b = Fraction(s, x.denominator)
    if r == 1:
        return b
    return QuadScalar(0, b, r)


def _parts(x) -> tuple[Fraction, Fraction, int]:
    if isinstance(x, QuadScalar):
        return x.a, x.b, x.d
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Fraction(x), Fraction(0), 1
    raise TypeError(f"not an exact scalar: {x!r}")


def _common_d(d1: int, d2: int) -> int:
    if d1 == 1:
        return d2
    if d2 == 1 or d1 == d2:
        return d1
    raise RadicandMismatch(f"cannot mix sqrt({d1}) and sqrt({d2})")


def make(a: Fraction, b: Fraction, d: int) -> Scalar:
    """Build ``a + b*sqrt(d)``, collapsing to a Fraction when ``b == 0``."""
    if b == 0 or d == 1:
        return Fraction(a) + (Fraction(b) if d == 1 else 0)
    return QuadScalar(a, b, d)


def _sign(a: Fraction, b: Fraction, d: int) -> int:
    """Sign of a + b*sqrt(d) without floating point."""
    if b == 0 or d == 1:
        v = a + b if d == 1 else a
        return (v > 0) - (v < 0)
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


class QuadScalar:
    """An element ``a + b*sqrt(d)`` of a real quadratic field."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        a, b, d = Fraction(a), Fraction(b), int(d)
        if b != 0:
            s, d = squarefree_split(d)
            b *= s
            if d == 1:
                a, b = a + b, Fraction(0)
        if b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> Scalar:
        return make(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __repr__(self) -> str:
        return f"QuadScalar({self.a}, {self.b}, {self.d})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __eq__(self, other) -> bool:
        try:
            a, b, d = _parts(other)
        except TypeError:
            return NotImplemented
        if self.b == 0 and b == 0:
            return self.a == a
        return self.a == a and self.b == b and self.d == d

    def _cmp(self, other) -> int:
        a, b, d = _parts(other)
        d = _common_d(self.d, d)
        return _sign(self.a - a, self.b - b, d)

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __neg__(self) -> Scalar:
        return make(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self) -> Scalar:
        return -self if self < 0 else self

    def __add__(self, other):
        try:
            a, b, d = _parts(other)
        except TypeError:
            return NotImplemented
        d = _common_d(self.d, d)
        return make(self.a + a, self.b + b, d)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b, d = _parts(other)
        except TypeError:
            return NotImplemented
        d = _common_d(self.d, d)
        return make(self.a - a, self.b - b, d)

    def __rsub__(self, other):
        try:
            a, b, d = _parts(other)
        except TypeError:
            return NotImplemented
        d = _common_d(self.d, d)
        return make(a - self.a, b - self.b, d)

    def __mul__(self, other):
        try:
            a, b, d = _parts(other)
        except TypeError:
            return NotImplemented
        d = _common_d(self.d, d)
        return make(self.a * a + self.b * b * d, self.a * b + self.b * a, d)

    __rmul__ = __mul__

    def _inverse(self) -> Scalar:
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero quadratic scalar")
        return make(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadScalar):
            return self * other._inverse()
        try:
            a, _, _ = _parts(other)
        except TypeError:
            return NotImplemented
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return make(self.a / a, self.b / a, self.d)

    def __rtruediv__(self, other):
        try:
            _parts(other)
        except TypeError:
            return NotImplemented
        return other * self._inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self._inverse() ** (-k)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, QuadScalars and scalar strings to exact scalars."""
    if isinstance(x, QuadScalar):
        return x if x.b != 0 else x.a
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars; pass a Fraction or a string")
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def radicand(x) -> int:
    return x.d if isinstance(x, QuadScalar) else 1


def to_float(x) -> float:
    return float(x)


def is_rational(x) -> bool:
    return not isinstance(x, QuadScalar) or x.b == 0


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Render as ``p/q`` or ``p/q+r/s*sqrt(d)``."""
    if isinstance(x, QuadScalar) and x.b != 0:
        sign = "-" if x.b < 0 else "+"
        return f"{format_rational(x.a)}{sign}{format_rational(abs(x.b))}*sqrt({x.d})"
    return format_rational(x.a if isinstance(x, QuadScalar) else x)


_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?P<a>{_RAT})?\s*(?:(?P<sign>[+-])?\s*(?P<b>{_RAT})?\s*\*?\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p/q+r/s*sqrt(d)"`` (and a few lenient variants)."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"malformed scalar: {text!r}")
    a = Fraction(m.group("a")) if m.group("a") is not None else Fraction(0)
    if m.group("d") is None:
        return a
    b = Fraction(m.group("b")) if m.group("b") is not None else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    elif m.group("sign") is None and m.group("a") is not None and m.group("b") is None:
        # "3sqrt(2)" style: the leading rational is the coefficient
        a, b = Fraction(0), a
    return as_scalar(QuadScalar(a, b, int(m.group("d"))))
