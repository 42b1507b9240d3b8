"""Interval arithmetic over machine doubles restricted to safe numbers.

A :class:`Scalar` is a pair of doubles ``[lo, hi]``.  Every inexact operation
is computed with the host's round-to-nearest arithmetic and then widened by
one representable float on each side (:func:`enlarge`).  Widened endpoints
must be *safe*: either zero or of magnitude in ``(2**-500, 2**500)``.  Inside
that range IEEE-754 results are normalized, so a nonzero computed result is
within one float of the exact value and stepping once outward encloses it.

Anything that cannot be decided soundly (overlapping comparisons, reciprocals
of zero-containing intervals, escaping the safe range) raises
:class:`CertificationError`.  These are never caught inside the library.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "CertificationError",
    "Scalar",
    "SAFE_MIN",
    "SAFE_MAX",
    "is_safe",
    "assert_safe",
    "step_float",
    "enlarge",
    "compare",
    "int_power",
    "ZERO",
    "ONE",
]

SAFE_MIN = 2.0**-500
SAFE_MAX = 2.0**500

_INF = math.inf
_nextafter = math.nextafter


class CertificationError(ArithmeticError):
    """A rigorous check could not be carried out; the proof attempt fails."""


def is_safe(x: float) -> bool:
    ax = abs(x)
    return x == 0.0 or SAFE_MIN < ax < SAFE_MAX


def assert_safe(x: float) -> float:
    if x == 0.0 or SAFE_MIN < abs(x) < SAFE_MAX:
        return x
    raise CertificationError(f"assertSafe: not a safe number ({x!r})")


def step_float(n: int, x: float) -> float:
    """Return the float adjacent to ``x`` in direction ``n`` (``n = +-1``).

    Zero is returned unchanged: the only safe bound on an exact zero is zero.
    """
    if x == 0.0:
        return 0.0
    if n > 0:
        return _nextafter(x, _INF)
    if n < 0:
        return _nextafter(x, -_INF)
    return x


def _down(x: float) -> float:
    if x == 0.0:
        return 0.0
    y = _nextafter(x, -_INF)
    if SAFE_MIN < abs(y) < SAFE_MAX:
        return y
    raise CertificationError(f"assertSafe: not a safe number ({y!r})")


def _up(x: float) -> float:
    if x == 0.0:
        return 0.0
    y = _nextafter(x, _INF)
    if SAFE_MIN < abs(y) < SAFE_MAX:
        return y
    raise CertificationError(f"assertSafe: not a safe number ({y!r})")


def _check_underflow(a: float, b: float, c: float, d: float) -> None:
    # a zero product of two nonzero safe numbers has underflowed; treating it
    # as exact would be unsound
    for x, y in ((a, c), (a, d), (b, c), (b, d)):
        if x * y == 0.0 and x != 0.0 and y != 0.0:
            raise CertificationError(f"assertSafe: not a safe number (product {x!r} * {y!r} underflows)")


def _make(lo: float, hi: float) -> Scalar:
    s = object.__new__(Scalar)
    s.lo = lo
    s.hi = hi
    return s


class Scalar:
    """Closed interval ``[lo, hi]`` of reals with double endpoints.

    Python numbers mixed into arithmetic are embedded as point intervals
    (ints and floats are exact).  Use :meth:`from_decimal` for decimal
    literals such as ``"2.2"`` that are not representable.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        self.lo = lo
        self.hi = lo if hi is None else float(hi)

    @classmethod
    def from_decimal(cls, text: str | Fraction | int | float) -> Scalar:
        """Tightest float interval containing the exact rational ``text``."""
        exact = Fraction(text)
        x = float(exact)
        fx = Fraction(x)
        if fx == exact:
            return cls(x, x)
        if fx < exact:
            return cls(x, _nextafter(x, _INF))
        return cls(_nextafter(x, -_INF), x)

    # -- accessors -----------------------------------------------------
    def upper(self) -> float:
        return self.hi

    def lower(self) -> float:
        return self.lo

    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2

    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        """Exact membership test (``x`` may be a Fraction or mpmath value)."""
        if isinstance(x, Scalar):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, (int, float, Fraction)):
            return Fraction(self.lo) <= Fraction(x) <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def magnitude_ub(self) -> float:
        """Upper bound of ``|x|`` over the interval."""
        return max(0.0, -self.lo, self.hi)

    # -- exact operations ------------------------------------------------
    def __neg__(self) -> Scalar:
        return _make(-self.hi, -self.lo)

    def __abs__(self) -> Scalar:
        lo, hi = self.lo, self.hi
        a = max(0.0, lo, -hi)
        b = -min(0.0, lo, -hi)
        return _make(a + 0.0, b + 0.0)

    def __pos__(self) -> Scalar:
        return self

    # -- inexact operations ----------------------------------------------
    def __add__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, float)):
                return NotImplemented
            other = Scalar(other)
        # x + 0 is exact in IEEE arithmetic
        if other.lo == 0.0 and other.hi == 0.0:
            return self
        if self.lo == 0.0 and self.hi == 0.0:
            return other
        return _make(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, float)):
                return NotImplemented
            other = Scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        if not isinstance(other, (int, float)):
            return NotImplemented
        return Scalar(other) + (-self)

    def __mul__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, float)):
                return NotImplemented
            other = Scalar(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        p1 = a * c
        p2 = a * d
        p3 = b * c
        p4 = b * d
        lo, hi = min(p1, p2, p3, p4), max(p1, p2, p3, p4)
        if lo == 0.0 or hi == 0.0:
            _check_underflow(a, b, c, d)
        return _make(_down(lo), _up(hi))

    __rmul__ = __mul__

    def recip(self) -> Scalar:
        lo, hi = self.lo, self.hi
        if lo * hi > 0.0:
            return _make(_down(1.0 / hi), _up(1.0 / lo))
        raise CertificationError(f"S.recip: not well-defined for {self!r}")

    def __truediv__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, float)):
                return NotImplemented
            other = Scalar(other)
        return self * other.recip()

    def __rtruediv__(self, other) -> Scalar:
        if not isinstance(other, (int, float)):
            return NotImplemented
        return Scalar(other) * self.recip()

    def __pow__(self, n: int) -> Scalar:
        return int_power(self, n, ONE)

    # -- ordering ----------------------------------------------------------
    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    # structural equality, as for the underlying pair of doubles
    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"S({self.lo!r}, {self.hi!r})"


def enlarge(x: Scalar) -> Scalar:
    """Widen ``x`` by one float at each nonzero endpoint (aborts if unsafe)."""
    return _make(_down(x.lo), _up(x.hi))


def compare(x, y) -> int:
    """Three-way comparison; overlapping non-identical intervals abort."""
    if not isinstance(x, Scalar):
        x = Scalar(x)
    if not isinstance(y, Scalar):
        y = Scalar(y)
    if x.hi < y.lo:
        return -1
    if x.lo > y.hi:
        return 1
    if x.lo == y.lo and x.hi == y.hi:
        return 0
    raise CertificationError(f"S.compare: uncomparable {x!r} and {y!r}")


def int_power(x, n: int, one):
    """``x**n`` by repeated squaring, multiplying in the same order as GHC's ``(^)``."""
    if n < 0:
        raise ValueError("negative exponent")
    if n == 0:
        return one

    def g(x, y, z):
        while True:
            if y % 2 == 0:
                x, y = x * x, y // 2
            elif y == 1:
                return x * z
            else:
                x, y, z = x * x, y // 2, x * z

    while n % 2 == 0:
        x, n = x * x, n // 2
    if n == 1:
        return x
    return g(x * x, n // 2, x)


ZERO = Scalar(0.0)
ONE = Scalar(1.0)
