"""Complex rectangles and rigorous enclosures of arcs of the unit circle.

A :class:`ComplexRect` is a product ``re + i*im`` of two :class:`Scalar`
intervals.  It implements the same arithmetic protocol as ``Scalar``
(including ``magnitude_ub``), so the elimination in
:mod:`lorenz_renorm.ilinalg` runs unchanged on complex matrices.  Real
``Scalar`` operands mix in directly and are treated as ``x + 0i`` without
spending rounding on the zero imaginary part.
"""

from __future__ import annotations

import math
from typing import List, Tuple

from .scalar import ONE, ZERO, Scalar

__all__ = [
    "ComplexRect",
    "Arc",
    "PI",
    "HALF_PI",
    "cplx",
    "cplx_div",
    "modulus_ub",
    "sin_cos",
    "unit_circle_enclosure",
    "arcs",
]

# math.pi is the double just below pi; its successor is just above
PI = Scalar(math.pi, math.nextafter(math.pi, math.inf))
HALF_PI = PI * Scalar(0.5)

Arc = Tuple[float, float]

_TINY = 2.0**-400


def _as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


class ComplexRect:
    """The set ``{a + bi : a in re, b in im}``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=ZERO):
        self.re = _as_scalar(re)
        self.im = _as_scalar(im)

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> ComplexRect:
        return ComplexRect(-self.re, -self.im)

    def __add__(self, other) -> ComplexRect:
        if isinstance(other, ComplexRect):
            return ComplexRect(self.re + other.re, self.im + other.im)
        if isinstance(other, (Scalar, int, float)):
            return ComplexRect(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> ComplexRect:
        if isinstance(other, (ComplexRect, Scalar, int, float)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> ComplexRect:
        if isinstance(other, (Scalar, int, float)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other) -> ComplexRect:
        if isinstance(other, ComplexRect):
            a, b, c, d = self.re, self.im, other.re, other.im
            return ComplexRect(a * c - b * d, a * d + b * c)
        if isinstance(other, (Scalar, int, float)):
            return ComplexRect(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> ComplexRect:
        return ComplexRect(self.re, -self.im)

    def abs2(self) -> Scalar:
        """Enclosure of ``re**2 + im**2``; squares are taken of ``|re|``, ``|im|``."""
        a, b = abs(self.re), abs(self.im)
        return a * a + b * b

    def recip(self) -> ComplexRect:
        return self.conj() * self.abs2().recip()

    def __truediv__(self, other) -> ComplexRect:
        if isinstance(other, ComplexRect):
            return cplx_div(self, other)
        if isinstance(other, (Scalar, int, float)):
            r = _as_scalar(other).recip()
            return ComplexRect(self.re * r, self.im * r)
        return NotImplemented

    def __rtruediv__(self, other) -> ComplexRect:
        if isinstance(other, (Scalar, int, float)):
            return cplx_div(ComplexRect(other), self)
        return NotImplemented

    # -- queries ---------------------------------------------------------
    def magnitude_ub(self) -> float:
        """Approximate sup of ``|z|``; used only to rank pivots."""
        return math.hypot(self.re.magnitude_ub(), self.im.magnitude_ub())

    def contains(self, z) -> bool:
        if isinstance(z, ComplexRect):
            return self.re.contains(z.re) and self.im.contains(z.im)
        if isinstance(z, complex):
            return self.re.contains(z.real) and self.im.contains(z.imag)
        return self.re.contains(z) and self.im.contains(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, ComplexRect):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"C({self.re!r}, {self.im!r})"


def cplx(op: str, x: ComplexRect, y: ComplexRect | None = None) -> ComplexRect:
    """Dispatch ``add``, ``mul`` or ``neg`` by name."""
    if op == "neg":
        return -x
    if y is None:
        raise ValueError(f"cplx: {op} needs two operands")
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"cplx: unknown operation {op!r}")


def cplx_div(x: ComplexRect, y: ComplexRect) -> ComplexRect:
    """``x * conj(y) / |y|**2``; aborts when ``|y|**2`` may vanish."""
    return (x * y.conj()) * y.abs2().recip()


def _sqrt_ub(s: float) -> float:
    """Smallest-ish double ``y`` with ``y*y >= s``, proven in interval arithmetic."""
    if s <= 0.0:
        return 0.0
    y = math.sqrt(s)
    while True:
        sq = Scalar(y) * Scalar(y)
        if sq.lo >= s:
            return y
        y = math.nextafter(y, math.inf)


def modulus_ub(x) -> Scalar:
    """``[0, u]`` with ``u`` a rigorous upper bound of ``|z|`` over ``x``."""
    if isinstance(x, Scalar):
        return Scalar(0.0, x.magnitude_ub())
    a = Scalar(x.re.magnitude_ub())
    b = Scalar(x.im.magnitude_ub())
    return Scalar(0.0, _sqrt_ub((a * a + b * b).hi))


# -- sine and cosine ------------------------------------------------------


def _taylor(r: Scalar, degree: int) -> Tuple[Scalar, Scalar]:
    """Enclose ``(cos r, sin r)`` for ``|r| <= 1`` with a Lagrange remainder.

    Every derivative of sin and cos is bounded by 1, so truncating after
    ``r**(k-1)`` costs at most ``sup|r|**k / k!``, which the interval for the
    first omitted term encloses.  The series stops early once terms drop
    below ``2**-400``, keeping all endpoints in the safe range.
    """
    mag = r.magnitude_ub()
    if mag == 0.0:
        return ONE, ZERO
    acc = [ONE, ZERO]  # cos, sin
    term = ONE  # r**k / k!
    for k in range(1, max(degree, 1) + 2):
        if term.magnitude_ub() * mag < _TINY:
            rem = _TINY
            break
        term = term * r / k
        if k == max(degree, 1) + 1:
            rem = term.magnitude_ub()
            break
        signed = term if (k // 2) % 2 == 0 else -term
        acc[k % 2] = acc[k % 2] + signed
    slack = Scalar(-rem, rem)
    return acc[0] + slack, acc[1] + slack


def sin_cos(t: float, degree: int = 20) -> Tuple[Scalar, Scalar]:
    """Rigorous ``(cos t, sin t)`` for a double ``t``.

    The argument is reduced by the nearest multiple ``k`` of ``pi/2`` using
    the interval :data:`PI`, then the quadrant is undone by exact sign and
    component swaps.
    """
    k = round(t / (math.pi / 2))
    r = Scalar(t) - HALF_PI * k
    c, s = _taylor(r, degree)
    q = k % 4
    if q == 0:
        return c, s
    if q == 1:
        return -s, c
    if q == 2:
        return -c, -s
    return s, -c


def _hull(a: Scalar, b: Scalar) -> Scalar:
    return Scalar(min(a.lo, b.lo), max(a.hi, b.hi))


def unit_circle_enclosure(arc: Arc, degree: int = 20) -> ComplexRect:
    """A rectangle containing ``exp(it)`` for every ``t`` in the arc.

    ``cos`` and ``sin`` are monotone between consecutive multiples of
    ``pi/2``, so the hull of the endpoint values and of the values at any
    multiple of ``pi/2`` that may lie inside the arc covers the arc.
    """
    t_lo, t_hi = arc
    if not t_lo <= t_hi:
        raise ValueError(f"empty arc {arc!r}")
    if t_hi - t_lo > math.pi / 2:
        raise ValueError(f"arc {arc!r} is wider than pi/2")
    c0, s0 = sin_cos(t_lo, degree)
    c1, s1 = sin_cos(t_hi, degree)
    re, im = _hull(c0, c1), _hull(s0, s1)
    j_lo = math.floor(t_lo / (math.pi / 2)) - 1
    j_hi = math.ceil(t_hi / (math.pi / 2)) + 1
    for j in range(j_lo, j_hi + 1):
        m = HALF_PI * j
        if m.hi < t_lo or m.lo > t_hi:
            continue
        cj, sj = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[j % 4]
        re = _hull(re, Scalar(cj))
        im = _hull(im, Scalar(sj))
    return ComplexRect(re, im)


def arcs(n: int) -> List[Arc]:
    """``n`` equal arcs covering ``[0, 2 pi]``; neighbours share endpoints.

    The last endpoint is twice the upper bound of pi, so the exact ``2 pi``
    is covered.
    """
    if n < 5:
        # with 4 arcs the last one, ending at 2 * PI.hi, is slightly wider than pi/2
        raise ValueError("need at least 5 arcs so that each is at most pi/2 wide")
    step = 2 * math.pi / n
    ts = [k * step for k in range(n)] + [2 * PI.hi]
    return [(ts[k], ts[k + 1]) for k in range(n)]
