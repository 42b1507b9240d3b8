"""Rectangle enclosures of analytic functions on the unit disk.

A :class:`FunctionBall` ``F(p, e)`` with tail degree ``d`` stands for the set

    { a_0 + ... + a_n z^n + z^d h(z) :  a_k in p[k],  ||h|| <= upper(e) }

where ``||.||`` is the l1 norm of Taylor coefficients.  Only the upper bound of
``e`` is meaningful.  All operations below are membership-sound: applying
the exact operation to members of the inputs yields a member of the output.

Products and compositions are split at ``d + 1`` rather than ``d`` so that
one division by ``z`` still leaves ``d`` polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .poly import padd, pderiv, peval, pmul, pneg, pnorm, pscale
from .scalar import ONE, ZERO, CertificationError, Scalar, compare, int_power

__all__ = [
    "Config",
    "FunctionBall",
    "LorenzPair",
    "split",
    "norm",
    "sumnorm",
    "dist",
    "deriv",
    "compose_poly",
    "compose",
    "deriv_compose",
    "Inner",
    "product_box",
    "dcompose",
    "lshift",
    "feval",
    "scale",
    "approx",
    "basis",
    "tangents",
    "opnorm",
    "ball",
    "symmetric",
]


@dataclass(frozen=True)
class Config:
    """Tail degree and domain radii of the coordinate changes."""

    d: int = 13
    sf: Scalar = field(default_factory=lambda: Scalar.from_decimal("2.2"))
    sg: Scalar = field(default_factory=lambda: Scalar.from_decimal("0.5"))

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("tail degree d must be at least 2")


def _scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


def symmetric(e: Scalar) -> Scalar:
    """The interval ``[-upper(e), upper(e)]``."""
    u = e.hi
    return Scalar(-u, u)


class FunctionBall:
    """Polynomial rectangle ``p`` plus an l1 bound ``e`` on the ``z**d`` tail."""

    __slots__ = ("p", "e", "d")

    def __init__(self, p: Sequence = (), e=ZERO, d: int = 13):
        self.p = tuple(_scalar(c) for c in p)
        self.e = _scalar(e)
        self.d = d

    @classmethod
    def _raw(cls, p: tuple, e: Scalar, d: int) -> FunctionBall:
        f = object.__new__(cls)
        f.p = p
        f.e = e
        f.d = d
        return f

    def const(self, c) -> FunctionBall:
        """The constant function ``c`` with this ball's tail degree."""
        return FunctionBall._raw((_scalar(c),), ZERO, self.d)

    def _coerce(self, other) -> FunctionBall:
        if isinstance(other, FunctionBall):
            if other.d != self.d:
                raise ValueError(f"tail degree mismatch: {self.d} vs {other.d}")
            return other
        if isinstance(other, int):
            return self.const(other)
        return NotImplemented

    # -- ring operations -------------------------------------------------
    def __add__(self, other) -> FunctionBall:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FunctionBall._raw(padd(self.p, other.p), self.e + other.e, self.d)

    __radd__ = __add__

    def __neg__(self) -> FunctionBall:
        return FunctionBall._raw(pneg(self.p), self.e, self.d)

    def __sub__(self, other) -> FunctionBall:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> FunctionBall:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> FunctionBall:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p1, e1, p2, e2 = self.p, self.e, other.p, other.e
        # ||h3|| <= e2 ||p1|| + e1 ||p2|| + e1 e2
        e3 = e2 * pnorm(p1) if e2.hi != 0.0 or e2.lo != 0.0 else ZERO
        if e1.hi != 0.0 or e1.lo != 0.0:
            e3 = e3 + e1 * pnorm(p2) + e1 * e2
        return split(self.d + 1, FunctionBall._raw(pmul(p1, p2), e3, self.d))

    def __rmul__(self, other) -> FunctionBall:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __pow__(self, n: int) -> FunctionBall:
        return int_power(self, n, self.const(1))

    # -- scaling by an interval ------------------------------------------
    def smul(self, x) -> FunctionBall:
        """Right scaling ``f .* x``."""
        x = _scalar(x)
        return FunctionBall._raw(pscale(self.p, x), self.e * abs(x), self.d)

    def sdiv(self, x) -> FunctionBall:
        """Right division ``f ./ x`` (aborts if ``x`` contains 0)."""
        x = _scalar(x)
        r = 1 / x
        return FunctionBall._raw(pscale(self.p, r), self.e / abs(x), self.d)

    # -- convenience -------------------------------------------------------
    def norm(self) -> Scalar:
        return norm(self)

    def __call__(self, t) -> Scalar:
        return feval(self, t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionBall):
            return NotImplemented
        return self.p == other.p and self.e == other.e and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.d))

    def __repr__(self) -> str:
        return f"F({list(self.p)!r}, {self.e!r}, d={self.d})"


@dataclass(frozen=True)
class LorenzPair:
    """Element ``(f, g)`` of ``Y = X x X`` with norm ``||f|| + ||g||``."""

    f: FunctionBall
    g: FunctionBall

    def __iter__(self) -> Iterator[FunctionBall]:
        yield self.f
        yield self.g

    def __add__(self, other: LorenzPair) -> LorenzPair:
        return LorenzPair(self.f + other.f, self.g + other.g)

    def __sub__(self, other: LorenzPair) -> LorenzPair:
        return LorenzPair(self.f - other.f, self.g - other.g)

    def __neg__(self) -> LorenzPair:
        return LorenzPair(-self.f, -self.g)


def split(k: int, f: FunctionBall) -> FunctionBall:
    """Move the coefficients of index ``>= k`` into the tail bound."""
    if k < f.d:
        raise ValueError(f"split at {k} below tail degree {f.d} is unsound")
    p = f.p
    if len(p) <= k:
        return f
    return FunctionBall._raw(p[:k], f.e + pnorm(p[k:]), f.d)


def norm(f: FunctionBall) -> Scalar:
    return pnorm(f.p) + f.e


def sumnorm(x: LorenzPair) -> Scalar:
    return norm(x.f) + norm(x.g)


def dist(x: LorenzPair, y: LorenzPair) -> Scalar:
    return sumnorm(x - y)


def _is_less_than_one(x: Scalar) -> bool:
    try:
        return compare(x, ONE) < 0
    except CertificationError:
        return False


def deriv(mu, f: FunctionBall) -> FunctionBall:
    """Enclosure of ``Df`` restricted to the disk of radius ``mu < 1``.

    The unknown ``h`` contributes ``d h(z) z**(d-1)`` (absorbed into an
    interval coefficient) and ``z**d Dh`` with ``||Dh(mu .)|| <= ||h|| / (1-mu)**2``.
    """
    mu = _scalar(mu)
    if not _is_less_than_one(mu):
        raise CertificationError(f"deriv: mu is not < 1 (mu = {mu!r})")
    d, e = f.d, f.e
    s = (Scalar(d) * Scalar(e.hi)).hi
    tail = (ZERO,) * (d - 1) + (Scalar(-s, s),)
    p1 = padd(pderiv(f.p), tail)
    if e.hi == 0.0 and e.lo == 0.0:
        e1 = ZERO
    else:
        one_minus = ONE - mu
        e1 = e / (one_minus * one_minus)
    return FunctionBall._raw(p1, e1, d)


def compose_poly(p: Sequence, f2: FunctionBall) -> FunctionBall:
    """``p o f2`` for a polynomial rectangle ``p`` (always defined)."""
    acc = FunctionBall._raw((), ZERO, f2.d)
    for c in reversed(p):
        acc = FunctionBall._raw((c,), ZERO, f2.d) + f2 * acc
    return acc


def power_tail(f2: FunctionBall, n: int | None = None) -> FunctionBall:
    """``f2**n`` (default ``n = d``) split at ``d + 1``."""
    return split(f2.d + 1, f2 ** (f2.d if n is None else n))


_NEGLIGIBLE = 2.0**-300


def _kappa(g_norm: Scalar, c_lo: float, weighted: bool) -> float:
    """Upper bound of ``sup_k w_k (N**k - c**k)`` over ``k >= 1``.

    ``N`` bounds ``||g||`` from above and ``c`` bounds ``|g(0)|`` from below,
    so ``||g**k - g(0)**k|| <= N**k - c**k``.  Weights are ``w_k = 1`` or
    ``w_k = k + 1`` (the latter for derivatives of the tail).
    """
    n = Scalar(g_norm.hi)
    if n.hi == 0.0:
        return 0.0
    c = Scalar(min(c_lo, n.hi))
    nk, ck = ONE, ONE
    best = 0.0
    k = 0
    while True:
        k += 1
        nk = nk * n
        ck = ck * c if ck.hi > _NEGLIGIBLE else ZERO
        w = k + 1 if weighted else 1
        best = max(best, (w * (nk - ck)).hi)
        bound = (w * nk).hi
        # from here on w_k N**k decreases, so it dominates every later term
        if (not weighted or (k + 2) * n.hi <= k + 1) and (bound <= best or nk.hi < _NEGLIGIBLE):
            return max(best, bound)


class Inner:
    """An inner function ``g`` together with data reused by ``f o g``.

    Creating it checks ``||g|| < 1``.  Powers of ``g`` and the bounds on
    ``||g**k - g(0)**k||`` are computed on first use.
    """

    __slots__ = ("g", "norm", "_power", "_power_m1", "_kappa1", "_kappa2")

    def __init__(self, g: FunctionBall):
        n = norm(g)
        if not _is_less_than_one(n):
            raise CertificationError("compose: |f2| is too large")
        self.g = g
        self.norm = n
        self._power = self._power_m1 = None
        self._kappa1 = self._kappa2 = None

    @property
    def power(self) -> FunctionBall:
        if self._power is None:
            self._power = power_tail(self.g)
        return self._power

    @property
    def power_m1(self) -> FunctionBall:
        if self._power_m1 is None:
            self._power_m1 = power_tail(self.g, self.g.d - 1)
        return self._power_m1

    def _c_lo(self) -> float:
        return abs(self.g.p[0]).lo if self.g.p else 0.0

    @property
    def kappa1(self) -> float:
        if self._kappa1 is None:
            self._kappa1 = _kappa(self.norm, self._c_lo(), False)
        return self._kappa1

    @property
    def kappa2(self) -> float:
        if self._kappa2 is None:
            self._kappa2 = _kappa(self.norm, self._c_lo(), True)
        return self._kappa2


def product_box(q: FunctionBall, eps: float) -> FunctionBall:
    """Enclosure of ``{q v : ||v|| <= eps}`` for an unknown function ``v``.

    Coefficient ``k < d`` of ``q v`` is a combination of ``q_0 .. q_k`` with
    weights of total size ``eps``; everything from ``z**d`` on is bounded by
    ``||q|| eps``.
    """
    d = q.d
    if eps == 0.0:
        return FunctionBall._raw((), ZERO, d)
    ep = Scalar(eps)
    coeffs = []
    m = 0.0
    for k in range(d):
        if k < len(q.p):
            m = max(m, q.p[k].magnitude_ub())
        r = (ep * Scalar(m)).hi
        coeffs.append(Scalar(-r, r))
    return FunctionBall._raw(tuple(coeffs), Scalar((norm(q) * ep).hi), d)


def _compose_core(f1: FunctionBall, inner: Inner) -> FunctionBall:
    d = f1.d
    c1 = split(d + 1, compose_poly(f1.p, inner.g))
    e1 = f1.e
    if e1.hi == 0.0 and e1.lo == 0.0:
        # [0]*p2' and e1*e2' vanish exactly
        return c1
    c2 = inner.power
    s = symmetric(e1)
    p3 = padd(c1.p, pmul((s,), c2.p))
    return FunctionBall._raw(p3, c1.e + e1 * c2.e, d)


def compose(f1: FunctionBall, f2: FunctionBall | Inner) -> FunctionBall:
    """Enclosure of ``f1 o f2``; requires ``||f2|| < 1``.

    With ``f1 = p1 + z**d h1``::

        f1 o f2 = p1 o f2 + f2**d h1(f2(0)) + f2**d (h1 o f2 - h1(f2(0)))

    The middle term is ``f2**d`` times a constant in ``[-e1, e1]``.  The last
    one is ``f2**d`` times a function of norm at most ``e1 * kappa1`` and is
    enclosed by :func:`product_box`.  ``f2`` may be passed as an
    :class:`Inner` to share work between compositions.
    """
    inner = f2 if isinstance(f2, Inner) else Inner(f2)
    core = _compose_core(f1, inner)
    e1 = f1.e
    if e1.hi == 0.0 and e1.lo == 0.0:
        return core
    return core + product_box(inner.power, (Scalar(e1.hi) * Scalar(inner.kappa1)).hi)


def deriv_compose(f: FunctionBall, g: FunctionBall | Inner) -> FunctionBall:
    """Enclosure of ``Df o g``, with ``Df`` restricted to the disk of radius ``||g||``.

    ``D(z**d h) = d z**(d-1) h + z**d Dh``; after composing with ``g`` the
    non-constant parts of ``h o g`` and ``Dh o g`` are bounded by
    ``e kappa1`` and ``e kappa2`` and enclosed next to ``g**(d-1)`` and ``g**d``.
    """
    inner = g if isinstance(g, Inner) else Inner(g)
    core = _compose_core(deriv(inner.norm, f), inner)
    e = f.e
    if e.hi == 0.0 and e.lo == 0.0:
        return core
    eh = Scalar(e.hi)
    r1 = (eh * Scalar(f.d) * Scalar(inner.kappa1)).hi
    r2 = (eh * Scalar(inner.kappa2)).hi
    return core + product_box(inner.power_m1, r1) + product_box(inner.power, r2)


def dcompose(f: FunctionBall, g: FunctionBall | Inner, df: FunctionBall, dg: FunctionBall) -> FunctionBall:
    """Derivative of ``(f, g) -> f o g`` applied to ``(df, dg)``.

    ``Df`` only needs to be valid on the disk of radius ``||g||``, which
    contains the image of ``g``.
    """
    inner = g if isinstance(g, Inner) else Inner(g)
    return deriv_compose(f, inner) * dg + compose(df, inner)


def lshift(f: FunctionBall) -> FunctionBall:
    """Division by ``z`` of a function whose constant coefficient is exactly 0.

    The constant coefficient interval is discarded, not checked.  Callers must
    know analytically that every enclosed function vanishes at 0.
    ``h(0)`` is unknown beyond ``|h(0)| <= ||h||`` and is absorbed at ``z**(d-1)``.
    """
    d = f.d
    q = f.p[1:]
    tail = (ZERO,) * (d - 1) + (symmetric(f.e),)
    return FunctionBall._raw(padd(q, tail), f.e, d)


def feval(f: FunctionBall, t) -> Scalar:
    """Enclosure of ``f(t)`` for ``|t| < 1``."""
    t = _scalar(t)
    if not _is_less_than_one(abs(t)):
        raise CertificationError(f"eval: not in domain t={t!r}")
    v = peval(f.p, t)
    e = f.e
    if e.hi == 0.0 and e.lo == 0.0:
        return v
    return v + int_power(t, f.d, ONE) * symmetric(e)


def scale(f: FunctionBall, x, op: str = "mul") -> FunctionBall:
    if op == "mul":
        return f.smul(x)
    if op == "div":
        return f.sdiv(x)
    raise ValueError(f"unknown scaling op {op!r}")


def _collapse(f: FunctionBall) -> FunctionBall:
    return FunctionBall._raw(tuple(Scalar((c.lo + c.hi) / 2) for c in f.p), ZERO, f.d)


def approx(x: LorenzPair) -> LorenzPair:
    """Non-rigorous projection: coefficient midpoints, tails dropped."""
    return LorenzPair(_collapse(x.f), _collapse(x.g))


def _xi(k: int, d: int) -> FunctionBall:
    return FunctionBall._raw((ZERO,) * k + (ONE,), ZERO, d)


def basis(k: int, d: int = 13) -> LorenzPair:
    """``eta_{2k} = (z**k, 0)`` and ``eta_{2k+1} = (0, z**k)``."""
    zero = FunctionBall._raw((ZERO,), ZERO, d)
    xi = _xi(k // 2, d)
    return LorenzPair(xi, zero) if k % 2 == 0 else LorenzPair(zero, xi)


def tangents(d: int = 13) -> list[LorenzPair]:
    """The two tail balls ``B_d x 0``, ``0 x B_d`` followed by ``eta_0 .. eta_{2d-1}``."""
    zero = FunctionBall._raw((ZERO,), ZERO, d)
    tail = FunctionBall._raw((), ONE, d)
    return [LorenzPair(tail, zero), LorenzPair(zero, tail)] + [basis(k, d) for k in range(2 * d)]


def opnorm(op: Callable[[list[LorenzPair]], list[LorenzPair]], d: int = 13) -> float:
    """Upper bound on the l1 operator norm of a linear ``op`` on ``Y``.

    The norm is the largest column norm, taken over the first ``2d`` basis
    vectors and the two sets of pure tails.
    """
    images = op(tangents(d))
    return max(sumnorm(y).hi for y in images)


def _ball(r: float, f: FunctionBall) -> FunctionBall:
    if r == 0:
        return f
    # pad to d coefficients so perturbations of absent low coefficients are covered
    w = Scalar(-r, r)
    p = tuple(f.p) + (ZERO,) * (f.d - len(f.p))
    return FunctionBall._raw(tuple(c + w for c in p), f.e + Scalar(r), f.d)


def ball(r: float, x: LorenzPair) -> LorenzPair:
    """Rectangle containing the closed ball of radius ``r`` around ``x``."""
    return LorenzPair(_ball(r, x.f), _ball(r, x.g))
