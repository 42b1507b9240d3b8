"""Rectangle sets of polynomials.

A polynomial rectangle is a tuple of interval coefficients, constant term
first.  The empty tuple is the zero polynomial.  No degree management happens
here; truncation and tail bounds belong to :mod:`lorenz_renorm.funcball`.

The functions are written against the arithmetic protocol of
:class:`~lorenz_renorm.scalar.Scalar` only, so they also work for complex
rectangles.
"""

from __future__ import annotations

from typing import Sequence, Tuple

from .scalar import ZERO, Scalar

PolyRect = Tuple[Scalar, ...]

__all__ = ["PolyRect", "padd", "pneg", "psub", "pmul", "peval", "pnorm", "pderiv", "pscale"]


def padd(p: Sequence, q: Sequence) -> PolyRect:
    """Coefficient-wise sum; the shorter operand is zero-extended."""
    if len(p) < len(q):
        p, q = q, p
    n = len(q)
    return tuple(p[k] + q[k] for k in range(n)) + tuple(p[n:])


def pneg(p: Sequence) -> PolyRect:
    return tuple(-c for c in p)


def psub(p: Sequence, q: Sequence) -> PolyRect:
    return padd(p, pneg(q))


def pmul(p: Sequence, q: Sequence) -> PolyRect:
    """Cauchy product ``(c + z*r) * q = c*q[0] : c*q[1:] + r*q``.

    The accumulation order follows that recursion, i.e. for each output index
    the terms are summed from the highest power of ``p`` down.
    """
    if not p or not q:
        return ()
    q0 = q[0]
    qt = q[1:]
    acc: PolyRect = ()
    for c in reversed(p):
        acc = (c * q0,) + padd(tuple(c * b for b in qt), acc)
    return acc


def pscale(p: Sequence, x) -> PolyRect:
    """``p * [x]`` for a constant ``x``."""
    return tuple(c * x for c in p)


def peval(p: Sequence, t):
    """Horner evaluation ``c + t * peval(q, t)``; the empty polynomial is 0."""
    acc = ZERO
    for c in reversed(p):
        acc = c + t * acc
    return acc


def pnorm(p: Sequence) -> Scalar:
    """Interval containing the l1 norm of every member of ``p``."""
    acc = ZERO
    for c in p:
        acc = acc + abs(c)
    return acc


def pderiv(p: Sequence) -> PolyRect:
    """Derivative by the recursion ``D(c + z q) = q + z Dq``.

    Coefficient ``k`` is ``(k + 1) * p[k + 1]``, built as a chain of
    interval additions.
    """
    out: PolyRect = ()
    for k in range(len(p) - 1, 0, -1):
        out = padd(tuple(p[k:]), (ZERO,) + out)
    return out
