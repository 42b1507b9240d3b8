"""The Lorenz renormalization operator ``T``, its derivative, and the Newton operator.

Coordinates: a Lorenz map is a pair ``(f, g)`` of functions on the unit disk
(critical exponent 2, domain radii ``sf`` and ``sg``), and for the type
``alpha = {0, 1}``, ``beta = {1, 0, 0}``

    T(f, g) = (f6, g8),   lambda(f) = -f((f(0)**2 - 1) / sf),

with the chains ``f1 .. f6`` and ``g1 .. g8`` computed in :func:`main_op`.
Each ``compose``/``eval`` precondition checked on the way is part of the
proof that ``T`` is defined on the input rectangle.

``Gamma`` is a ``2d x 2d`` point matrix approximating ``DT``; the simplified
Newton operator is ``Phi = (Gamma - I)^-1 (Gamma - T)``.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .funcball import (
    Config,
    FunctionBall,
    LorenzPair,
    approx,
    basis,
    Inner,
    compose,
    deriv,
    deriv_compose,
    feval,
    lshift,
    split,
)
from .ilinalg import apply, interleave, solve_many, subtract_diag, uninterleave
from .poly import pmul
from .scalar import ONE, ZERO, CertificationError, Scalar, enlarge

__all__ = [
    "lambda_",
    "dlambda",
    "main_op",
    "op_T",
    "op_DT",
    "interleave_poly",
    "gamma",
    "lift_poly_op",
    "newton_step",
    "newton_many",
    "op_phi",
    "op_dphi",
    "Gamma",
]

Gamma = list  # row-major list of rows of Scalars


def lambda_(f: FunctionBall, cfg: Config = Config()) -> Scalar:
    """Rescaling factor ``-f((f(0)**2 - 1) / sf)``; depends on ``f`` only."""
    f0 = feval(f, 0)
    return -feval(f, (f0 * f0 - 1) / cfg.sf)


def dlambda(f: FunctionBall, df: FunctionBall, cfg: Config = Config()) -> Scalar:
    """Derivative of :func:`lambda_` at ``f`` in the direction ``df``.

    ``Df`` is evaluated at ``y = (f(0)**2 - 1)/sf``; it is restricted to the
    disk of radius ``|y|`` widened by one float.
    """
    f0 = feval(f, 0)
    y = (f0 * f0 - 1) / cfg.sf
    mu = enlarge(abs(y))
    return -(2 / cfg.sf * f0 * feval(df, 0) * feval(deriv(mu, f), y)) - feval(df, y)


class _Inner:
    """Data shared by every composition ``outer o inner`` in one evaluation."""

    __slots__ = ("outer", "inner", "_dfg")

    def __init__(self, outer: FunctionBall, inner: FunctionBall):
        self.outer = outer
        self.inner = Inner(inner)
        self._dfg = None

    def compose(self, f1: FunctionBall) -> FunctionBall:
        return compose(f1, self.inner)

    def dcompose(self, d_outer: FunctionBall, d_inner: FunctionBall) -> FunctionBall:
        """``Df o g * dg + df o g`` with ``Df o g`` computed once."""
        if self._dfg is None:
            self._dfg = deriv_compose(self.outer, self.inner)
        return self._dfg * d_inner + self.compose(d_outer)


def _check_constant(f: FunctionBall, value: float, name: str) -> None:
    # the constant coefficient discarded by lshift must be analytically zero,
    # so its enclosure has to contain the known exact value
    c = f.p[0] if f.p else ZERO
    if not (c.lo <= value <= c.hi):
        raise CertificationError(f"lshift: constant coefficient of {name} excludes {value}: {c!r}")


def main_op(
    x: LorenzPair, ds: Sequence[LorenzPair] = (), cfg: Config = Config()
) -> tuple[LorenzPair, list[LorenzPair]]:
    """Return ``(T(f, g), [DT_(f,g) (df_k, dg_k) for each tangent])``."""
    f, g = x
    d, sf, sg = f.d, cfg.sf, cfg.sg
    if d != cfg.d or g.d != cfg.d:
        raise ValueError(f"tail degree of input ({f.d}, {g.d}) differs from config ({cfg.d})")

    l = lambda_(f, cfg)
    l2 = l * l
    pf = FunctionBall._raw(((l2 - 1) / sf, l2), ZERO, d)
    pg = FunctionBall._raw((ZERO, l2), ZERO, d)

    at_pf = _Inner(f, pf)
    f1 = at_pf.compose(f)
    f2 = f1 * f1
    f3 = f2.sdiv(sg)
    at_f3 = _Inner(g, f3)
    f4 = at_f3.compose(g)
    f5 = -1 + f2 * f4
    f6 = f5.sdiv(l)

    at_pg = _Inner(g, pg)
    g1 = at_pg.compose(g)
    g2 = (pg * g1).smul(sg)
    g3 = (g2 * (g2 - 2)).sdiv(sf)
    at_g3 = _Inner(f, g3)
    g4 = at_g3.compose(f)
    g5 = (g4 * g4 - 1).sdiv(sf)
    at_g5 = _Inner(f, g5)
    g6 = at_g5.compose(f)
    g7 = g6.sdiv(l)
    # g8 = (g7 + 1)/(sg w): g7(0) = -1 exactly, so dropping the constant
    # coefficient in lshift realizes the "+1"
    _check_constant(g7, -1.0, "g7")
    g8 = lshift(g7).sdiv(sg)

    t = LorenzPair(split(d, f6), split(d, g8))
    if not ds:
        return t, []

    inv_sf = 1 / sf
    out = []
    for df, dg in ds:
        dl = dlambda(f, df, cfg)
        c = 2 * l * dl
        dpf = FunctionBall._raw(pmul((c,), (inv_sf, ONE)), ZERO, d)
        dpg = FunctionBall._raw((ZERO, c), ZERO, d)
        dl_l2 = dl / l2

        df1 = at_pf.dcompose(df, dpf)
        df2 = 2 * f1 * df1
        df3 = df2.sdiv(sg)
        df4 = at_f3.dcompose(dg, df3)
        df5 = df2 * f4 + f2 * df4
        df6 = df5.sdiv(l) - f5.smul(dl_l2)

        dg1 = at_pg.dcompose(dg, dpg)
        dg2 = (dpg * g1 + pg * dg1).smul(sg)
        dg3 = (2 * (dg2 * g2 - dg2)).sdiv(sf)
        dg4 = at_g3.dcompose(df, dg3)
        dg5 = (2 * g4 * dg4).sdiv(sf)
        dg6 = at_g5.dcompose(df, dg5)
        dg7 = dg6.sdiv(l) - g6.smul(dl_l2)
        # dg7(0) = 0 exactly by the same cancellation as for g7
        _check_constant(dg7, 0.0, "dg7")
        dg8 = lshift(dg7).sdiv(sg)
        out.append(LorenzPair(split(d, df6), split(d, dg8)))
    return t, out


def op_T(x: LorenzPair, cfg: Config = Config()) -> LorenzPair:
    return main_op(x, (), cfg)[0]


def op_DT(x: LorenzPair, ds: Sequence[LorenzPair], cfg: Config = Config()) -> list[LorenzPair]:
    return main_op(x, ds, cfg)[1]


def interleave_poly(x: LorenzPair) -> list:
    """Pad both polynomial parts to length ``d`` and interleave them."""
    d = x.f.d

    def pad(p):
        p = list(p[:d])
        return p + [ZERO] * (d - len(p))

    return interleave(pad(x.f.p), pad(x.g.p))


def gamma(x: LorenzPair, cfg: Config = Config()) -> Gamma:
    """Point matrix whose column ``j`` is ``DT_x eta_j`` collapsed and interleaved."""
    d = cfg.d
    cols = [interleave_poly(approx(y)) for y in op_DT(x, [basis(k, d) for k in range(2 * d)], cfg)]
    return [list(row) for row in zip(*cols)]


def _split_pair(x: LorenzPair) -> tuple[FunctionBall, FunctionBall]:
    d = x.f.d
    return split(d, x.f), split(d, x.g)


def _reattach(s: Scalar, vec: list, f: FunctionBall, g: FunctionBall) -> LorenzPair:
    pf, pg = uninterleave(vec)
    d = f.d
    return LorenzPair(FunctionBall._raw(tuple(pf), s * f.e, d), FunctionBall._raw(tuple(pg), s * g.e, d))


def lift_poly_op(s: Scalar, vecop: Callable[[list], list], x: LorenzPair) -> LorenzPair:
    """Apply the block operator ``[[M, 0], [0, s I]]`` to ``x``.

    ``vecop`` acts on the interleaved polynomial parts; the tail bounds are
    multiplied by ``s``.
    """
    f, g = _split_pair(x)
    return _reattach(s, vecop(interleave_poly(LorenzPair(f, g))), f, g)


def newton_many(m: Gamma, txs: Sequence[LorenzPair], xs: Sequence[LorenzPair]) -> list[LorenzPair]:
    """``(M - I)^-1 (M x - T x)`` for each pair ``(T x, x)``.

    All right-hand sides share one elimination of ``M - I``; each column
    undergoes the same operations as a separate solve.
    """
    parts = []
    for tx, x in zip(txs, xs):
        mx = lift_poly_op(ZERO, lambda v: apply(m, v), x)
        parts.append(_split_pair(mx - tx))
    if not parts:
        return []
    vecs = [interleave_poly(LorenzPair(f, g)) for f, g in parts]
    sols = solve_many(subtract_diag(m, 1), vecs)
    return [_reattach(ONE, sol, f, g) for sol, (f, g) in zip(sols, parts)]


def newton_step(m: Gamma, tx: LorenzPair, x: LorenzPair) -> LorenzPair:
    return newton_many(m, [tx], [x])[0]


def op_phi(m: Gamma, x: LorenzPair, cfg: Config = Config()) -> LorenzPair:
    return newton_step(m, op_T(x, cfg), x)


def op_dphi(m: Gamma, x: LorenzPair, ds: Sequence[LorenzPair], cfg: Config = Config()) -> list[LorenzPair]:
    ds = list(ds)
    return newton_many(m, op_DT(x, ds, cfg), ds)
