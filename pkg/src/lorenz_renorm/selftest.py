"""Quick randomized soundness checks against exact rational arithmetic.

These are a smoke-level version of the test suite, runnable from an
installed package without any test dependencies.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .funcball import FunctionBall, compose, feval
from .ilinalg import solve
from .scalar import CertificationError, Scalar


def _rand_scalar(rng: random.Random) -> tuple[Scalar, Fraction]:
    a = rng.uniform(-4, 4) * 10 ** rng.randint(-6, 6)
    b = a + abs(rng.gauss(0, 1e-3)) * abs(a)
    x = Fraction(a) + (Fraction(b) - Fraction(a)) * Fraction(rng.random())
    return Scalar(a, b), x


def _scalar_ops(rng: random.Random, trials: int) -> List[str]:
    bad = []
    for _ in range(trials):
        (x, xe), (y, ye) = _rand_scalar(rng), _rand_scalar(rng)
        cases = [("+", x + y, xe + ye), ("-", x - y, xe - ye), ("*", x * y, xe * ye)]
        if y.lo * y.hi > 0:
            cases.append(("/", x / y, xe / ye))
        for name, got, want in cases:
            if not got.contains(want):
                bad.append(f"scalar {name}: {x!r} {y!r} -> {got!r} misses {float(want)!r}")
    return bad


def _poly_value(coeffs, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = c + t * acc
    return acc


def _funcball_ops(rng: random.Random, trials: int) -> List[str]:
    bad = []
    d = 5
    for _ in range(trials):
        p = [Fraction(rng.uniform(-0.3, 0.3)) for _ in range(d)]
        q = [Fraction(rng.uniform(-0.15, 0.15)) for _ in range(d)]
        fp = FunctionBall([Scalar(float(c)) for c in p], 0, d)
        fq = FunctionBall([Scalar(float(c)) for c in q], 0, d)
        t = Fraction(rng.uniform(-0.9, 0.9))
        tf = Scalar(float(t))
        prod = _poly_value(p, t) * _poly_value(q, t)
        comp = _poly_value(p, _poly_value(q, t))
        if not feval(fp * fq, tf).contains(prod):
            bad.append(f"funcball *: {p} {q} at {float(t)}")
        if not feval(compose(fp, fq), tf).contains(comp):
            bad.append(f"funcball compose: {p} {q} at {float(t)}")
    return bad


def _solves(rng: random.Random, trials: int) -> List[str]:
    bad = []
    n = 4
    for _ in range(trials):
        m = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            m[i][i] += 40
        b = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
        x = _exact_solve(m, b)
        got = solve([[Scalar(float(v)) for v in r] for r in m], [Scalar(float(v)) for v in b])
        if not all(g.contains(v) for g, v in zip(got, x)):
            bad.append(f"solve: {m} {b}")
    return bad


def _exact_solve(m, b):
    n = len(m)
    a = [list(r) + [y] for r, y in zip(m, b)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        for i in range(n):
            if i != c:
                f = a[i][c] / a[c][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _aborts() -> List[str]:
    bad = []
    checks = [
        ("recip", lambda: Scalar(-1, 1).recip()),
        ("compare", lambda: Scalar(0, 2) < Scalar(1, 3)),
        ("unsafe", lambda: Scalar(1e-200) * Scalar(1e-200)),
        ("compose", lambda: compose(FunctionBall([1, 1], 0, 3), FunctionBall([0, 1], 0, 3))),
        ("eval", lambda: feval(FunctionBall([1, 1], 0, 3), Scalar(1.0))),
    ]
    for name, fn in checks:
        try:
            fn()
        except CertificationError:
            continue
        bad.append(f"{name} did not abort")
    return bad


def run_selftest(trials: int = 2000, seed: int = 0) -> List[str]:
    """Return a list of failure descriptions (empty on success)."""
    rng = random.Random(seed)
    return (
        _scalar_ops(rng, trials)
        + _funcball_ops(rng, max(1, trials // 10))
        + _solves(rng, max(1, trials // 10))
        + _aborts()
    )
