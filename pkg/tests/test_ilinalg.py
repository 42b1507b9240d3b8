from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from oracles import contains, exact_solve, frac_in

from lorenz_renorm import ilinalg
from lorenz_renorm.ilinalg import (
    apply,
    interleave,
    pairs,
    solve,
    solve_many,
    splits,
    subtract_diag,
    uninterleave,
)
from lorenz_renorm.scalar import CertificationError, Scalar

S = Scalar


def _m(rows):
    return [[S(x) for x in r] for r in rows]


def _v(xs):
    return [S(x) for x in xs]


def _encloses(res, exact):
    return all(r.contains(x) for r, x in zip(res, exact))


def test_apply_examples():
    assert _encloses(apply(_m([[1, 2], [3, 4]]), _v([1, 1])), [3, 7])
    x = [S(0.5, 0.75), S(-2)]
    assert _encloses(apply(_m([[1, 0], [0, 1]]), x), [0.5, -2]) and apply(_m([[1, 0], [0, 1]]), x)[0].contains(x[0])
    # the shorter operand is treated as zero-extended
    assert _encloses(apply(_m([[1, 2], [3, 4]]), _v([1])), [1, 3])


def test_strict_shapes(monkeypatch):
    monkeypatch.setattr(ilinalg, "STRICT_SHAPES", True)
    with pytest.raises(AssertionError):
        apply(_m([[1, 2], [3, 4]]), _v([1]))
    with pytest.raises(AssertionError):
        solve(_m([[1, 2]]), _v([1]))


def test_solve_examples():
    assert _encloses(solve(_m([[2, 0], [0, 4]]), _v([2, 8])), [1, 2])
    assert _encloses(solve(_m([[0, 1], [1, 0]]), _v([3, 4])), [4, 3])
    with pytest.raises(CertificationError, match="S.recip"):
        solve(_m([[1, 1], [1, 1]]), _v([1, 2]))


def test_solve_26x26():
    rng = random.Random(26)
    n = 26
    m = [[Fraction(rng.uniform(-1, 1)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] += 8
    b = [Fraction(rng.uniform(-1, 1)) for _ in range(n)]
    res = solve([[S(float(x)) for x in r] for r in m], [S(float(x)) for x in b])
    exact = exact_solve(m, b)
    assert all(contains(r, x) for r, x in zip(res, exact))
    assert max(r.width() for r in res) < 1e-12


def _random_system(rng, n):
    while True:
        mid = np.array([[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)])
        if np.linalg.cond(mid) <= 1e3:
            break
    m = []
    for row in mid:
        r = []
        for x in row:
            w = rng.uniform(0, 1e-6) if rng.random() < 0.8 else 0.0
            r.append(S(x - w, x + w))
        m.append(r)
    b = []
    for _ in range(n):
        x = rng.uniform(-1, 1)
        w = rng.uniform(0, 1e-6)
        b.append(S(x - w, x + w))
    return m, b


def test_solve_containment():
    rng = random.Random(1000)
    bad = 0
    for trial in range(1000):
        n = rng.randint(1, 6)
        m, b = _random_system(rng, n)
        res = solve(m, b)
        # a random real system inside the rectangles, solved exactly
        mq = [[frac_in(x, rng) for x in r] for r in m]
        bq = [frac_in(x, rng) for x in b]
        if not all(contains(r, x) for r, x in zip(res, exact_solve(mq, bq))):
            bad += 1
    assert bad == 0


def test_solve_many_matches_solve():
    rng = random.Random(5)
    m, b1 = _random_system(rng, 5)
    _, b2 = _random_system(rng, 5)
    assert solve_many(m, [b1, b2]) == [solve(m, b1), solve(m, b2)]
    assert solve_many(m, []) == []


def test_apply_linearity_on_points():
    rng = random.Random(6)
    for _ in range(100):
        n = rng.randint(1, 5)
        m = [[S(rng.uniform(-1, 1)) for _ in range(n)] for _ in range(n)]
        x = [S(rng.uniform(-1, 1)) for _ in range(n)]
        y = [S(rng.uniform(-1, 1)) for _ in range(n)]
        lhs = apply(m, [a + b for a, b in zip(x, y)])
        rhs = [a + b for a, b in zip(apply(m, x), apply(m, y))]
        for a, b in zip(lhs, rhs):
            assert abs(a.midpoint() - b.midpoint()) <= a.width() + b.width()


def _mat_encloses(res, exact):
    return all(_encloses(r, e) for r, e in zip(res, exact))


def test_subtract_diag_examples():
    assert _mat_encloses(subtract_diag(_m([[1, 2], [3, 4]]), 1), [[0, 2], [3, 3]])
    m = _m([[1, 2], [3, 4]])
    assert subtract_diag(m, 0) == m
    assert subtract_diag(_m([[1, 0], [0, 1]]), 1) == _m([[0, 0], [0, 0]])


def test_list_utilities():
    assert interleave([1, 2], [3, 4]) == [1, 3, 2, 4]
    assert uninterleave([1, 3, 2, 4]) == ([1, 2], [3, 4])
    assert pairs([1, 2, 3, 4]) == [(1, 2), (3, 4)]
    with pytest.raises(CertificationError, match="list must have even length"):
        pairs([1, 2, 3])
    assert splits([1, 2]) == [([], [1, 2]), ([1], [2])]
    assert splits([]) == []
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(0, 10)
        a, b = [rng.random() for _ in range(n)], [rng.random() for _ in range(n)]
        assert uninterleave(interleave(a, b)) == (a, b)
