from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorenz_renorm.scalar import (
    SAFE_MAX,
    SAFE_MIN,
    CertificationError,
    Scalar,
    compare,
    enlarge,
    int_power,
    is_safe,
    step_float,
)

S = Scalar


def _outward(got: Scalar, lo: float, hi: float) -> bool:
    return got.lo <= lo and hi <= got.hi


# -- step_float / enlarge -------------------------------------------------


def test_step_float_examples():
    assert step_float(1, 0.0) == 0.0
    assert step_float(1, 1.0) == 1 + 2.0**-52
    assert step_float(-1, 1.0) == 1 - 2.0**-53


def test_enlarge_examples():
    assert enlarge(S(0, 0)) == S(0, 0)
    assert enlarge(S(1, 1)) == S(1 - 2.0**-53, 1 + 2.0**-52)
    with pytest.raises(CertificationError, match="not a safe number"):
        enlarge(S(2.0**500, 2.0**500))


def test_safe_range_boundaries():
    assert is_safe(0.0)
    assert not is_safe(SAFE_MIN) and not is_safe(SAFE_MAX)
    assert is_safe(math.nextafter(SAFE_MIN, 1)) and is_safe(-math.nextafter(SAFE_MAX, 0))


# -- arithmetic examples -----------------------------------------------------


def test_add_mul_abs_examples():
    r = S(1, 2) + S(3, 5)
    assert _outward(r, 4, 7) and r.lo < 4 and r.hi > 7
    assert _outward(S(1, 2) * S(-3, 4), -6, 8)
    assert abs(S(-3, 2)) == S(0, 3)
    assert abs(S(2, 5)) == S(2, 5)
    assert abs(S(-5, -2)) == S(2, 5)


def test_recip_examples():
    assert _outward(S(2, 4).recip(), 0.25, 0.5)
    assert _outward(S(-4, -2).recip(), -0.5, -0.25)
    with pytest.raises(CertificationError, match="recip: not well-defined"):
        S(-1, 2).recip()
    with pytest.raises(CertificationError, match="recip: not well-defined"):
        S(0, 2).recip()


def test_compare_examples():
    assert compare(S(1, 2), S(3, 4)) == -1
    assert compare(S(3, 4), S(1, 2)) == 1
    assert compare(S(1, 1), S(1, 1)) == 0
    with pytest.raises(CertificationError, match="uncomparable"):
        compare(S(1, 3), S(2, 4))
    with pytest.raises(CertificationError, match="uncomparable"):
        S(1, 3) < S(2, 4)


def test_neg_is_exact_involution():
    x = S(-0.1, 0.3)
    assert -(-x) == x
    assert (-x).lo == -0.3 and (-x).hi == 0.1


def test_zero_addition_is_exact():
    x = S(0.1, 0.3)
    assert x + 0 is x and 0 + x is x


def test_underflow_to_zero_aborts():
    with pytest.raises(CertificationError, match="not a safe number"):
        S(1e-200) * S(1e-200)
    with pytest.raises(CertificationError, match="not a safe number"):
        S(1e-200, 1.0) * S(1e-200)


def test_overflow_aborts():
    with pytest.raises(CertificationError, match="not a safe number"):
        S(1e200) * S(1e200)


def test_from_decimal_is_tight():
    s = S.from_decimal("2.2")
    assert s.lo < s.hi == math.nextafter(s.lo, 3)
    assert s.contains(Fraction(22, 10))
    assert S.from_decimal("0.5") == S(0.5)


def test_int_power_order_matches_squaring():
    # 13 = 8 + 4 + 1; GHC multiplies the odd factors in as x^8 * (x^4 * x)
    x = S(1.1, 1.2)
    x2 = x * x
    x4 = x2 * x2
    x8 = x4 * x4
    assert int_power(x, 13, S(1)) == x8 * (x4 * x)
    assert int_power(x, 0, S(1)) == S(1)
    assert int_power(x, 1, S(1)) is x
    assert x**2 == x2


# -- randomized soundness against a 256-bit oracle --------------------------

mpmath.mp.prec = 256


def _rand_endpoint(rng: random.Random) -> float:
    r = rng.random()
    if r < 0.05:
        return 0.0
    mag = 10.0 ** rng.uniform(-120, 120) if r < 0.5 else rng.uniform(0, 10)
    return mag * (1 if rng.random() < 0.5 else -1)


def _rand_interval(rng: random.Random) -> Scalar:
    a = _rand_endpoint(rng)
    if rng.random() < 0.3:
        return S(a)
    b = a + abs(a) * 10.0 ** rng.uniform(-16, 0) if rng.random() < 0.7 else _rand_endpoint(rng)
    return S(min(a, b), max(a, b))


def _points(x: Scalar, rng: random.Random):
    return (x.lo, x.hi, x.lo + (x.hi - x.lo) * rng.random())


def _in(got: Scalar, exact) -> bool:
    return mpmath.mpf(got.lo) <= exact <= mpmath.mpf(got.hi)


def test_randomized_containment_vs_mpmath():
    rng = random.Random(20240601)
    trials = 100_000
    checks = skipped = 0
    failures = []
    for _ in range(trials):
        x, y = _rand_interval(rng), _rand_interval(rng)
        try:
            res = {"+": x + y, "-": x - y, "*": x * y, "neg": -x, "abs": abs(x)}
            if x.lo * x.hi > 0:
                res["recip"] = x.recip()
            if y.lo * y.hi > 0:
                res["/"] = x / y
        except CertificationError:
            skipped += 1
            continue
        # endpoints are where rounding bites; interior points catch sign slips
        a, b = rng.choice(_points(x, rng)), rng.choice(_points(y, rng))
        ma, mb = mpmath.mpf(a), mpmath.mpf(b)
        exact = {"+": ma + mb, "-": ma - mb, "*": ma * mb, "neg": -ma, "abs": abs(ma)}
        if "recip" in res:
            exact["recip"] = 1 / ma
        if "/" in res:
            exact["/"] = ma / mb
        for op, v in exact.items():
            checks += 1
            if not _in(res[op], v):
                failures.append((op, x, y, a, b))
    assert checks >= 100_000
    assert skipped < trials // 10
    assert not failures, failures[:5]


# -- properties ------------------------------------------------------------

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False).filter(
    lambda v: v == 0 or abs(v) > 1e-60
)


@st.composite
def nested(draw):
    a, b, c, d = sorted(draw(st.lists(finite, min_size=4, max_size=4)))
    return S(b, c), S(a, d)


@settings(max_examples=500, deadline=None)
@given(nested(), nested())
def test_inclusion_monotonicity(xx, yy):
    (x, xw), (y, yw) = xx, yy
    pairs = [(x + y, xw + yw), (x * y, xw * yw), (x - y, xw - yw), (abs(x), abs(xw))]
    for small, big in pairs:
        assert big.lo <= small.lo and small.hi <= big.hi


@settings(max_examples=500, deadline=None)
@given(finite, finite)
def test_enlarge_strictly_outward(a, b):
    lo, hi = min(a, b), max(a, b)
    e = enlarge(S(lo, hi))
    assert e.lo <= lo and e.hi >= hi
    assert (e.lo < lo) or lo == 0
    assert (e.hi > hi) or hi == 0


@settings(max_examples=300, deadline=None)
@given(finite, finite)
def test_abs_endpoints_are_exact(a, b):
    lo, hi = min(a, b), max(a, b)
    r = abs(S(lo, hi))
    allowed = {0.0, lo, -lo, hi, -hi}
    assert r.lo in allowed and r.hi in allowed
