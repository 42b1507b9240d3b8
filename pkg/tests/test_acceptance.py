"""Acceptance criteria, each run at its stated tolerance.

Every test records a single pass/fail line that pytest prints in an
"acceptance criteria" block at the end of the run.
"""

from __future__ import annotations

import time

import pytest
import test_funcball
import test_ilinalg
import test_renorm
import test_scalar

from lorenz_renorm import certify as cert
from lorenz_renorm.certify import CertInput, certify, check_prop41, hyperbolicity_check, midpoint_eigenvalues
from lorenz_renorm.scalar import CertificationError, Scalar, compare

EPS_REF = 4.830032057738462e-9
THETA_REF = 0.1584543808202988
EIG_REF = (23.36530, 12.11202)


def _within_factor_2(x: float, ref: float) -> bool:
    return ref / 2 <= x <= ref * 2


def test_criterion_1_eps(criterion):
    t0 = time.perf_counter()
    res, _, _ = certify(CertInput())
    elapsed = time.perf_counter() - t0
    ok = res.eps < 5e-9 and _within_factor_2(res.eps, EPS_REF) and elapsed <= 60
    criterion("1 |Phi(F0)-F0| < 5e-9", ok, f"eps={res.eps!r} (reference {EPS_REF!r}), {elapsed:.1f} s")


def test_criterion_2_theta(criterion, cert_run):
    _, res, _, _ = cert_run
    ok = res.theta < 0.2 and _within_factor_2(res.theta, THETA_REF)
    criterion("2 sup|DPhi| < 0.2", ok, f"theta={res.theta!r} (reference {THETA_REF!r})")


def test_criterion_3_prop41(criterion, cert_run):
    inp, res, _, _ = cert_run
    ok = inp.radius == 1e-7 and check_prop41(res.eps, res.theta, inp.radius)
    criterion("3 eps < (1-theta) r", ok, f"eps={res.eps!r}, (1-theta) r ~ {(1 - res.theta) * inp.radius!r}")


def test_criterion_4_eigenvalues(criterion, cert_run):
    _, _, _, g = cert_run
    ev = midpoint_eigenvalues(g)
    lead = [abs(v) for v in ev[:2]]
    rel = [abs(a - b) / b for a, b in zip(lead, EIG_REF)]
    rest = max(abs(v) for v in ev[2:])
    ok = all(r < 1e-3 for r in rel) and rest < 1
    criterion("4 midpoint eigenvalues", ok, f"leading {lead[0]:.5f}, {lead[1]:.5f}; next modulus {rest:.4f}")


def test_criterion_5_sampled_hyperbolicity(criterion, cert_run, images):
    inp, _, f0, g = cert_run
    t0 = time.perf_counter()
    rep = hyperbolicity_check(f0, g, inp.radius, n_arcs=50000, sample=200, seed=0, images=images)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and rep.arcs_checked == 200 and rep.max_bound < 0.9 and elapsed <= 600
    criterion(
        "5 sampled hyperbolicity",
        ok,
        f"max bound {rep.max_bound!r} over {rep.arcs_checked} arcs of width 2pi/50000, {elapsed:.0f} s",
    )


FUNCBALL_SUITES = [
    test_funcball.test_membership_add,
    test_funcball.test_membership_sub,
    test_funcball.test_membership_neg,
    test_funcball.test_membership_mul,
    test_funcball.test_membership_split,
    test_funcball.test_membership_scale,
    test_funcball.test_membership_eval,
    test_funcball.test_membership_compose,
    test_funcball.test_membership_deriv_compose,
    test_funcball.test_membership_dcompose,
    test_funcball.test_membership_deriv_pointwise,
    test_funcball.test_membership_dcompose_pointwise,
    test_funcball.test_membership_lshift,
    test_funcball.test_membership_ball,
]


def _run_suite(fn, *args) -> str:
    try:
        fn(*args)
    except AssertionError as exc:
        return f"{fn.__name__}: {str(exc)[:200]}"
    return ""


def test_criterion_6a_scalar(criterion):
    err = _run_suite(test_scalar.test_randomized_containment_vs_mpmath)
    criterion("6a scalar containment", not err, err or "1e5 trials vs 256-bit mpmath, zero violations")


def test_criterion_6b_funcball(criterion):
    assert test_funcball.TRIALS >= 10_000
    errs = [e for e in (_run_suite(fn) for fn in FUNCBALL_SUITES) if e]
    detail = "; ".join(errs) or f"{len(FUNCBALL_SUITES)} operations x {test_funcball.TRIALS} members, zero violations"
    criterion("6b funcball membership", not errs, detail)


def test_criterion_6c_solve(criterion):
    err = _run_suite(test_ilinalg.test_solve_containment)
    criterion("6c interval solves", not err, err or "1e3 systems contain the exact rational solution")


def test_criterion_6d_finite_differences(criterion, cert_run):
    err = _run_suite(test_renorm.test_dt_vs_finite_differences, cert_run)
    criterion("6d DT vs finite differences", not err, err or "10 tangents, h=1e-6, error O(h)")


DEGENERATE = [
    ("recip", ["run", "--guess=0,0;0,0"], "S.recip: not well-defined"),
    ("compose", ["run", "--sf", "0.5"], "compose: |f2| is too large"),
    ("eval", ["run", "--guess=2,-2.5;6.2,-2.1"], "eval: not in domain"),
    ("unsafe", ["run", "--radius", "1e300"], "assertSafe: not a safe number"),
]


def _cli_abort(argv, tmp_path, capsys):
    path = tmp_path / "cert.txt"
    rc = cert.main(argv + ["--certificate", str(path)])
    return rc, capsys.readouterr().err, path.exists()


def test_criterion_7_degenerate_inputs(criterion, tmp_path, capsys, monkeypatch):
    bad = []
    for name, argv, msg in DEGENERATE:
        rc, err, wrote = _cli_abort(argv, tmp_path, capsys)
        if rc == 0 or msg not in err or wrote:
            bad.append(f"{name}: rc={rc} certificate={wrote} stderr={err.strip()!r}")

    # an overlapping comparison aborts in the library ...
    with pytest.raises(CertificationError, match="S.compare: uncomparable"):
        compare(Scalar(0, 2), Scalar(1, 3))

    # ... and surfaces through the command line the same way
    def overlapping(*args, **kwargs):
        return compare(Scalar(0, 2), Scalar(1, 3))

    monkeypatch.setattr(cert, "estimate_theta", overlapping)
    rc, err, wrote = _cli_abort(["run"], tmp_path, capsys)
    if rc == 0 or "S.compare: uncomparable" not in err or wrote:
        bad.append(f"compare: rc={rc} certificate={wrote} stderr={err.strip()!r}")
    criterion("7 degenerate inputs abort", not bad, "; ".join(bad) or "recip, compose, eval, compare, unsafe: nonzero exit, named diagnostic, no certificate")
