"""Driver: refine the fixed point, bound the Newton operator, write a certificate.

The rigorous path is::

    F0    = Newton refinement of the guess (non-rigorous, collapsed to points)
    Gamma = gamma(F0)
    eps   = upper |Phi(F0) - F0|
    theta = upper sup |DPhi| over ball(r, F0)
    prop41: eps < (1 - theta) r

Everything after ``F0`` and ``Gamma`` is computed in outward-rounded
interval arithmetic; ``F0`` and ``Gamma`` themselves are just data.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Callable, List, Optional, Sequence, Tuple

from . import __version__
from .cinterval import arcs as make_arcs
from .cinterval import modulus_ub, unit_circle_enclosure
from .funcball import (
    Config,
    FunctionBall,
    LorenzPair,
    approx,
    ball,
    dist,
    split,
    sumnorm,
    tangents,
)
from .ilinalg import apply, solve_many, subtract_diag
from .renorm import gamma, interleave_poly, lift_poly_op, newton_many, op_DT, op_phi
from .scalar import ZERO, CertificationError, Scalar

__all__ = [
    "CertInput",
    "CertResult",
    "HyperReport",
    "refine_fixed_point",
    "estimate_eps",
    "estimate_theta",
    "check_prop41",
    "hyperbolicity_check",
    "midpoint_eigenvalues",
    "certify",
    "show_double",
    "certificate_lines",
    "main",
]

DEFAULT_GUESS = (("-0.75", "-2.5"), ("6.2", "-2.1"))


@dataclass(frozen=True)
class CertInput:
    d: int = 13
    sf: str = "2.2"
    sg: str = "0.5"
    radius: float = 1e-7
    guess: Tuple[Tuple[str, ...], Tuple[str, ...]] = DEFAULT_GUESS
    newton_iters: int = 8
    arcs: int = 50000
    hyper_bound: float = 0.9
    theta_bound: float = 0.2
    eps_bound: float = 5e-9

    def config(self) -> Config:
        return Config(d=self.d, sf=Scalar.from_decimal(self.sf), sg=Scalar.from_decimal(self.sg))

    def guess_pair(self) -> LorenzPair:
        f, g = (FunctionBall([Scalar.from_decimal(c) for c in cs], ZERO, self.d) for cs in self.guess)
        return LorenzPair(f, g)


@dataclass
class HyperReport:
    arcs_total: int
    arcs_checked: int
    max_bound: float
    passed: bool
    sampled: bool
    seed: Optional[int]
    failed: List[Tuple[int, str]] = field(default_factory=list)


@dataclass
class CertResult:
    eps: float
    theta: float
    radius: float
    eps_ok: bool
    theta_ok: bool
    prop41_ok: bool
    residuals: List[float] = field(default_factory=list)
    hyper: Optional[HyperReport] = None

    @property
    def passed(self) -> bool:
        ok = self.eps_ok and self.theta_ok and self.prop41_ok
        return ok and (self.hyper is None or self.hyper.passed)


# -- the rigorous pipeline ------------------------------------------------


def refine_fixed_point(inp: CertInput) -> Tuple[LorenzPair, List[float]]:
    """Newton iterates ``x -> approx(Phi_{gamma(x)}(x))`` from the guess.

    Returns the last iterate and the step sizes ``|x_{k+1} - x_k|``.
    """
    cfg = inp.config()
    x = inp.guess_pair()
    steps = []
    for _ in range(inp.newton_iters):
        nxt = approx(op_phi(gamma(x, cfg), x, cfg))
        steps.append(dist(nxt, x).hi)
        x = nxt
    return x, steps


def estimate_eps(f0: LorenzPair, g, cfg: Config = Config()) -> float:
    """Upper bound on ``|Phi(F0) - F0|``."""
    return dist(f0, op_phi(g, f0, cfg)).hi


def dt_images(f0: LorenzPair, r: float, cfg: Config = Config()) -> Tuple[list, list]:
    """The tangents of the operator norm and their ``DT`` images over ``ball(r, F0)``."""
    ds = tangents(cfg.d)
    return ds, op_DT(ball(r, f0), ds, cfg)


def estimate_theta(f0: LorenzPair, g, r: float, cfg: Config = Config(), images=None) -> float:
    """Upper bound on ``|DPhi|`` over ``ball(r, F0)`` (largest column norm)."""
    ds, dts = images if images is not None else dt_images(f0, r, cfg)
    return max(sumnorm(y).hi for y in newton_many(g, dts, ds))


def check_prop41(eps: float, theta: float, r: float) -> bool:
    """``eps < (1 - theta) r`` with the right-hand side rounded down."""
    if not theta < 1.0:
        return False
    try:
        return Scalar(eps) < (1 - Scalar(theta)) * Scalar(r)
    except CertificationError:
        return False


# -- hyperbolicity ---------------------------------------------------------

_WORKER = {}


def resolvent_columns(g, ds, dts) -> Tuple[list, list]:
    """Right-hand sides ``Gamma delta - DT delta``: interleaved vectors and tail bounds."""
    vecs, tails = [], []
    for dlt, dt in zip(ds, dts):
        v = lift_poly_op(ZERO, lambda u: apply(g, u), dlt) - dt
        f, h = split(v.f.d, v.f), split(v.g.d, v.g)
        vecs.append(interleave_poly(LorenzPair(f, h)))
        tails.append(f.e + h.e)
    return vecs, tails


def arc_bound(g, vecs, tails, arc, degree: int = 20) -> float:
    """Upper bound on ``|(Gamma - z)^-1 (Gamma - DT)|`` for ``z`` on the arc.

    ``Gamma`` vanishes on the tail, where the resolvent is ``-1/z`` with
    ``|z| = 1``; tail bounds therefore pass through unchanged.
    """
    z = unit_circle_enclosure(arc, degree)
    sols = solve_many(subtract_diag(g, z), vecs)
    best = 0.0
    for sol, tail in zip(sols, tails):
        acc = ZERO
        for x in sol:
            acc = acc + modulus_ub(x)
        best = max(best, (acc + tail).hi)
    return best


def _init_worker(g, vecs, tails, degree):
    _WORKER.update(g=g, vecs=vecs, tails=tails, degree=degree)


def _check_arc(item):
    k, arc = item
    try:
        return k, arc_bound(_WORKER["g"], _WORKER["vecs"], _WORKER["tails"], arc, _WORKER["degree"]), ""
    except CertificationError as exc:
        return k, math.inf, str(exc)


def hyperbolicity_check(
    f0: LorenzPair,
    g,
    r: float,
    n_arcs: int = 50000,
    sample: Optional[int] = None,
    seed: int = 0,
    jobs: int = 1,
    bound: float = 0.9,
    cfg: Config = Config(),
    images=None,
    degree: int = 20,
    progress: Optional[Callable[[int, int], None]] = None,
) -> HyperReport:
    """Bound the resolvent on every arc (or a seeded sample of arcs).

    An arc whose solve aborts counts as failed.  The recorded maximum is
    reduced in arc order, independent of ``jobs``.
    """
    ds, dts = images if images is not None else dt_images(f0, r, cfg)
    vecs, tails = resolvent_columns(g, ds, dts)
    all_arcs = make_arcs(n_arcs)
    if sample is not None:
        idx = sorted(random.Random(seed).sample(range(n_arcs), min(sample, n_arcs)))
    else:
        idx = list(range(n_arcs))
    work = [(k, all_arcs[k]) for k in idx]

    if jobs > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(g, vecs, tails, degree)) as ex:
            results = list(ex.map(_check_arc, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        _init_worker(g, vecs, tails, degree)
        results = []
        for i, item in enumerate(work):
            results.append(_check_arc(item))
            if progress is not None:
                progress(i + 1, len(work))

    failed = [(k, msg or f"bound {b!r} not < {bound!r}") for k, b, msg in results if not b < bound]
    max_bound = max((b for _, b, _ in results), default=0.0)
    return HyperReport(
        arcs_total=n_arcs,
        arcs_checked=len(results),
        max_bound=max_bound,
        passed=not failed,
        sampled=sample is not None,
        seed=seed if sample is not None else None,
        failed=failed,
    )


def midpoint_eigenvalues(g) -> list:
    """Eigenvalues of the midpoint matrix, largest modulus first.  Not rigorous."""
    import numpy as np

    mid = np.array([[x.midpoint() for x in row] for row in g])
    ev = np.linalg.eigvals(mid)
    return sorted((complex(v) for v in ev), key=lambda v: -abs(v))


def certify(inp: CertInput = CertInput()) -> Tuple[CertResult, LorenzPair, list]:
    """Run the full estimate; returns the result, ``F0`` and ``Gamma``."""
    cfg = inp.config()
    f0, steps = refine_fixed_point(inp)
    g = gamma(f0, cfg)
    eps = estimate_eps(f0, g, cfg)
    theta = estimate_theta(f0, g, inp.radius, cfg)
    res = CertResult(
        eps=eps,
        theta=theta,
        radius=inp.radius,
        eps_ok=eps < inp.eps_bound,
        theta_ok=theta < inp.theta_bound,
        prop41_ok=check_prop41(eps, theta, inp.radius),
        residuals=steps,
    )
    return res, f0, g


# -- output -----------------------------------------------------------------


def show_double(x: float) -> str:
    """Shortest round-trip rendering in the style ``1.0e-7``, ``0.158``."""
    if math.isinf(x) or math.isnan(x):
        return repr(x)
    if x == 0.0:
        return "0.0"
    if 0.1 <= abs(x) < 1e7:
        return repr(x)
    sign, digits, exp = Decimal(repr(x)).normalize().as_tuple()
    ds = "".join(map(str, digits))
    e = exp + len(ds) - 1
    return f"{'-' if sign else ''}{ds[0]}.{ds[1:] or '0'}e{e}"


def headline(res: CertResult) -> List[str]:
    return [
        "radius      = " + show_double(res.radius),
        "|Phi(f)-f| < " + show_double(res.eps),
        "|DPhi|     < " + show_double(res.theta),
    ]


def certificate_lines(inp: CertInput, res: CertResult) -> List[str]:
    """Key-value certificate; contains no timing or host data, so it is reproducible."""
    guess = ";".join(",".join(cs) for cs in inp.guess)
    out = [
        "implementation=lorenz_renorm",
        f"version={__version__}",
        f"d={inp.d}",
        f"sf={inp.sf}",
        f"sg={inp.sg}",
        f"radius={inp.radius!r}",
        f"guess={guess}",
        f"newton_iters={inp.newton_iters}",
        f"arcs={inp.arcs}",
        "newton_steps=" + ",".join(repr(s) for s in res.residuals),
        f"eps_bound={inp.eps_bound!r}",
        f"theta_bound={inp.theta_bound!r}",
        f"hyper_bound={inp.hyper_bound!r}",
        f"eps={res.eps!r}",
        f"theta={res.theta!r}",
        f"check.eps={'pass' if res.eps_ok else 'fail'}",
        f"check.theta={'pass' if res.theta_ok else 'fail'}",
        f"check.prop41={'pass' if res.prop41_ok else 'fail'}",
    ]
    h = res.hyper
    if h is not None:
        out += [
            f"hyper.arcs={h.arcs_total}",
            f"hyper.arcs_checked={h.arcs_checked}",
            f"hyper.mode={'sampled (evidence, not proof)' if h.sampled else 'full covering'}",
            f"hyper.seed={h.seed if h.seed is not None else '-'}",
            f"hyper.max_bound={h.max_bound!r}",
            f"check.hyperbolicity={'pass' if h.passed else 'fail'}",
        ]
    out.append(f"result={'pass' if res.passed else 'fail'}")
    return out


# -- command line --------------------------------------------------------------


def _parse_guess(text: str):
    try:
        f, g = text.split(";")
        parts = tuple(tuple(c.strip() for c in s.split(",")) for s in (f, g))
        for cs in parts:
            for c in cs:
                Scalar.from_decimal(c)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"guess must look like 'f0,f1;g0,g1': {exc}") from None
    return parts


def _decimal(text: str) -> str:
    try:
        Scalar.from_decimal(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    return text


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=13, help="tail degree (default 13)")
    common.add_argument("--sf", type=_decimal, default="2.2", help="domain radius of f")
    common.add_argument("--sg", type=_decimal, default="0.5", help="domain radius of g")
    common.add_argument("--radius", type=float, default=1e-7, help="radius of the ball around F0")
    common.add_argument("--iters", type=int, default=8, help="Newton refinement steps")
    common.add_argument("--guess", type=_parse_guess, default=DEFAULT_GUESS, help="initial guess 'f0,f1;g0,g1'")
    common.add_argument("--certificate", metavar="PATH", help="write the key-value certificate here")

    hyper = argparse.ArgumentParser(add_help=False)
    hyper.add_argument("--arcs", type=_positive_int, default=50000, help="arcs covering the circle")
    hyper.add_argument("--sample", type=_positive_int, help="check only this many random arcs")
    hyper.add_argument("--seed", type=int, default=0, help="seed for --sample")
    hyper.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="certify", description="Rigorous bounds for the Lorenz renormalization fixed point.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="eps, theta and the contraction condition")
    sub.add_parser("hyperbolicity", parents=[common, hyper], help="resolvent bound on the unit circle")
    sub.add_parser("eig", parents=[common], help="midpoint eigenvalues of Gamma (not rigorous)")
    st = sub.add_parser("selftest", help="quick randomized soundness checks")
    st.add_argument("--trials", type=_positive_int, default=2000)
    st.add_argument("--seed", type=int, default=0)
    return p


def _input(args) -> CertInput:
    if args.d < 2:
        raise SystemExit("certify: error: --d must be at least 2")
    return CertInput(
        d=args.d,
        sf=args.sf,
        sg=args.sg,
        radius=args.radius,
        guess=args.guess,
        newton_iters=args.iters,
        arcs=getattr(args, "arcs", 50000),
    )


def _write_certificate(path: Optional[str], lines: Sequence[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def _failures(res: CertResult, inp: CertInput) -> List[str]:
    out = []
    if not res.eps_ok:
        out.append(f"eps: {res.eps!r} is not < {inp.eps_bound!r}")
    if not res.theta_ok:
        out.append(f"theta: {res.theta!r} is not < {inp.theta_bound!r}")
    if not res.prop41_ok:
        out.append(f"prop41: eps < (1 - theta) r fails for eps={res.eps!r}, theta={res.theta!r}, r={res.radius!r}")
    if res.hyper is not None and not res.hyper.passed:
        k, msg = res.hyper.failed[0]
        out.append(f"hyperbolicity: {len(res.hyper.failed)} arc(s) failed, first arc {k}: {msg}")
    return out


def _cmd_run(args) -> int:
    inp = _input(args)
    res, _, _ = certify(inp)
    print("\n".join(headline(res)))
    return _finish(args, inp, res)


def _finish(args, inp: CertInput, res: CertResult) -> int:
    fails = _failures(res, inp)
    for msg in fails:
        print(f"certify: FAILED {msg}", file=sys.stderr)
    _write_certificate(args.certificate, certificate_lines(inp, res))
    return 0 if not fails else 1


def _cmd_hyperbolicity(args) -> int:
    inp = _input(args)
    cfg = inp.config()
    res, f0, g = certify(inp)
    t0 = time.perf_counter()
    res.hyper = hyperbolicity_check(
        f0, g, inp.radius, args.arcs, args.sample, args.seed, args.jobs, inp.hyper_bound, cfg
    )
    h = res.hyper
    mode = "sampled, evidence only" if h.sampled else "full covering"
    print("\n".join(headline(res)))
    print(f"|(G-e^it)^-1 (G-DT)| < {show_double(h.max_bound)}  ({h.arcs_checked} of {h.arcs_total} arcs, {mode})")
    print(f"hyperbolicity check took {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return _finish(args, inp, res)


def _cmd_eig(args) -> int:
    inp = _input(args)
    cfg = inp.config()
    f0, _ = refine_fixed_point(inp)
    ev = midpoint_eigenvalues(gamma(f0, cfg))
    for v in ev:
        mod = abs(v)
        print(f"{mod:.10f}  {v.real:+.10f} {v.imag:+.10f}i")
    unstable = [v for v in ev if abs(v) >= 1]
    print(f"eigenvalues outside the unit disk: {len(unstable)} (not rigorous)")
    if len(unstable) != 2:
        print(f"certify: FAILED eig: expected 2 eigenvalues of modulus >= 1, found {len(unstable)}", file=sys.stderr)
        return 1
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    failures = run_selftest(args.trials, args.seed)
    for line in failures:
        print(f"certify: FAILED selftest: {line}", file=sys.stderr)
    print(f"selftest: {'pass' if not failures else 'fail'}")
    return 0 if not failures else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cmd = {
        "run": _cmd_run,
        "hyperbolicity": _cmd_hyperbolicity,
        "eig": _cmd_eig,
        "selftest": _cmd_selftest,
    }[args.command]
    try:
        return cmd(args)
    except CertificationError as exc:
        print(f"certify: ABORT {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"certify: ERROR {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
