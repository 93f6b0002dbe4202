"""Newton polishing of finder output.

A plain local refiner: it is adequate for starts inside the node disc of a
well-isolated simple root, and it leaves cluster nodes alone.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .grid import RootReport
from .poly import Polynomial, to_mpc
from .precision import PrecisionContext


@dataclass(frozen=True)
class NewtonResult:
    z: mpc
    converged: bool
    residual: mpfr
    iterations: int
    status: str  # "converged", "max_iter" or "stalled"
    linear: bool = False


def _eval_with_derivative(coeffs, z):
    f = coeffs[-1]
    df = mpc(0)
    for c in reversed(coeffs[:-1]):
        df = df * z + f
        f = f * z + c
    return f, df


def newton_refine(
    p: Polynomial, z0, tol: float, max_iter: int = 100, ctx: PrecisionContext | None = None
) -> NewtonResult:
    """Iterate ``z <- z - p(z)/p'(z)`` until a step is at most ``tol``.

    A vanishing derivative ends the run with status ``"stalled"``.
    ``linear`` flags step ratios that stay above 1/4 over the last three
    steps, the signature of a multiple root.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    with ctx.activate():
        coeffs = [+c for c in p.coeffs]
        z = +to_mpc(z0, ctx.bits)
        tol = mpfr(tol)
        steps = []
        status = "max_iter"
        it = 0
        f, df = _eval_with_derivative(coeffs, z)
        while it < max_iter:
            if gmpy2.is_zero(f):
                status = "converged"
                break
            if gmpy2.is_zero(df):
                status = "stalled"
                break
            step = f / df
            z = z - step
            it += 1
            size = abs(step)
            steps.append(size)
            f, df = _eval_with_derivative(coeffs, z)
            if size <= tol:
                status = "converged"
                break
        ratios = [b / a for a, b in zip(steps, steps[1:]) if a > 0]
        linear = len(ratios) >= 3 and all(r > 0.25 for r in ratios[-3:])
        return NewtonResult(z, status == "converged", abs(f), it, status, linear)


def refine_report(
    p: Polynomial,
    report: RootReport,
    tol: float,
    max_iter: int = 100,
    ctx: PrecisionContext | None = None,
) -> RootReport:
    """Newton-refine the simple approximations of ``report``.

    An entry keeps its original point (marked unconverged) if Newton leaves
    the node disc or ends with a larger residual than it started with.
    Cluster entries pass through untouched.
    """
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    out = []
    for a in report.approximations:
        if a.multiplicity != 1:
            out.append(a)
            continue
        with ctx.activate():
            start = abs(_eval_with_derivative([+c for c in p.coeffs], +a.point)[0])
        res = newton_refine(p, a.point, tol, max_iter, ctx)
        with ctx.activate():
            moved = abs(res.z - a.point)
        if moved > 2 * a.radius:
            out.append(dataclasses.replace(a, residual=float(start), converged=False, status="escaped"))
        elif res.residual > start:
            out.append(dataclasses.replace(a, residual=float(start), converged=False, status="worse"))
        else:
            out.append(
                dataclasses.replace(
                    a, point=res.z, residual=float(res.residual), converged=res.converged, status=res.status
                )
            )
    return dataclasses.replace(report, approximations=out)


def refine_interval(p: Polynomial, interval, tol: float, max_iter: int = 100, ctx: PrecisionContext | None = None):
    """Newton from the interval midpoint; returns the refined real root, or
    ``None`` when the iteration does not settle inside the interval."""
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    with ctx.activate():
        mid = (interval.lo + interval.hi) / 2
        slack = interval.hi - interval.lo
    res = newton_refine(p, mid, tol, max_iter, ctx)
    with ctx.activate():
        inside = interval.lo - slack <= res.z.real <= interval.hi + slack
        real = abs(res.z.imag) <= tol
    return res if (res.converged and inside and real) else None
