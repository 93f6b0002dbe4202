"""Candidate intervals for the real roots of a real polynomial.

Origin-centered radius brackets of width at most ``rho`` meet the real axis
in at most ``2n`` short intervals, and every real root lies in one of them.
Complex conjugate pairs also produce candidates, so the intervals are
necessary, not sufficient.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpfr

from .grid import merge_intervals
from .poly import Polynomial, cauchy_root_bound, scale_variable
from .precision import PrecisionContext
from .radii import estimate_radii, working_bits


@dataclass(frozen=True)
class RealInterval:
    lo: mpfr
    hi: mpfr
    multiplicity_hint: int

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def real_root_intervals(p: Polynomial, rho: float, ctx: PrecisionContext | None = None) -> list:
    """At most ``2n`` intervals of the real line covering every real root.

    ``multiplicity_hint`` counts the radius brackets merged into the
    interval; a zero radius gives one interval straddling the origin.
    """
    if not p.is_real():
        raise ValueError("real_root_intervals needs real coefficients")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    n = p.degree
    if n < 1:
        return []
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    r1 = cauchy_root_bound(p, ctx)
    with ctx.activate():
        scale = r1 if r1 > 0 else mpfr(1)
        rho_hat = mpfr(rho) / scale
        theta = 1 + rho_hat / 4
    work = ctx.at_least(working_bits(n, theta, ctx))
    est = estimate_radii(scale_variable(p, scale, work), theta, work)
    out = []
    with work.activate():
        for lo, hi, m in merge_intervals(est.intervals()):
            lo, hi = lo * scale, hi * scale
            if lo <= 0:
                w = max(hi, mpfr(rho) / 4)
                out.append((-w, w, m))
            else:
                out.append((lo, hi, m))
                out.append((-hi, -lo, m))
        merged = []
        for lo, hi, m in sorted(out, key=lambda t: (t[0], t[1])):
            if merged and lo <= merged[-1][1]:
                plo, phi, pm = merged[-1]
                merged[-1] = (plo, max(phi, hi), pm + m)
            else:
                merged.append((lo, hi, m))
    return [RealInterval(lo, hi, m) for lo, hi, m in merged]
