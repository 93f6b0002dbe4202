"""Root-radii estimation: Newton polygon plus Graeffe root squaring.

The Newton polygon of ``p`` (upper convex hull of ``(i, lg|p_i|)``) gives
all ``n`` root moduli within a factor ``2n``.  After ``k`` root-squaring
steps the same estimate, pulled back by a ``2**k``-th root, is within
``(2n)**(1/2**k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .poly import (
    Polynomial,
    strip_zero_roots,
    taylor_shift,
    to_mpc,
)
from .precision import PrecisionContext

GUARD_BITS = 64


@dataclass(frozen=True)
class RadiiEstimate:
    """Root-radius approximations sorted non-increasing.

    Each true radius ``r_j`` (also sorted non-increasing) satisfies
    ``radii[j] / theta <= r_j <= radii[j] * theta``.
    """

    radii: tuple
    theta: mpfr

    def __len__(self):
        return len(self.radii)

    def intervals(self):
        """``(lo, hi)`` bracket for each radius, in the same order."""
        return [(r / self.theta, r * self.theta) for r in self.radii]


def _upper_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it makes a strict right turn
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def hull_log_radii(logs: list) -> list:
    """Radius estimates (in ``lg``) from per-coefficient ``lg|c_i|`` values.

    ``logs[i]`` is ``None`` for a vanishing coefficient.  Vanishing
    low-order coefficients stand for exact zero roots, reported as ``None``
    at the end of the non-increasing result.
    """
    zeros = 0
    while logs[zeros] is None:
        zeros += 1
    pts = [(i, y) for i, y in enumerate(logs) if y is not None]
    out = []
    hull = _upper_hull(pts)
    for (i, yi), (k, yk) in zip(hull, hull[1:]):
        out.extend([(yi - yk) / (k - i)] * (k - i))
    out.sort(reverse=True)
    return out + [None] * zeros


def newton_polygon_log_radii(p: Polynomial) -> list:
    """``lg`` of the Newton-polygon radius estimates, non-increasing."""
    return hull_log_radii([None if gmpy2.is_zero(c) else gmpy2.log2(abs(c)) for c in p.coeffs])


def newton_polygon_radii(p: Polynomial, ctx: PrecisionContext | None = None) -> RadiiEstimate:
    """Radius estimates within a factor ``2n`` read off the Newton polygon."""
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    with ctx.activate():
        logs = newton_polygon_log_radii(p)
        radii = tuple(mpfr(0) if lg is None else gmpy2.exp2(lg) for lg in logs)
        return RadiiEstimate(radii, mpfr(2 * p.degree))


def graeffe_iterations_needed(n: int, theta) -> int:
    """Smallest ``k >= 0`` with ``(2n)**(1/2**k) <= theta``."""
    with PrecisionContext(128).activate():
        theta = mpfr(theta)
        if not theta > 1:
            raise ValueError(f"theta must exceed 1, got {theta}")
        target = gmpy2.log(mpfr(2 * n)) / gmpy2.log1p(theta - 1)
        target *= 1 - mpfr(2) ** -60
        k = 0
        while mpfr(2) ** k < target:
            k += 1
        return k


def working_bits(n: int, theta, ctx: PrecisionContext) -> int:
    """Precision needed to resolve radii to relative factor ``theta``.

    Coefficient perturbations of relative size ``eps`` move roots of a degree
    ``n`` polynomial by up to a relative ``2 * eps**(1/n)``, so resolving all
    radii (multiple ones included) needs about ``n * lg(16/(theta-1))`` bits.
    """
    with PrecisionContext(128).activate():
        slack = mpfr(theta) - 1
        need = math.ceil(n * float(gmpy2.log2(16 / slack))) + GUARD_BITS
    return max(ctx.bits, need)


# Graeffe iterates span far more binary orders of magnitude than MPFR's
# usable exponent range, so the iteration keeps every coefficient as a
# (mantissa, exponent) pair with the exponent held in a Python int.

_POW2 = {}


def _pow2(e: int) -> mpfr:
    key = (e, gmpy2.get_context().precision)
    v = _POW2.get(key)
    if v is None:
        v = _POW2[key] = gmpy2.mul_2exp(mpfr(1), e)
    return v


def _split(c):
    if gmpy2.is_zero(c):
        return None
    re, im = c.real, c.imag
    if gmpy2.is_zero(re):
        e = gmpy2.get_exp(im)
    elif gmpy2.is_zero(im):
        e = gmpy2.get_exp(re)
    else:
        e = max(gmpy2.get_exp(re), gmpy2.get_exp(im))
    return (c * _pow2(-e), e)


def _combine(terms, cutoff):
    """Sum of ``m * 2**e`` over ``(m, e)`` terms, dropping those more than
    ``cutoff`` binary orders below the largest."""
    if not terms:
        return None
    top = max(e for _, e in terms)
    acc = None
    for m, e in terms:
        d = e - top
        if d < -cutoff:
            continue
        v = m if d == 0 else m * _pow2(d)
        acc = v if acc is None else acc + v
    out = _split(acc)
    return None if out is None else (out[0], out[1] + top)


def _square_scaled(seq, cutoff):
    m = len(seq)
    out = []
    for k in range(2 * m - 1):
        terms = []
        for i in range(max(0, k - m + 1), (k - 1) // 2 + 1):
            a, b = seq[i], seq[k - i]
            if a is not None and b is not None:
                terms.append((a[0] * b[0], a[1] + b[1] + 1))
        if k % 2 == 0:
            a = seq[k // 2]
            if a is not None:
                terms.append((a[0] * a[0], 2 * a[1]))
        out.append(_combine(terms, cutoff))
    return out


def _graeffe_scaled(coeffs, cutoff):
    n = len(coeffs) - 1
    e2 = _square_scaled(coeffs[0::2], cutoff)
    o2 = _square_scaled(coeffs[1::2], cutoff)
    out = []
    for i in range(n + 1):
        terms = []
        if i < len(e2) and e2[i] is not None:
            terms.append(e2[i])
        if 1 <= i <= len(o2) and o2[i - 1] is not None:
            m, e = o2[i - 1]
            terms.append((-m, e))
        c = _combine(terms, cutoff)
        if c is not None and n % 2:
            c = (-c[0], c[1])
        out.append(c)
    return out


def _check_theta(theta, ctx: PrecisionContext) -> mpfr:
    with ctx.activate():
        theta = mpfr(theta)
        if not theta > 1:
            raise ValueError(f"theta must exceed 1, got {theta}")
        if theta - 1 < mpfr(2) ** (-ctx.bits / 4):
            raise ValueError(
                f"theta - 1 = {float(theta - 1):.3g} is below the resolution of "
                f"{ctx.bits}-bit arithmetic; raise mantissa_bits"
            )
        return theta


def estimate_radii(p: Polynomial, theta, ctx: PrecisionContext | None = None) -> RadiiEstimate:
    """All root radii of ``p`` within relative factor ``theta``.

    Runs ``graeffe_iterations_needed(n, theta)`` normalized root-squaring
    steps and pulls the Newton-polygon estimate of the last iterate back in
    the ``lg`` domain.  Arithmetic runs at :func:`working_bits` or at the
    caller's precision, whichever is larger.
    """
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    theta = _check_theta(theta, ctx)
    n = p.degree
    if n == 0:
        return RadiiEstimate((), theta)
    q, zeros = strip_zero_roots(p)
    k = graeffe_iterations_needed(max(n, 1), theta)
    work = ctx.at_least(working_bits(n, theta, ctx))
    with work.activate():
        coeffs = [_split(+c) for c in q.coeffs]
        for _ in range(k):
            coeffs = _graeffe_scaled(coeffs, work.bits + 16)
        logs = [None if c is None else gmpy2.log2(abs(c[0])) + c[1] for c in coeffs]
        scale = mpfr(2) ** k
        radii = [gmpy2.exp2(lg / scale) for lg in hull_log_radii(logs)]
        radii += [mpfr(0)] * zeros
    return RadiiEstimate(tuple(radii), theta)


def distances_from_point(p: Polynomial, z, theta, ctx: PrecisionContext | None = None) -> RadiiEstimate:
    """Distances ``|x_j - z|`` from ``z`` to every root, within factor ``theta``."""
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    theta = _check_theta(theta, ctx)
    work = ctx.at_least(working_bits(p.degree, theta, ctx))
    shifted = taylor_shift(p, to_mpc(z, work.bits), work)
    return estimate_radii(shifted, theta, work)
