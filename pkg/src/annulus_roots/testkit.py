"""Ground truth for tests: a simultaneous-iteration root solver and a
seeded generator of polynomials with known roots.

The solver (Aberth-Ehrlich) shares no code path with the annulus-grid
finder, so agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpc, mpfr

from .poly import Polynomial, to_mpc
from .precision import PrecisionContext


class OracleFailure(RuntimeError):
    pass


class InfeasiblePlan(ValueError):
    pass


def reference_eval(p: Polynomial, z, bits: int) -> mpmath.mpc:
    """``sum(p_i * z**i)`` term by term in mpmath, independent of Horner/gmpy2."""
    with mpmath.workprec(bits):
        z = mpmath.mpc(complex(z)) if not isinstance(z, mpc) else mpmath.mpc(
            mpmath.mpf(str(z.real)), mpmath.mpf(str(z.imag))
        )
        total = mpmath.mpc(0)
        for i, c in enumerate(p.coeffs):
            total += mpmath.mpc(mpmath.mpf(str(c.real)), mpmath.mpf(str(c.imag))) * z**i
        return total


def _float_seed(a, radius):
    """Companion-matrix eigenvalues in double precision, used only to seed
    the multiprecision iteration; ``None`` when the coefficients do not fit."""
    lo = math.ldexp(1.0, -900)
    if not all(cmath.isfinite(c) for c in a) or not lo < radius < 1 / lo:
        return None
    if any(c != 0 and abs(c) < lo for c in a):
        return None
    with np.errstate(all="ignore"):
        try:
            z = np.roots(np.array(a[::-1], dtype=complex))
        except np.linalg.LinAlgError:
            return None
    if len(z) != len(a) - 1 or not np.all(np.isfinite(z)):
        return None
    return [complex(w) for w in z]


def oracle_roots(p: Polynomial, ctx: PrecisionContext | None = None, max_iter: int | None = None) -> list:
    """All ``n`` roots by Aberth-Ehrlich iteration at twice the caller's
    precision, ordered by non-increasing modulus then argument.

    Iteration stops once every residual is below ``2**(-bits/2)`` times the
    evaluation scale ``sum |p_i| |z|**i``, followed by two polishing sweeps.
    """
    ctx = ctx if ctx is not None else PrecisionContext.for_polynomial(p)
    n = p.degree
    if n < 1:
        raise ValueError("oracle_roots needs degree >= 1")
    work = ctx.doubled()
    if max_iter is None:
        max_iter = 200 + 20 * n + 4 * work.bits
    with work.activate():
        lead = +p.leading
        a = [c / lead for c in p.coeffs]
        mods = [abs(c) for c in a]
        bound = max((gmpy2.root(mods[n - i], i) for i in range(1, n + 1) if mods[n - i] > 0), default=mpfr(0))
        radius = max(bound, mpfr(2) ** -20)
        seed = _float_seed([complex(c) for c in a], float(radius))
        if seed is not None:
            z = [mpc(w) for w in seed]
        else:
            z = [
                radius * mpc(gmpy2.cos(mpfr(2 * math.pi * k / n + 0.4)), gmpy2.sin(mpfr(2 * math.pi * k / n + 0.4)))
                for k in range(n)
            ]
        tol = mpfr(2) ** (-(work.bits // 2))
        polish = 2
        for _ in range(max_iter):
            done = True
            new = list(z)
            for k in range(n):
                zk = z[k]
                f, df = a[n], mpc(0)
                scale = mods[n]
                az = abs(zk)
                for c, m in zip(reversed(a[:-1]), reversed(mods[:-1])):
                    df = df * zk + f
                    f = f * zk + c
                    scale = scale * az + m
                if abs(f) > tol * scale:
                    done = False
                if gmpy2.is_zero(f):
                    continue
                w = f / df if not gmpy2.is_zero(df) else mpc(tol)
                s = mpc(0)
                for j in range(n):
                    if j != k:
                        diff = zk - z[j]
                        if not gmpy2.is_zero(diff):
                            s += 1 / diff
                new[k] = zk - w / (1 - w * s)
            z = new
            if done:
                polish -= 1
                if polish < 0:
                    break
        else:
            raise OracleFailure(f"Aberth iteration did not converge in {max_iter} sweeps")
        z.sort(key=lambda v: (-abs(v), gmpy2.phase(v)))
        return [mpc(v) for v in z]


def match_roots(found, truth) -> float:
    """Largest distance in a greedy nearest-neighbour pairing of two
    equal-size root multisets."""
    left = [complex(x) for x in truth]
    worst = 0.0
    for x in found:
        x = complex(x)
        k = min(range(len(left)), key=lambda i: abs(left[i] - x))
        worst = max(worst, abs(left.pop(k) - x))
    return worst


@dataclass(frozen=True)
class RootPlan:
    """Recipe for :func:`random_poly`.

    ``clusters`` lists ``(size, spread)`` pairs: ``size`` roots placed within
    ``spread`` of a common center.  Singletons and cluster centers keep a
    pairwise distance of at least ``isolation`` plus the spreads involved.
    With ``real`` the roots are real or come in conjugate pairs.
    """

    n: int
    isolation: float = 0.0
    clusters: tuple = ()
    radius_range: tuple = (0.0, 1.0)
    real: bool = False


def _sample_point(rng, r0, r1):
    r = math.sqrt(rng.uniform(r0 * r0, r1 * r1))
    return cmath.rect(r, rng.uniform(0, 2 * math.pi))


def random_poly(plan: RootPlan, seed, bits: int | None = None):
    """A polynomial with known roots drawn per ``plan``; deterministic per seed.

    Roots are double precision numbers and the product is expanded without
    rounding, so the returned roots are exact roots of the polynomial.
    """
    if plan.n < 1:
        raise InfeasiblePlan("n must be >= 1")
    clustered = sum(size for size, _ in plan.clusters)
    if clustered > plan.n:
        raise InfeasiblePlan("cluster sizes exceed n")
    if plan.real and plan.clusters:
        raise InfeasiblePlan("clusters are not supported for real plans")
    r0, r1 = plan.radius_range
    if not 0 <= r0 <= r1 or r1 <= 0:
        raise InfeasiblePlan(f"bad radius range {plan.radius_range}")
    rng = random.Random(seed)
    units = [spread for size, spread in plan.clusters] + [0.0] * (plan.n - clustered)
    sizes = [size for size, _ in plan.clusters] + [1] * (plan.n - clustered)
    for _attempt in range(200):
        roots = _try_layout(rng, plan, units, sizes, r0, r1)
        if roots is not None:
            break
    else:
        raise InfeasiblePlan(f"could not place {plan.n} roots with isolation {plan.isolation}")
    return Polynomial.from_roots(roots, bits=bits), tuple(to_mpc(r, 64) for r in roots)


def _far_enough(pt, pad, placed, iso):
    return all(abs(pt - q) >= iso + pad + qpad for q, qpad in placed)


def _try_layout(rng, plan, units, sizes, r0, r1):
    placed = []
    roots = []
    if plan.real:
        left = plan.n
        while left:
            for _ in range(2000):
                pair = left >= 2 and rng.random() < 0.5
                if pair:
                    pt = _sample_point(rng, r0, r1)
                    if abs(pt.imag) * 2 < plan.isolation or abs(pt.imag) < 1e-3 * r1:
                        continue
                    cands = [pt, pt.conjugate()]
                else:
                    cands = [complex(rng.choice((-1, 1)) * rng.uniform(r0, r1), 0.0)]
                if all(_far_enough(c, 0.0, placed, plan.isolation) for c in cands):
                    break
            else:
                return None
            for c in cands:
                placed.append((c, 0.0))
                roots.append(c)
            left -= len(cands)
        return roots
    for spread, size in zip(units, sizes):
        for _ in range(2000):
            pt = _sample_point(rng, r0, r1)
            if _far_enough(pt, spread, placed, plan.isolation):
                break
        else:
            return None
        placed.append((pt, spread))
        if size == 1:
            roots.append(pt)
        else:
            roots.extend(pt + _sample_point(rng, 0.0, spread) for _ in range(size))
    return roots
