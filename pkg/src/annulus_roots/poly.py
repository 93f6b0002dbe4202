"""Arbitrary-precision univariate polynomials and coefficient transforms.

Coefficients are stored as :class:`gmpy2.mpc` values in ascending degree
order (``coeffs[i]`` multiplies ``x**i``).  Every transform takes a
:class:`PrecisionContext` that fixes the rounding precision of the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .precision import PrecisionContext, check_finite

INPUT_BITS = 1024


def to_mpc(value, bits: int = INPUT_BITS) -> mpc:
    """Convert a number (or a ``"re im"`` string) to an mpc rounded to ``bits``.

    Values that already are mpc keep their own precision.
    """
    if isinstance(value, mpc):
        return value
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        if isinstance(value, mpfr):
            return mpc(value, 0)
        if isinstance(value, str):
            parts = value.split()
            if len(parts) == 1:
                try:
                    return mpc(mpfr(parts[0]), 0)
                except ValueError:
                    return mpc(complex(parts[0].replace("i", "j")))
            if len(parts) == 2:
                return mpc(mpfr(parts[0]), mpfr(parts[1]))
            raise ValueError(f"cannot parse coefficient {value!r}")
        if isinstance(value, Fraction):
            return mpc(mpfr(gmpy2.mpq(value.numerator, value.denominator)), 0)
        if isinstance(value, complex):
            return mpc(value)
        if isinstance(value, tuple) and len(value) == 2:
            return mpc(to_mpc(value[0], bits).real, to_mpc(value[1], bits).real)
        return mpc(mpfr(value), 0)


@dataclass(frozen=True)
class Polynomial:
    """``p(x) = sum(coeffs[i] * x**i)`` with a nonzero leading coefficient."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(to_mpc(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        if gmpy2.is_zero(coeffs[-1]):
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> mpc:
        return self.coeffs[-1]

    def is_real(self) -> bool:
        return all(gmpy2.is_zero(c.imag) for c in self.coeffs)

    @classmethod
    def from_coefficients(cls, values: Iterable, bits: int = INPUT_BITS) -> "Polynomial":
        return cls(tuple(to_mpc(v, bits) for v in values))

    @classmethod
    def from_roots(cls, roots: Sequence, leading=1, bits: int | None = None) -> "Polynomial":
        """Expand ``leading * prod(x - r)``.

        The default precision is large enough that products of double
        precision inputs are formed exactly.
        """
        n = len(roots)
        if bits is None:
            bits = 64 * (n + 2) + 128
        with PrecisionContext(bits).activate():
            acc = [to_mpc(leading, bits)]
            for r in roots:
                r = to_mpc(r, bits)
                nxt = [mpc(0)] * (len(acc) + 1)
                for i, a in enumerate(acc):
                    nxt[i + 1] += a
                    nxt[i] -= r * a
                acc = nxt
        return cls(tuple(acc))

    def __repr__(self):
        terms = ", ".join(str(complex(c)) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"Polynomial(degree={self.degree}, coeffs=[{terms}{more}])"


def _resolve(ctx: PrecisionContext | None, p: Polynomial) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext.for_polynomial(p)


def evaluate(p: Polynomial, z, ctx: PrecisionContext | None = None) -> mpc:
    """Horner evaluation of ``p(z)``."""
    ctx = _resolve(ctx, p)
    with ctx.activate():
        z = to_mpc(z, ctx.bits)
        acc = mpc(0)
        for c in reversed(p.coeffs):
            acc = acc * z + c
    check_finite(acc)
    return acc


def taylor_shift(p: Polynomial, z, ctx: PrecisionContext | None = None) -> Polynomial:
    """Coefficients of ``q(x) = p(x + z)`` by repeated synthetic division."""
    ctx = _resolve(ctx, p)
    n = p.degree
    with ctx.activate():
        z = to_mpc(z, ctx.bits)
        a = [+c for c in p.coeffs]
        if not gmpy2.is_zero(z):
            for i in range(n):
                for j in range(n - 1, i - 1, -1):
                    a[j] += z * a[j + 1]
    check_finite(*a)
    return Polynomial(tuple(a))


def _square(seq: list) -> list:
    m = len(seq)
    if m == 0:
        return []
    out = []
    for k in range(2 * m - 1):
        lo = max(0, k - m + 1)
        hi = (k - 1) // 2
        s = mpc(0)
        for i in range(lo, hi + 1):
            s += seq[i] * seq[k - i]
        s = 2 * s
        if k % 2 == 0:
            s += seq[k // 2] * seq[k // 2]
        out.append(s)
    return out


def graeffe_step(q: Polynomial, ctx: PrecisionContext | None = None) -> Polynomial:
    """One Dandelin-Graeffe root-squaring step.

    Splits ``q(x) = E(x**2) + x*O(x**2)`` and returns
    ``(-1)**n * (E(x)**2 - x*O(x)**2)``, whose roots are the squares of the
    roots of ``q``.  The leading coefficient of the result is ``q_n**2``, so
    a monic input gives a monic output.
    """
    ctx = _resolve(ctx, q)
    n = q.degree
    with ctx.activate():
        even = [+c for c in q.coeffs[0::2]]
        odd = [+c for c in q.coeffs[1::2]]
        e2 = _square(even)
        o2 = _square(odd)
        out = [mpc(0)] * (n + 1)
        for i, c in enumerate(e2):
            out[i] += c
        for i, c in enumerate(o2):
            out[i + 1] -= c
        if n % 2:
            out = [-c for c in out]
    check_finite(*out)
    return Polynomial(tuple(out))


def max_modulus(p: Polynomial) -> mpfr:
    return max(abs(c) for c in p.coeffs)


def normalize(p: Polynomial, ctx: PrecisionContext | None = None) -> Polynomial:
    """Divide by the largest coefficient modulus so that ``max|p_i| == 1``."""
    ctx = _resolve(ctx, p)
    with ctx.activate():
        m = max(abs(c) for c in p.coeffs)
        out = tuple(c / m for c in p.coeffs)
    return Polynomial(out)


def height_tau(p: Polynomial) -> float:
    """``lg(||p|| + 1/||p||)`` with ``||p||`` the max coefficient modulus."""
    with PrecisionContext(128).activate():
        norm = max(abs(c) for c in p.coeffs)
        return float(gmpy2.log2(norm + 1 / norm))


def cauchy_root_bound(p: Polynomial, ctx: PrecisionContext | None = None) -> mpfr:
    """Upper bound ``2 * max_i |p_{n-i}/p_n|**(1/i)`` on the root moduli.

    The bound is at most ``2n`` times the largest root modulus.
    """
    ctx = ctx if ctx is not None else PrecisionContext()
    n = p.degree
    with ctx.activate():
        lead = abs(p.leading)
        best = mpfr(0)
        for i in range(1, n + 1):
            c = p.coeffs[n - i]
            if gmpy2.is_zero(c):
                continue
            best = max(best, gmpy2.root(abs(c) / lead, i))
        return 2 * best


def scale_variable(p: Polynomial, s, ctx: PrecisionContext | None = None) -> Polynomial:
    """Coefficients of ``p(s*x)``."""
    ctx = _resolve(ctx, p)
    with ctx.activate():
        s = to_mpc(s, ctx.bits)
        out = []
        power = mpc(1)
        for c in p.coeffs:
            out.append(c * power)
            power *= s
    check_finite(*out)
    return Polynomial(tuple(out))


def strip_zero_roots(p: Polynomial) -> tuple[Polynomial, int]:
    """Split off the factor ``x**m`` given by vanishing low-order coefficients."""
    m = 0
    while gmpy2.is_zero(p.coeffs[m]):
        m += 1
    if m == 0:
        return p, 0
    return Polynomial(p.coeffs[m:]), m

