"""Working-precision handling on top of gmpy2 (MPFR/MPC)."""

from __future__ import annotations

import contextlib
import math
import os
from dataclasses import dataclass

import gmpy2

ENV_PRECISION = "ANNULUS_ROOTS_PRECISION"
MIN_BITS = 64
DEFAULT_BITS = 256


class PrecisionExhausted(ArithmeticError):
    """Raised when a computation leaves the representable range or loses
    all significant bits; retry with a larger ``mantissa_bits``."""


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < MIN_BITS:
            raise ValueError(f"mantissa_bits must be an integer >= {MIN_BITS}, got {self.mantissa_bits!r}")

    @property
    def bits(self) -> int:
        return self.mantissa_bits

    @contextlib.contextmanager
    def activate(self):
        """Make this precision current for gmpy2 arithmetic in the block.

        The exponent range is opened to the MPFR maximum; overflow or
        underflow inside the block surfaces as :class:`PrecisionExhausted`.
        """
        ctx = gmpy2.context(
            gmpy2.get_context(),
            precision=self.mantissa_bits,
            emax=gmpy2.get_emax_max(),
            emin=gmpy2.get_emin_min(),
            trap_overflow=True,
            trap_underflow=True,
        )
        try:
            with ctx:
                yield self
        except (gmpy2.OverflowResultError, gmpy2.UnderflowResultError) as exc:
            raise PrecisionExhausted(
                f"exponent range exhausted at {self.mantissa_bits} bits: {exc}"
            ) from exc

    def at_least(self, bits: int) -> "PrecisionContext":
        return self if bits <= self.mantissa_bits else PrecisionContext(int(bits))

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.mantissa_bits)

    @classmethod
    def for_polynomial(cls, p) -> "PrecisionContext":
        """Default working precision ``max(256, 4n + 2*tau)``.

        The ``ANNULUS_ROOTS_PRECISION`` environment variable, when set,
        overrides the computed value.
        """
        env = os.environ.get(ENV_PRECISION)
        if env:
            try:
                return cls(int(env))
            except ValueError as exc:
                raise ValueError(f"{ENV_PRECISION}={env!r} is not a valid precision") from exc
        from .poly import height_tau

        return cls(max(DEFAULT_BITS, 4 * p.degree + math.ceil(2 * height_tau(p))))


def check_finite(*values):
    for v in values:
        if isinstance(v, gmpy2.mpc):
            ok = gmpy2.is_finite(v.real) and gmpy2.is_finite(v.imag)
        else:
            ok = gmpy2.is_finite(v)
        if not ok:
            raise PrecisionExhausted(f"non-finite intermediate value {v!r}")
