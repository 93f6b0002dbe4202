"""Closed-form probability and isolation bounds for the annulus-grid finder."""

from __future__ import annotations

import math


def collision_probability_bound(rho_prime: float, dist: float, gamma: float) -> float:
    """Chance that a random line through one disc also meets another.

    Both discs have radius ``rho_prime`` and centers ``dist`` apart; the
    line direction is uniform over an arc of width ``gamma``.  Returns
    ``(2/gamma) * sin(2*rho_prime/dist)``.
    """
    if not dist > 2 * rho_prime:
        raise ValueError(f"need dist > 2*rho_prime, got dist={dist}, rho_prime={rho_prime}")
    if not 0 < gamma <= 2 * math.pi:
        raise ValueError(f"gamma must lie in (0, 2*pi], got {gamma}")
    return (2.0 / gamma) * math.sin(2.0 * rho_prime / dist)


def collision_probability_simplified(rho: float, dist: float) -> float:
    """``4*sqrt(2)*rho / (pi*dist)``: the collision bound for node discs of
    radius ``rho*sqrt(2)`` and angles drawn from ``[pi/8, 3pi/8]``."""
    if not dist > 0 or not rho > 0:
        raise ValueError("rho and dist must be positive")
    return 4.0 * math.sqrt(2.0) * rho / (math.pi * dist)


def failure_probability_bound(rho: float, delta_iso: float, n_nodes: int) -> float:
    """Upper bound on the chance that some diagonal band meets two
    ``delta_iso``-isolated nodes of an ``n_nodes``-node grid, capped at 1."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not delta_iso > 2 * rho:
        raise ValueError(f"isolation {delta_iso} must exceed 2*rho = {2 * rho}")
    if n_nodes < 1:
        raise ValueError(f"need at least one node, got {n_nodes}")
    return min(1.0, 2.0 * math.sqrt(2.0) * rho * (n_nodes - 1) * n_nodes / (math.pi * delta_iso))


def delta_for(n: int, rho: float, epsilon: float) -> float:
    """Isolation distance ``n^2 (n^2 - 1) * 8 rho / (pi * epsilon)`` beyond
    which a root is found with probability at least ``1 - epsilon``."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return n * n * (n * n - 1) * 8.0 * rho / (math.pi * epsilon)
