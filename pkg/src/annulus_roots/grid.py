"""Randomized annulus-grid root finder.

Three long shifts of the variable put the roots far from three centers:
``-eta*R`` on the real axis, ``-eta*R*i`` on the imaginary axis and
``-eta*R*e^{i*phi}`` for a random ``phi`` in ``[pi/8, 3pi/8]``, where ``R``
bounds the root moduli.  Distances from each center, known to within the
target resolution, give three families of thin annuli.  Seen from inside
the disc ``|x| <= R`` the first two families are nearly vertical and
horizontal strips whose crossings form a grid of candidate nodes; a band of
the third family that meets exactly one node certifies a root there.

All public geometry is in the caller's coordinates.  Internally the
polynomial is rescaled so the root bound is 1.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpc, mpfr

from .bounds import delta_for, failure_probability_bound
from .poly import Polynomial, cauchy_root_bound, scale_variable
from .precision import MIN_BITS, PrecisionContext
from .radii import RadiiEstimate, distances_from_point, working_bits

PHI_LOW = math.pi / 8
PHI_HIGH = 3 * math.pi / 8


@dataclass(frozen=True)
class FinderConfig:
    """Parameters of one run.

    ``rho`` is the target resolution in the caller's units, ``epsilon`` the
    failure-probability budget and ``eta`` the shift multiplier (raised
    automatically to ``R/rho`` so annulus curvature across the root disc
    stays below ``rho/2``).  ``delta_iso``, when given, is the isolation
    used to report a failure bound for the actual grid size.
    """

    rho: float
    epsilon: float = 0.01
    eta: float = 100.0
    seed: int | None = None
    ctx: PrecisionContext | None = None
    clusters: bool = False
    delta_iso: float | None = None

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.eta >= 100:
            raise ValueError(f"eta must be at least 100, got {self.eta}")
        if self.delta_iso is not None and not self.delta_iso > 2 * self.rho:
            raise ValueError("delta_iso must exceed 2*rho")


@dataclass(frozen=True)
class Annulus:
    radius: mpfr
    half_width: mpfr
    multiplicity: int

    @property
    def lo(self):
        return self.radius - self.half_width

    @property
    def hi(self):
        return self.radius + self.half_width


@dataclass(frozen=True)
class AnnulusFamily:
    center: mpc
    annuli: tuple

    @property
    def multiplicity(self) -> int:
        return sum(a.multiplicity for a in self.annuli)


@dataclass(frozen=True)
class GridNode:
    center: mpc
    half_side: mpfr
    multiplicity: int
    indices: tuple

    @property
    def radius(self) -> mpfr:
        """Radius of the smallest disc containing the node square."""
        return self.half_side * gmpy2.sqrt(mpfr(2))


@dataclass
class Approximation:
    point: mpc
    multiplicity: int
    radius: mpfr
    residual: float | None = None
    converged: bool | None = None
    status: str | None = None


@dataclass
class MatchResult:
    matches: list
    empty: int = 0
    ambiguous: int = 0
    # node indices -> total multiplicity of the bands meeting that node
    band_mass: dict = field(default_factory=dict)


@dataclass
class RootReport:
    approximations: list
    degree: int
    rho: float
    epsilon: float
    error_radius: float
    delta: float
    failure_bound: float
    angle_used: float
    nodes_total: int
    eta_used: float
    r1plus: float
    seed: int | None = None
    bands_empty: int = 0
    bands_ambiguous: int = 0
    clusters_dropped: int = 0
    families: tuple | None = None
    nodes: tuple | None = None

    @property
    def total_multiplicity(self) -> int:
        return sum(a.multiplicity for a in self.approximations)


def draw_angle(seed=None) -> float:
    """Uniform angle in ``[pi/8, 3pi/8]``, reproducible for a given seed."""
    return random.Random(seed).uniform(PHI_LOW, PHI_HIGH)


def merge_intervals(intervals):
    """Chain overlapping ``(lo, hi)`` intervals.

    Returns ``(lo, hi, count)`` triples sorted by ``lo``; ``count`` is the
    number of input intervals absorbed.
    """
    out = []
    for lo, hi in sorted(intervals, key=lambda t: (t[0], t[1])):
        if out and lo <= out[-1][1]:
            plo, phi, m = out[-1]
            out[-1] = (plo, max(phi, hi), m + 1)
        else:
            out.append((lo, hi, 1))
    return out


def annulus_family(center, estimate: RadiiEstimate) -> AnnulusFamily:
    """Annuli around ``center`` from distance estimates; overlapping
    brackets merge into one annulus carrying their count as multiplicity."""
    annuli = []
    for lo, hi, m in merge_intervals(estimate.intervals()):
        annuli.append(Annulus((lo + hi) / 2, (hi - lo) / 2, m))
    return AnnulusFamily(center, tuple(annuli))


@dataclass(frozen=True)
class _Plan:
    ctx: PrecisionContext
    work: PrecisionContext
    r1plus: mpfr
    scale: mpfr
    eta: mpfr
    theta: mpfr


def _plan(p: Polynomial, cfg: FinderConfig) -> _Plan:
    ctx = cfg.ctx if cfg.ctx is not None else PrecisionContext.for_polynomial(p)
    r1 = cauchy_root_bound(p, ctx)
    with ctx.activate():
        scale = r1 if r1 > 0 else mpfr(1)
        rho_hat = mpfr(cfg.rho) / scale
        eta = max(mpfr(cfg.eta), 1 / rho_hat)
        # absolute bracket width (theta - 1/theta) * (eta + 1) stays below rho_hat
        theta = 1 + rho_hat / (4 * eta * (1 + 1 / eta))
    work = ctx.at_least(working_bits(p.degree, theta, ctx))
    return _Plan(ctx, work, r1, scale, eta, theta)


def _shift_centers(eta, phi: float):
    return (
        mpc(-eta, 0),
        mpc(0, -eta),
        -eta * mpc(gmpy2.cos(mpfr(phi)), gmpy2.sin(mpfr(phi))),
    )


def build_families(p: Polynomial, cfg: FinderConfig, phi: float, plan: _Plan | None = None):
    """Vertical, horizontal and diagonal annulus families for ``p``.

    Each family comes from the root distances to its shift center, bracketed
    to within ``rho/2`` in absolute terms.
    """
    plan = plan if plan is not None else _plan(p, cfg)
    work = plan.work
    p_hat = scale_variable(p, plan.scale, work)
    families = []
    with work.activate():
        centers = _shift_centers(plan.eta, phi)
    for c in centers:
        est = distances_from_point(p_hat, c, plan.theta, work)
        with work.activate():
            fam = annulus_family(c, est)
            families.append(
                AnnulusFamily(
                    c * plan.scale,
                    tuple(
                        Annulus(a.radius * plan.scale, a.half_width * plan.scale, a.multiplicity)
                        for a in fam.annuli
                    ),
                )
            )
    return tuple(families)


def _family_bits(*families) -> int:
    return max([MIN_BITS] + [f.center.real.precision for f in families])


def _circle_intersection(c1: mpc, r1, c2: mpc, r2):
    """The intersection point of two circles nearer to the origin."""
    d_vec = c2 - c1
    d = abs(d_vec)
    u = d_vec / d
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h2 = r1 * r1 - a * a
    if h2 < 0:
        return None
    h = gmpy2.sqrt(h2)
    base = c1 + a * u
    off = mpc(0, 1) * h * u
    x, y = base + off, base - off
    return x if gmpy2.norm(x) <= gmpy2.norm(y) else y


def build_grid(vertical: AnnulusFamily, horizontal: AnnulusFamily, r1plus, cfg: FinderConfig) -> list:
    """Grid nodes at the crossings of vertical and horizontal annuli.

    A node is centered where the two mid-radius circles cross; its square
    has half side ``(w_i + w_j)/sqrt(2)`` (never below ``rho/sqrt(2)``) for
    annulus half widths ``w_i, w_j``.  Nodes missing the disc
    ``|x| <= r1plus + rho`` are dropped.  Multiplicity is the smaller of the
    two annulus multiplicities.
    """
    bits = _family_bits(vertical, horizontal)
    nodes = []
    with PrecisionContext(bits).activate():
        rho = mpfr(cfg.rho)
        sqrt2 = gmpy2.sqrt(mpfr(2))
        floor = rho / sqrt2
        limit = mpfr(r1plus) + rho
        for i, a in enumerate(vertical.annuli):
            for j, b in enumerate(horizontal.annuli):
                pt = _circle_intersection(vertical.center, a.radius, horizontal.center, b.radius)
                if pt is None:
                    continue
                half = max((a.half_width + b.half_width) / sqrt2, floor)
                if abs(pt) - half * sqrt2 > limit:
                    continue
                nodes.append(GridNode(pt, half, min(a.multiplicity, b.multiplicity), (i, j)))
    return nodes


def match_diagonal(diagonal: AnnulusFamily, nodes: list) -> MatchResult:
    """Match each diagonal band to the unique grid node it meets, if any.

    A node meets a band when its circumscribed disc intersects the annulus,
    i.e. when the distance from the diagonal center to the node center lies
    in ``[lo - s, hi + s]`` for node radius ``s``.  Node distances are sorted
    once and each band's candidates are found by bisection.
    """
    result = MatchResult([])
    if not nodes:
        result.empty = len(diagonal.annuli)
        return result
    with PrecisionContext(_family_bits(diagonal)).activate():
        o = diagonal.center
        dist = [abs(nd.center - o) for nd in nodes]
        radius = [nd.radius for nd in nodes]
        order = sorted(range(len(nodes)), key=dist.__getitem__)
        keys = [dist[i] for i in order]
        smax = max(radius)
        for b, ann in enumerate(diagonal.annuli):
            lo, hi = ann.lo, ann.hi
            i0 = bisect.bisect_left(keys, lo - smax)
            i1 = bisect.bisect_right(keys, hi + smax)
            hits = [
                k for k in order[i0:i1] if lo - radius[k] <= dist[k] <= hi + radius[k]
            ]
            for k in hits:
                key = nodes[k].indices
                result.band_mass[key] = result.band_mass.get(key, 0) + ann.multiplicity
            if len(hits) == 1:
                result.matches.append((nodes[hits[0]], b))
            elif hits:
                result.ambiguous += 1
            else:
                result.empty += 1
    return result


def find_roots(p: Polynomial, cfg: FinderConfig, keep_geometry: bool = False) -> RootReport:
    """Approximate the well-isolated roots (and, with ``cfg.clusters``,
    isolated root clusters) of ``p``.

    Each matched node contributes one approximation at its center.  Its
    multiplicity bounds the number of roots inside the node: the smaller of
    the node multiplicity and the total multiplicity of diagonal bands
    meeting it.  Without ``cfg.clusters`` only multiplicity-one nodes are
    reported.
    """
    n = p.degree
    if n < 1:
        raise ValueError("need a polynomial of degree >= 1")
    seed = cfg.seed if cfg.seed is not None else random.SystemRandom().getrandbits(63)
    phi = draw_angle(seed)
    plan = _plan(p, cfg)
    vertical, horizontal, diagonal = build_families(p, cfg, phi, plan)
    nodes = build_grid(vertical, horizontal, plan.r1plus, cfg)
    res = match_diagonal(diagonal, nodes)

    chosen = {}
    for node, _ in res.matches:
        chosen.setdefault(node.indices, node)
    approx = []
    dropped = 0
    with plan.work.activate():
        for key, node in chosen.items():
            m = min(node.multiplicity, res.band_mass[key])
            if m > 1 and not cfg.clusters:
                dropped += 1
                continue
            approx.append(Approximation(node.center, m, node.radius))
    approx.sort(key=lambda a: (a.point.real, a.point.imag))

    if cfg.delta_iso is not None:
        fail = failure_probability_bound(cfg.rho, cfg.delta_iso, max(len(nodes), 1))
    else:
        fail = cfg.epsilon
    return RootReport(
        approximations=approx,
        degree=n,
        rho=cfg.rho,
        epsilon=cfg.epsilon,
        error_radius=cfg.rho * math.sqrt(2),
        delta=delta_for(n, cfg.rho, cfg.epsilon),
        failure_bound=fail,
        angle_used=phi,
        nodes_total=len(nodes),
        eta_used=float(plan.eta),
        r1plus=float(plan.r1plus),
        seed=seed,
        bands_empty=res.empty,
        bands_ambiguous=res.ambiguous,
        clusters_dropped=dropped,
        families=(vertical, horizontal, diagonal) if keep_geometry else None,
        nodes=tuple(nodes) if keep_geometry else None,
    )
