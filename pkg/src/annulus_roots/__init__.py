"""Root finding by root-radii approximation on a randomized annulus grid."""

from .bounds import (
    collision_probability_bound,
    collision_probability_simplified,
    delta_for,
    failure_probability_bound,
)
from .grid import (
    Annulus,
    AnnulusFamily,
    Approximation,
    FinderConfig,
    GridNode,
    RootReport,
    build_families,
    build_grid,
    draw_angle,
    find_roots,
    match_diagonal,
)
from .poly import (
    Polynomial,
    cauchy_root_bound,
    evaluate,
    graeffe_step,
    height_tau,
    normalize,
    taylor_shift,
)
from .precision import PrecisionContext, PrecisionExhausted
from .radii import (
    RadiiEstimate,
    distances_from_point,
    estimate_radii,
    graeffe_iterations_needed,
    newton_polygon_radii,
)
from .real_roots import RealInterval, real_root_intervals
from .refine import newton_refine, refine_report

__all__ = [
    "Annulus",
    "AnnulusFamily",
    "Approximation",
    "FinderConfig",
    "GridNode",
    "Polynomial",
    "PrecisionContext",
    "PrecisionExhausted",
    "RadiiEstimate",
    "RealInterval",
    "RootReport",
    "build_families",
    "build_grid",
    "cauchy_root_bound",
    "collision_probability_bound",
    "collision_probability_simplified",
    "delta_for",
    "distances_from_point",
    "draw_angle",
    "estimate_radii",
    "evaluate",
    "failure_probability_bound",
    "find_roots",
    "graeffe_iterations_needed",
    "graeffe_step",
    "height_tau",
    "match_diagonal",
    "newton_polygon_radii",
    "newton_refine",
    "normalize",
    "real_root_intervals",
    "refine_report",
    "taylor_shift",
]

__version__ = "0.1.0"
