"""Orbit families, Laurent and circle eigenfunctions, decay and summability checks."""

from cphi.eigen.circle import (
    CirclePartial,
    circle_eigen_partial,
    convergence_residual,
    median_convergence,
    sampled_omegas,
)
from cphi.eigen.laurent import (
    Annulus,
    EigenReport,
    EigenStatus,
    ScanSummary,
    eigen_scan,
    laurent_eigenfunction,
    required_window,
    summarize,
    tail_ratios,
)
from cphi.eigen.orbit import (
    HypercyclicWitness,
    OrbitFamily,
    backward_bounded,
    convergence_radii,
    decay_fit,
    hypercyclic_check,
    orbit_norms,
    tail_square_sum,
)
from cphi.eigen.routes import (
    RouteReport,
    ScanResult,
    hp_reduction_scan,
    one_sided_hp_scan,
    one_sided_route,
    reversed_scan,
)

__all__ = [
    "CirclePartial",
    "circle_eigen_partial",
    "convergence_residual",
    "median_convergence",
    "sampled_omegas",
    "Annulus",
    "EigenReport",
    "EigenStatus",
    "ScanSummary",
    "eigen_scan",
    "laurent_eigenfunction",
    "required_window",
    "summarize",
    "tail_ratios",
    "HypercyclicWitness",
    "OrbitFamily",
    "backward_bounded",
    "convergence_radii",
    "decay_fit",
    "hypercyclic_check",
    "orbit_norms",
    "tail_square_sum",
    "RouteReport",
    "ScanResult",
    "hp_reduction_scan",
    "one_sided_hp_scan",
    "one_sided_route",
    "reversed_scan",
]
