"""Poisson kernels, orbit sums of kernels and boundary maximal functions."""

from cphi.poisson.kernel import (
    GridCheck,
    KernelPoint,
    SumBoundReport,
    iterate_bracket_check,
    kernel,
    kernel_bound,
    kernel_grid_check,
    orbit_kernel_sum,
    orbit_sum_grid_check,
    terms_needed,
)
from cphi.poisson.maximal import (
    boundary_density,
    hl_maximal,
    hl_maximal_all,
    maximal_domination,
    radial_maximal,
    radial_maximal_all,
)

__all__ = [
    "GridCheck",
    "KernelPoint",
    "SumBoundReport",
    "iterate_bracket_check",
    "kernel",
    "kernel_bound",
    "kernel_grid_check",
    "orbit_kernel_sum",
    "orbit_sum_grid_check",
    "terms_needed",
    "boundary_density",
    "hl_maximal",
    "hl_maximal_all",
    "maximal_domination",
    "radial_maximal",
    "radial_maximal_all",
]
