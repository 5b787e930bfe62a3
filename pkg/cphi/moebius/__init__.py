"""Möbius maps, hyperbolic disc automorphisms and their conjugations."""

from cphi.moebius.maps import (
    CAYLEY,
    CAYLEY_INVERSE,
    INFINITY,
    MapClass,
    MoebiusMap,
    apply,
    cayley,
    cayley_inverse,
    classify,
    fixed_points,
    is_infinite,
    matrix_power,
    multiplier,
)
from cphi.moebius.hyperbolic import (
    CanonicalParams,
    HyperbolicAutomorphism,
    canonical_iterate,
    canonical_r,
    circle_defect,
    conjugate,
    conjugator,
    disc_automorphism,
    geodesic_nearest_point,
    iterate,
    iterate_by_composition,
    iterate_points,
    make_canonical,
    one_minus_r,
)

__all__ = [
    "CAYLEY",
    "CAYLEY_INVERSE",
    "INFINITY",
    "MapClass",
    "MoebiusMap",
    "apply",
    "cayley",
    "cayley_inverse",
    "classify",
    "fixed_points",
    "is_infinite",
    "matrix_power",
    "multiplier",
    "CanonicalParams",
    "HyperbolicAutomorphism",
    "canonical_iterate",
    "canonical_r",
    "circle_defect",
    "conjugate",
    "conjugator",
    "disc_automorphism",
    "geodesic_nearest_point",
    "iterate",
    "iterate_by_composition",
    "iterate_points",
    "make_canonical",
    "one_minus_r",
]
