"""Shared orbit families for the eigen tests."""

import pytest

from cphi.eigen import orbit_norms
from cphi.hardy import WeightSpec, constant, weight_function
from cphi.moebius import make_canonical


@pytest.fixture(scope="module")
def phi2():
    """The canonical automorphism with mu = 2."""
    return make_canonical(2.0)


@pytest.fixture(scope="module")
def weight_family(phi2):
    """Orbit norms of weight(3/4, 3/4) under mu = 2, window 60, no members."""
    f = weight_function(WeightSpec(gamma=0.75, delta=0.75), budget=256)
    return orbit_norms(f, phi2, 60, with_members=False)


@pytest.fixture(scope="module")
def constant_family(phi2):
    """Orbit of the constant 1 under mu = 2, window 20."""
    return orbit_norms(constant(1.0, budget=64), phi2, 20)
