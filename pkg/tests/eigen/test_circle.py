"""Tests for circle-indexed partial sums."""

import cmath
import math

import numpy as np
import pytest

from cphi.eigen import (
    circle_eigen_partial,
    convergence_residual,
    median_convergence,
    orbit_norms,
    sampled_omegas,
)
from cphi.errors import DomainError
from cphi.hardy import WeightSpec, weight_function


@pytest.fixture(scope="module")
def sqrt_family(phi2):
    """Orbit members of sqrt(1 - z^2) under mu = 2, window 40."""
    f = weight_function(WeightSpec(gamma=0.5, delta=0.5), budget=4096)
    return orbit_norms(f, phi2, 40)


class TestCircleEigenPartial:
    """Test F_M(omega) = sum omega^-n f o phi_n."""

    def test_constant(self, constant_family):
        """Test that f = 1, omega = 1, M = 3 gives F = 7."""
        partial = circle_eigen_partial(constant_family, 1.0, 3)
        assert partial.function.coeffs[0] == pytest.approx(7.0)
        assert np.allclose(partial.function.coeffs[1:], 0.0, atol=1e-12)
        assert partial.norm == pytest.approx(7.0)
        assert partial.identity_residual == pytest.approx(0.0, abs=1e-12)
        assert partial.convergence_residual == pytest.approx(0.0, abs=1e-12)

    def test_identity_holds(self, sqrt_family):
        """Test the partial-sum identity at omega = e^(i pi/3), M = 40."""
        partial = circle_eigen_partial(sqrt_family, cmath.exp(1j * math.pi / 3), 40)
        assert partial.identity_residual <= 1e-7
        assert partial.truncation == 40

    @pytest.mark.slow
    def test_identity_at_sampled_omegas(self, sqrt_family):
        """Test the identity at 64 sampled omegas."""
        for omega in sampled_omegas(64, seed=1):
            assert circle_eigen_partial(sqrt_family, omega, 40).identity_residual <= 1e-7

    def test_non_unimodular(self, sqrt_family):
        """Test that |omega| != 1 is rejected."""
        with pytest.raises(DomainError, match="omega"):
            circle_eigen_partial(sqrt_family, 1.01, 10)

    def test_truncation_outside_window(self, constant_family):
        """Test that M beyond the window is rejected."""
        with pytest.raises(DomainError, match="outside"):
            circle_eigen_partial(constant_family, 1.0, 21)

    def test_needs_members(self, weight_family):
        """Test that a family without members is rejected."""
        with pytest.raises(DomainError, match="members"):
            circle_eigen_partial(weight_family, 1.0, 5)


class TestConvergence:
    """Test ||C_phi F_M - omega F_M|| / ||F_M|| as M grows."""

    def test_median_decreases(self, sqrt_family):
        """Test the median over 64 omegas for M in 10, 20, 40."""
        medians = median_convergence(sqrt_family, sampled_omegas(64), [10, 20, 40])
        assert medians[0] > medians[1] > medians[2]
        assert medians[2] < 1e-3

    def test_constant_does_not_converge_away_from_one(self, constant_family):
        """Test that f = 1 keeps an O(1) residual at omega = -1."""
        residual = convergence_residual(constant_family, -1.0, 20)
        assert residual >= 1.0

    def test_sampled_omegas_unimodular(self):
        """Test that sampled omegas lie on the circle and are reproducible."""
        omegas = sampled_omegas(16, seed=3)
        assert np.allclose(np.abs(omegas), 1.0)
        assert omegas == sampled_omegas(16, seed=3)
