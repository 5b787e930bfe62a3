"""Tests for the hypothesis-driven scans."""

import math

import pytest

from cphi.eigen import hp_reduction_scan, one_sided_hp_scan, one_sided_route, reversed_scan
from cphi.errors import DomainError
from cphi.hardy import WeightSpec, polynomial, weight_function


class TestOneSidedRoute:
    """Test the bounded-backward, decaying-forward route."""

    def test_weight_at_attractive_point(self, phi2):
        """Test that weight(3/4, 0) satisfies the one-sided hypotheses."""
        f = weight_function(WeightSpec(gamma=0.75, delta=0.0), budget=256)
        report = one_sided_route(f, phi2)
        assert report.holds
        assert report.forward_rate == pytest.approx(0.5, abs=0.05)
        assert report.annulus is not None
        assert report.annulus.outer_radius < 1.0

    def test_weight_vanishing_at_both_points(self, phi2):
        """Test weight(3/4, 1/2): finite maximal value at beta, bounded backward orbit."""
        f = weight_function(WeightSpec(gamma=0.75, delta=0.5), budget=256)
        report = one_sided_route(f, phi2)
        assert report.holds
        assert math.isfinite(report.hl_at_repulsive)
        assert 0.0 <= report.hl_at_repulsive <= 1.1 * 2.0**2.5
        assert report.backward_bounded
        assert report.backward_sup <= 2.0 * report.backward_reference
        assert report.forward_rate == pytest.approx(0.5, abs=0.05)

    def test_constant_fails(self, phi2):
        """Test that a constant has no forward decay."""
        f = polynomial([1.0], budget=64)
        report = one_sided_route(f, phi2, window=30)
        assert not report.holds
        assert report.annulus is None


class TestScans:
    """Test the annulus scans built from hypotheses."""

    def test_reversed(self, phi2):
        """Test weight(1/2, 3/4) on A(1, mu^1/4)."""
        result = reversed_scan(0.25, phi2, budget=256, window=60, radial=4, angular=8)
        assert result.annulus.inner_radius > 1.0
        assert result.summary.total == 32
        assert result.summary.pass_fraction >= 0.99

    def test_reversed_epsilon_range(self, phi2):
        """Test that epsilon must lie in (0, 1]."""
        with pytest.raises(DomainError):
            reversed_scan(0.0, phi2)

    def test_hp_reduction(self, phi2):
        """Test that p = 4 keeps deltas below 1/4 and passes on each annulus."""
        g = polynomial([1.0, 0.5], budget=256)
        results = hp_reduction_scan(g, 4.0, phi2, deltas=(0.1, 0.2, 0.3), radial=4, angular=8)
        assert set(results) == {0.1, 0.2}
        for result in results.values():
            assert result.summary.pass_fraction >= 0.99

    def test_hp_reduction_needs_p_above_two(self, phi2):
        """Test that p <= 2 is rejected."""
        with pytest.raises(DomainError, match="p must exceed 2"):
            hp_reduction_scan(polynomial([1.0], budget=64), 2.0, phi2)

    @pytest.mark.slow
    def test_one_sided_hp(self, phi2):
        """Test (1 - z)^(1/2) on A(mu^-1/4, 1) with a long backward window."""
        result = one_sided_hp_scan(4.0, phi2, budget=256, window=200, radial=4, angular=8)
        assert result.annulus.outer_radius < 1.0
        assert result.summary.pass_fraction >= 0.99

    def test_one_sided_hp_exponent_range(self, phi2):
        """Test that 2/p above 3/2 is rejected."""
        with pytest.raises(DomainError, match="4/3"):
            one_sided_hp_scan(1.0, phi2)
