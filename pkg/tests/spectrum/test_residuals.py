"""Tests for the eigenvalue residual field."""

import cmath
import math

import pytest

from cphi.eigen import Annulus
from cphi.errors import BudgetError, DomainError, NotInH2Error
from cphi.hardy import DilationQuadrature, PowerForm
from cphi.moebius import HyperbolicAutomorphism, make_canonical
from cphi.spectrum import (
    SpectrumStatus,
    annulus_residual_map,
    classify_lambda,
    eigen_exponent,
    eigen_residual,
    gram_independence,
    residual_frame,
)


@pytest.fixture
def phi4():
    return make_canonical(4.0)


class TestEigenResidual:
    """Test C_phi f_a = lambda f_a through the exact form."""

    def test_constant(self, phi4):
        """Test that lambda = 1 gives the constant and residual 0."""
        point = eigen_residual(phi4, 1.0, budget=64)
        assert point.status == SpectrumStatus.INSIDE
        assert point.exponent == 0
        assert point.residual == pytest.approx(0.0, abs=1e-14)

    def test_real_lambda(self, phi4):
        """Test mu = 4, lambda = 1.3 at N = 4096."""
        point = eigen_residual(phi4, 1.3)
        assert point.exponent.real == pytest.approx(math.log(1.3) / math.log(4.0))
        assert point.residual <= 1e-6

    def test_outside(self, phi4):
        """Test that lambda = 2.5 > sqrt(mu) is marked outside without a residual."""
        point = eigen_residual(phi4, 2.5, budget=64)
        assert point.status == SpectrumStatus.OUTSIDE
        assert math.isnan(point.residual)
        assert point.distance == pytest.approx(math.log(2.5) / math.log(4.0) - 0.5)

    @pytest.mark.parametrize("lam", [2.0, 0.5, 2j, -0.5j])
    def test_boundary(self, phi4, lam):
        """Test that |lambda| = mu^(+-1/2) is marked boundary."""
        assert eigen_residual(phi4, lam, budget=64).status == SpectrumStatus.BOUNDARY

    def test_zero(self, phi4):
        """Test that lambda = 0 is rejected."""
        with pytest.raises(DomainError):
            eigen_residual(phi4, 0.0)

    def test_conjugated_automorphism(self):
        """Test a small residual for fixed points (i, -i)."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 4.0)
        lam = 1.2 * cmath.exp(0.7j)
        assert eigen_residual(phi, lam, budget=64).residual <= 1e-6

    def test_transported_eigenfunction(self):
        """Test that the relation is checked for phi, with f_a moved to its fixed points."""
        phi = HyperbolicAutomorphism.from_fixed_points(cmath.exp(0.3j), cmath.exp(2.5j), 4.0)
        lam = 0.8 * cmath.exp(-1.1j)
        assert eigen_residual(phi, lam, budget=64).residual <= 1e-6
        a = eigen_exponent(lam, 4.0)
        untransported = DilationQuadrature(phi).profile(PowerForm(-a, a), 0, 1)
        assert untransported.norm({1: 1.0, 0: -lam}) > 1e-2 * untransported.norm({0: 1.0})

    def test_large_budget_builds_no_series(self, phi4):
        """Test that a budget of 2^22 costs no more than a small one."""
        point = eigen_residual(phi4, 1.3, budget=2**22)
        assert point.residual <= 1e-6

    def test_budget_power_of_two(self, phi4):
        """Test that the budget is still validated."""
        with pytest.raises(BudgetError):
            eigen_residual(phi4, 1.3, budget=100)


class TestResidualMap:
    """Test the residual field over a grid."""

    def test_interior_grid(self, phi4):
        """Test residual <= 1e-5 on a 32 x 32 grid inside the inset annulus."""
        annulus = Annulus.from_exponents(4.0, 0.5, 0.5).inset(0.05)
        points = annulus_residual_map(phi4, annulus.grid(32, 32), budget=64)
        assert len(points) == 1024
        assert all(p.status == SpectrumStatus.INSIDE for p in points)
        assert max(p.residual for p in points) <= 1e-5

    def test_mixed_statuses(self, phi4):
        """Test that a wide grid reports all three statuses in the CSV table."""
        lambdas = [1.0, 2.0, 3.0, 0.25, 1.3j]
        frame = residual_frame(annulus_residual_map(phi4, lambdas, budget=64))
        assert list(frame.columns) == ["lambda_re", "lambda_im", "residual", "status"]
        assert list(frame["status"]) == ["inside", "boundary", "outside", "outside", "inside"]
        assert frame["residual"].isna().sum() == 3

    def test_exponent_branch(self):
        """Test that Im a lies in (-pi/log mu, pi/log mu]."""
        a = eigen_exponent(-1.0, 4.0)
        assert a.imag == pytest.approx(math.pi / math.log(4.0))
        assert classify_lambda(-1.0, 4.0) == SpectrumStatus.INSIDE


class TestGramIndependence:
    """Test that f_a and f_(a + 2 pi i / log mu) are independent."""

    @staticmethod
    def _closed_form(a: complex, mu: float) -> float:
        sigma, t = a.real, a.imag
        y = 2 * math.pi / math.log(mu)
        c = math.cosh(math.pi * (2 * t + y))
        ratio = (c + 1) / (c + math.cosh(math.pi * y))
        cos2 = math.cos(math.pi * sigma) ** 2
        return ratio * cos2 / (cos2 + math.sinh(math.pi * y / 2) ** 2)

    @pytest.mark.parametrize("a", [0j, 0.2 + 0.3j, -0.35 - 0.1j])
    def test_against_closed_form(self, a):
        """Test 1 - det against the closed-form |rho|^2 for mu = 10."""
        det = gram_independence(make_canonical(10.0), a, budget=64)
        assert 1 - det == pytest.approx(self._closed_form(a, 10.0), rel=1e-6)

    def test_bounded_away_from_zero(self, phi4):
        """Test det >= 0.01 over a grid of exponents."""
        for sigma in (-0.4, -0.2, 0.0, 0.2, 0.4):
            for t in (-1.0, 0.0, 1.0):
                assert gram_independence(phi4, complex(sigma, t), budget=64) >= 0.01

    def test_outside_strip(self, phi4):
        """Test that Re a = 1/2 has no eigenfunction in H^2."""
        with pytest.raises(NotInH2Error):
            gram_independence(phi4, 0.5, budget=64)
