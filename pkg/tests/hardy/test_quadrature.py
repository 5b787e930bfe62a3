"""Tests for Poisson integrals and the dilation quadrature."""

import math

import numpy as np
import pytest

from cphi.errors import DomainError, NotInH2Error
from cphi.hardy import (
    DilationQuadrature,
    PowerForm,
    WeightSpec,
    constant,
    eigenfunction_fa,
    form_energy,
    form_inner,
    inner,
    monomial,
    poisson_integral,
    poisson_quadratic_form,
    polynomial,
    transported_weight,
    weight_function,
)
from cphi.moebius import HyperbolicAutomorphism, MoebiusMap, canonical_r, make_canonical


class TestPoissonQuadraticForm:
    """Test int |f|^2 P_a dm on truncations."""

    @pytest.mark.parametrize("r", [0.0, 0.3, 0.9])
    def test_z(self, r):
        """Test that |z|^2 = 1 on the circle integrates to 1."""
        assert poisson_quadratic_form(monomial(1, 8), r) == pytest.approx(1.0)

    @pytest.mark.parametrize("r", [0.0, 0.3, -0.6])
    def test_one_plus_z(self, r):
        """Test that int |1 + z|^2 P_r dm = 2 + 2r."""
        assert poisson_quadratic_form(polynomial([1, 1], 8), r) == pytest.approx(2 + 2 * r)

    def test_origin_is_coefficient_norm(self):
        """Test that a = 0 gives the plain coefficient norm."""
        f = weight_function(WeightSpec(gamma=0.5, delta=0.5), budget=256)
        assert poisson_quadratic_form(f, 0.0) == pytest.approx(f.norm_squared, rel=1e-13)

    def test_zero_function(self):
        """Test that the zero function integrates to 0."""
        assert poisson_quadratic_form(constant(0.0, 8), 0.5) == 0.0

    @pytest.mark.parametrize("a", [1.0, 1j, 1.5])
    def test_outside_disc(self, a):
        """Test that |a| >= 1 is rejected."""
        with pytest.raises(DomainError, match="must be < 1"):
            poisson_quadratic_form(monomial(1, 8), a)


class TestPoissonIntegral:
    """Test the exact-form Poisson integral."""

    def test_agrees_with_quadratic_form(self):
        """Test that form quadrature and the quadratic form agree on polynomials."""
        rng = np.random.default_rng(17)
        for _ in range(10):
            c = rng.standard_normal(11) + 1j * rng.standard_normal(11)
            f = polynomial(c, budget=16)
            a = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            exact = poisson_quadratic_form(f, a)
            assert poisson_integral(f, a) == pytest.approx(exact, rel=1e-10)

    def test_truncation_falls_back(self):
        """Test that functions without a form use the quadratic form."""
        f = polynomial([1, 1], 8).truncated()
        assert poisson_integral(f, 0.25) == pytest.approx(2.5)

    def test_outside_disc(self):
        """Test that |a| >= 1 is rejected."""
        with pytest.raises(DomainError):
            poisson_integral(monomial(1, 8), 1.0)

    def test_growth_too_fast(self):
        """Test that forms outside H^2 are rejected."""
        with pytest.raises(NotInH2Error, match="1/2"):
            form_energy(PowerForm(-0.5, 0.0))


class TestFormInner:
    """Test the exact-form inner product."""

    def test_polynomials(self):
        """Test agreement with the coefficient inner product."""
        rng = np.random.default_rng(5)
        f = polynomial(rng.standard_normal(6) + 1j * rng.standard_normal(6), budget=8)
        g = polynomial(rng.standard_normal(6) + 1j * rng.standard_normal(6), budget=8)
        assert form_inner(f.form, g.form) == pytest.approx(inner(f, g), rel=1e-10)

    def test_energy(self):
        """Test that <f, f> is the form energy."""
        f = eigenfunction_fa(0.3 + 0.4j, budget=64)
        assert form_inner(f.form, f.form) == pytest.approx(form_energy(f.form), rel=1e-12)

    def test_growth_too_fast(self):
        """Test that a product growing like dist^-1 is rejected."""
        with pytest.raises(NotInH2Error, match=">= 1"):
            form_inner(PowerForm(-0.5, 0.0), PowerForm(-0.5, 0.0))


class TestDilationQuadrature:
    """Test orbit norms in dilation coordinates."""

    @pytest.mark.parametrize("mu", [1.5, 2.0, 4.0])
    def test_polynomial_orbit_norms(self, mu):
        """Test that ||f o phi_n||^2 matches the Poisson quadratic form at r_n."""
        f = polynomial([1, -0.5, 0.25j, 2], budget=16)
        norms = DilationQuadrature(make_canonical(mu)).norms(f, window=5)
        for n in range(-5, 6):
            expected = poisson_quadratic_form(f, canonical_r(mu, n))
            assert norms[n + 5] ** 2 == pytest.approx(expected, rel=1e-10)

    def test_weight_at_origin_is_closed_form(self):
        """Test that the n = 0 member of weight(3/4, 3/4) has the closed-form norm."""
        f = weight_function(WeightSpec(gamma=0.75, delta=0.75), budget=64)
        norms = DilationQuadrature(make_canonical(2.0)).norms(f, window=2)
        assert norms[2] ** 2 == pytest.approx(form_energy(f.form), rel=1e-12)

    def test_transported_weight_matches_canonical(self):
        """Test that orbit norms are invariant under rotating the fixed points."""
        spec = WeightSpec(gamma=0.75, delta=0.75)
        base = DilationQuadrature(make_canonical(2.0)).norms(weight_function(spec, 64), 4)
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        moved = DilationQuadrature(phi).norms(transported_weight(spec, 1j, -1j, 64), 4)
        assert np.allclose(moved, base, rtol=1e-12)

    def test_profile_linear_in_coefficients(self):
        """Test that ||2 f o phi_0|| = 2 ||f o phi_0||."""
        f = polynomial([1, 1], budget=8)
        profile = DilationQuadrature(make_canonical(3.0)).profile(f, -1, 1)
        assert profile.norm({0: 2.0}) == pytest.approx(2 * profile.norm({0: 1.0}))
        assert profile.norm({}) == 0.0

    def test_profile_range_checked(self):
        """Test that indices outside the sampled range are rejected."""
        profile = DilationQuadrature(make_canonical(3.0)).profile(monomial(1, 8), 0, 2)
        with pytest.raises(DomainError, match="outside profile"):
            profile.norm({3: 1.0})

    def test_empty_range(self):
        """Test that n_max < n_min is rejected."""
        with pytest.raises(DomainError, match="empty orbit range"):
            DilationQuadrature(make_canonical(3.0)).profile(monomial(1, 8), 2, 1)

    def test_deep_orbit_of_z(self):
        """Test that ||z o phi_n|| = 1 at depth 100."""
        profile = DilationQuadrature(make_canonical(2.0)).profile(monomial(1, 8), 98, 100)
        assert np.allclose(profile.member_norms(), 1.0, rtol=1e-10)

    def test_kernel_peak_away_from_origin(self):
        """Test a conjugator whose P_b peaks at v = -8, beyond a margin of 4."""
        r = math.tanh(4.0)
        psi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0).conjugator.compose(
            MoebiusMap(a=1, b=r, c=r, d=1)
        )
        phi = HyperbolicAutomorphism(
            map=make_canonical(2.0).map.conjugate_by(psi),
            alpha=psi.apply(1.0),
            beta=psi.apply(-1.0),
            mu=2.0,
            conjugator=psi,
        )
        f = polynomial([1.0, 0.5], budget=8)
        profile = DilationQuadrature(phi, margin=4.0).profile(f, 0, 0)
        assert profile.norm({0: 1.0}) ** 2 == pytest.approx(1.25, rel=3e-2)


class TestExactEigenRelation:
    """Test f_a o phi = mu^a f_a on exact forms."""

    @pytest.mark.parametrize("a", [0.3, -0.3, 0.2 + 1.1j, -0.2 + 1.1j, 0.189])
    def test_relation(self, a):
        """Test that ||f_a o phi - mu^a f_a|| <= 1e-6 ||f_a||."""
        mu = 4.0
        f = eigenfunction_fa(a, budget=256)
        profile = DilationQuadrature(make_canonical(mu)).profile(f, 0, 1)
        residual = profile.norm({1: 1.0, 0: -(mu**a)})
        assert residual <= 1e-6 * profile.norm({0: 1.0})
