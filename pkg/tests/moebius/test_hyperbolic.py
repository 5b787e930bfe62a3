"""Tests for hyperbolic automorphisms, iterates and conjugators."""

import cmath
import math

import numpy as np
import pytest

from cphi.errors import DomainError, InvalidMultiplierError, NotHyperbolicError
from cphi.moebius import (
    CanonicalParams,
    HyperbolicAutomorphism,
    MoebiusMap,
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
    multiplier,
    one_minus_r,
)


def random_unimodular_pair(rng):
    """Two well separated random points on the unit circle."""
    t = rng.uniform(0, 2 * np.pi)
    s = t + rng.uniform(0.3, 2 * np.pi - 0.3)
    return cmath.exp(1j * t), cmath.exp(1j * s)


class TestMakeCanonical:
    """Test the canonical automorphism."""

    def test_r_for_mu_3(self):
        """Test that mu = 3 gives r = 1/2."""
        phi = make_canonical(3.0)
        assert phi.map.b == pytest.approx(0.5)
        assert phi.params.r == pytest.approx(0.5)

    def test_r_for_mu_9(self):
        """Test that mu = 9 gives r = 0.8."""
        assert make_canonical(9.0).params.r == pytest.approx(0.8)

    @pytest.mark.parametrize("mu", [1.0, 0.5, -2.0])
    def test_reject_small_multiplier(self, mu):
        """Test that mu <= 1 is rejected."""
        with pytest.raises(InvalidMultiplierError, match="must be real and > 1"):
            make_canonical(mu)

    def test_fixed_points_and_multiplier(self):
        """Test that the canonical map fixes +1 and -1 with multiplier mu."""
        phi = make_canonical(2.5)
        assert phi.alpha == 1 and phi.beta == -1
        assert multiplier(phi.map) == pytest.approx(2.5, rel=1e-14)

    def test_params_round_trip(self):
        """Test CanonicalParams construction from mu and from r."""
        assert CanonicalParams.from_mu(3.0).r == pytest.approx(0.5)
        assert CanonicalParams.from_r(0.8).mu == pytest.approx(9.0)
        with pytest.raises(InvalidMultiplierError):
            CanonicalParams.from_r(1.0)

    def test_preserves_circle(self):
        """Test that boundary values stay unimodular."""
        for mu in (1.5, 2.0, 4.0, 10.0):
            assert circle_defect(make_canonical(mu)) <= 1e-12


class TestIterate:
    """Test closed-form iterates."""

    def test_second_iterate(self):
        """Test that phi_2 for mu = 3 has r_2 = 0.8."""
        phi = make_canonical(3.0)
        assert iterate(phi, 2).equivalent(MoebiusMap(a=1, b=0.8, c=0.8, d=1))

    def test_negative_iterate(self):
        """Test that phi_-1 sends 0 to -r."""
        phi = make_canonical(3.0)
        assert iterate(phi, -1).apply(0j) == pytest.approx(-0.5)

    def test_zeroth_iterate_is_identity(self):
        """Test that phi_0 is the identity."""
        assert iterate(make_canonical(2.0), 0).is_identity()

    def test_reflection(self):
        """Test phi_-n(z) = -phi_n(-z)."""
        phi = make_canonical(2.0)
        z = np.array([0.3 + 0.1j, -0.7j, 0.99])
        for n in range(1, 6):
            np.testing.assert_allclose(
                iterate(phi, -n).apply(z), -iterate(phi, n).apply(-z), atol=1e-15
            )

    def test_matches_repeated_composition(self):
        """Test closed form against matrix powers for random automorphisms."""
        rng = np.random.default_rng(11)
        for _ in range(5):
            alpha, beta = random_unimodular_pair(rng)
            phi = HyperbolicAutomorphism.from_fixed_points(alpha, beta, rng.uniform(1.2, 4.0))
            for n in range(-5, 6):
                assert iterate(phi, n).equivalent(iterate_by_composition(phi, n), tol=1e-9)

    def test_canonical_r_closed_form(self):
        """Test r_n = (mu^n - 1)/(mu^n + 1)."""
        for n in range(1, 10):
            assert canonical_r(2.0, n) == pytest.approx((2.0**n - 1) / (2.0**n + 1), rel=1e-15)

    @pytest.mark.parametrize("mu", [1.5, 2.0, 4.0])
    def test_one_minus_r_bracket(self, mu):
        """Test mu^-n < 1 - r_n <= 2 mu^-n for n = 1..60 in floating point."""
        for n in range(1, 61):
            gap = one_minus_r(mu, n)
            assert mu ** (-n) < gap <= 2 * mu ** (-n)
            assert gap == pytest.approx(2.0 / (mu**n + 1.0), rel=1e-14)


class TestConjugator:
    """Test construction of the conjugating automorphism."""

    def test_canonical_pair_gives_identity(self):
        """Test conjugator(1, -1) is the identity."""
        assert conjugator(1.0, -1.0).is_identity()

    def test_quarter_turn(self):
        """Test conjugator(i, -i) is the rotation z -> iz."""
        assert conjugator(1j, -1j).equivalent(MoebiusMap(a=1j, b=0, c=0, d=1))

    def test_random_pairs(self):
        """Test psi(+1) = alpha, psi(-1) = beta and psi(0) on the geodesic."""
        rng = np.random.default_rng(3)
        for _ in range(20):
            alpha, beta = random_unimodular_pair(rng)
            psi = conjugator(alpha, beta)
            assert psi.apply(1.0) == pytest.approx(alpha, abs=1e-12)
            assert psi.apply(-1.0) == pytest.approx(beta, abs=1e-12)
            assert psi.apply(0j) == pytest.approx(geodesic_nearest_point(alpha, beta), abs=1e-12)
            assert psi.is_disc_automorphism(tol=1e-12)

    def test_points_at_plus_one(self):
        """Test pairs that include +1 itself."""
        psi = conjugator(1j, 1.0)
        assert psi.apply(1.0) == pytest.approx(1j, abs=1e-12)
        assert psi.apply(-1.0) == pytest.approx(1.0, abs=1e-12)

    def test_geodesic_nearest_point(self):
        """Test the nearest point of the geodesic from 1 to i."""
        p = geodesic_nearest_point(1.0, 1j)
        assert abs(p) == pytest.approx(math.sqrt(2) - 1)
        assert cmath.phase(p) == pytest.approx(math.pi / 4)

    def test_reject_equal_points(self):
        """Test that alpha = beta is rejected."""
        with pytest.raises(DomainError, match="distinct"):
            conjugator(1j, 1j)

    def test_reject_interior_point(self):
        """Test that points off the circle are rejected."""
        with pytest.raises(DomainError, match="not unimodular"):
            conjugator(0.5, -1.0)


class TestHyperbolicAutomorphism:
    """Test validation, transport and inversion."""

    def test_from_fixed_points(self):
        """Test fixed points (i, -i) with mu = 2 keep the multiplier."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        assert phi.map.apply(1j) == pytest.approx(1j, abs=1e-12)
        assert phi.map.apply(-1j) == pytest.approx(-1j, abs=1e-12)
        assert abs(multiplier(phi.map) - 2.0) <= 1e-10
        assert not phi.canonical

    def test_attractive_point_attracts(self):
        """Test that forward iterates move interior points toward alpha."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        assert abs(iterate(phi, 40).apply(0.1 + 0.2j) - 1j) <= 1e-9

    def test_from_map(self):
        """Test validation of an arbitrary Möbius map."""
        target = HyperbolicAutomorphism.from_fixed_points(-1j, 1.0, 3.0)
        phi = HyperbolicAutomorphism.from_map(target.map)
        assert phi.alpha == pytest.approx(-1j, abs=1e-10)
        assert phi.beta == pytest.approx(1.0, abs=1e-10)
        assert phi.mu == pytest.approx(3.0, rel=1e-10)

    def test_from_map_rejects_parabolic(self):
        """Test that parabolic maps are rejected."""
        with pytest.raises(NotHyperbolicError, match="parabolic"):
            HyperbolicAutomorphism.from_map(MoebiusMap(a=1, b=1, c=0, d=1))

    def test_from_map_rejects_fixed_point_at_infinity(self):
        """Test that z -> 2z is not accepted as a disc automorphism."""
        with pytest.raises(NotHyperbolicError, match="infinity"):
            HyperbolicAutomorphism.from_map(MoebiusMap(a=2, b=0, c=0, d=1))

    def test_reject_wrong_fixed_point(self):
        """Test that a non-fixed alpha is rejected."""
        with pytest.raises(NotHyperbolicError, match="not fixed"):
            HyperbolicAutomorphism(
                map=make_canonical(2.0).map, alpha=1j, beta=-1.0, mu=2.0
            )

    def test_reject_wrong_multiplier(self):
        """Test that mu must be the multiplier of the map."""
        with pytest.raises(NotHyperbolicError, match="multiplier of the map"):
            HyperbolicAutomorphism(map=make_canonical(3.0).map, alpha=1.0, beta=-1.0, mu=5.0)

    def test_reject_swapped_fixed_points(self):
        """Test that alpha must be the attractive fixed point."""
        with pytest.raises(NotHyperbolicError, match="repulsive"):
            HyperbolicAutomorphism(map=make_canonical(3.0).map, alpha=-1.0, beta=1.0, mu=3.0)

    def test_reject_foreign_conjugator(self):
        """Test that the conjugator must carry the canonical map onto the map."""
        with pytest.raises(NotHyperbolicError, match="differs from conjugator"):
            HyperbolicAutomorphism(
                map=make_canonical(3.0).map,
                alpha=1.0,
                beta=-1.0,
                mu=3.0,
                conjugator=conjugator(1j, -1j),
            )

    def test_reject_canonical_flag_with_conjugator(self):
        """Test that a canonical map keeps the identity conjugator."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        with pytest.raises(NotHyperbolicError, match="identity conjugator"):
            HyperbolicAutomorphism(
                map=phi.map,
                alpha=phi.alpha,
                beta=phi.beta,
                mu=2.0,
                canonical=True,
                conjugator=phi.conjugator,
            )

    def test_constructors_satisfy_invariants(self):
        """Test that inverse, from_map and conjugate build consistent automorphisms."""
        phi = HyperbolicAutomorphism.from_fixed_points(cmath.exp(0.4j), cmath.exp(2.9j), 3.5)
        twice = phi.inverse().inverse()
        assert twice.map.equivalent(phi.map, tol=1e-10)
        assert twice.conjugator.apply(1.0) == pytest.approx(phi.alpha, abs=1e-12)
        rebuilt = HyperbolicAutomorphism.from_map(phi.inverse().map)
        assert rebuilt.alpha == pytest.approx(phi.beta, abs=1e-10)
        moved = conjugate(phi, disc_automorphism(-0.2 + 0.5j))
        assert moved.mu == 3.5

    def test_inverse(self):
        """Test that the inverse swaps fixed points and inverts iterates."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        inv = phi.inverse()
        assert inv.alpha == phi.beta and inv.beta == phi.alpha
        assert inv.map.compose(phi.map).is_identity()
        assert iterate(inv, 2).equivalent(iterate(phi, -2), tol=1e-10)

    def test_conjugate_preserves_multiplier(self):
        """Test transport by a disc automorphism."""
        psi = disc_automorphism(0.3 + 0.2j, rotation=0.7)
        phi = conjugate(make_canonical(2.0), psi)
        assert phi.alpha == pytest.approx(psi.apply(1.0))
        assert phi.mu == 2.0
        assert abs(multiplier(phi.map) - 2.0) <= 1e-10
        assert circle_defect(phi) <= 1e-12

    def test_conjugate_rejects_non_automorphism(self):
        """Test that transport needs a disc automorphism."""
        with pytest.raises(DomainError, match="disc automorphism"):
            conjugate(make_canonical(2.0), MoebiusMap(a=2, b=0, c=0, d=1))

    def test_disc_automorphism_rejects_boundary_point(self):
        """Test that |a| >= 1 is rejected."""
        with pytest.raises(DomainError):
            disc_automorphism(1.0)


class TestIteratePoints:
    """Test evaluation of iterates through the half-plane dilation."""

    def test_matches_matrix_iterate(self):
        """Test agreement with iterate for moderate depths."""
        phi = HyperbolicAutomorphism.from_fixed_points(1j, -1j, 2.0)
        z = np.exp(1j * np.linspace(0.1, 6.0, 17)) * 0.9
        for n in range(-5, 6):
            np.testing.assert_allclose(
                iterate_points(phi, n, z), iterate(phi, n).apply(z), atol=1e-12
            )

    def test_fixed_points_stay_fixed(self):
        """Test that +1 and -1 are fixed by canonical iterates."""
        phi = make_canonical(2.0)
        out = iterate_points(phi, 3, np.array([1.0 + 0j, -1.0 + 0j]))
        np.testing.assert_allclose(out, [1.0, -1.0], atol=1e-15)

    def test_deep_iterate_stays_on_circle(self):
        """Test that boundary points stay unimodular at depth 80."""
        phi = make_canonical(2.0)
        theta = 2 * np.pi * np.arange(64) / 64
        out = iterate_points(phi, 80, np.exp(1j * theta))
        assert np.all(np.isfinite(out))
        np.testing.assert_allclose(np.abs(out), 1.0, atol=1e-12)

    def test_rounded_boundary_point_near_repulsive_fixed_point(self):
        """Test that phi_40 o phi agrees with phi_41 at the node next to -1."""
        phi = make_canonical(2.0)
        node = np.exp(1j * np.pi)
        direct = iterate_points(phi, 41, node)
        two_step = iterate_points(phi, 40, phi.map.apply(node))
        assert abs(abs(two_step) - 1.0) < 1e-12
        assert two_step == pytest.approx(direct, abs=1e-9)

    @pytest.mark.parametrize("n", [27, 40, -40, 60])
    def test_deep_matrix_iterate_matches_dilation(self, n):
        """Test iterate at depths where 1 - r_n is below the rounding of 1."""
        z = np.array([0.3 + 0.4j, -0.5j, 0.9, 0.2 - 0.1j, 0.0])
        for phi in (make_canonical(4.0), HyperbolicAutomorphism.from_fixed_points(1j, -1j, 4.0)):
            np.testing.assert_allclose(
                iterate(phi, n).apply(z), iterate_points(phi, n, z), atol=1e-12
            )

    def test_deep_matrix_iterate_keeps_determinant(self):
        """Test that deep iterates carry the exact determinant and multiplier."""
        phi_n = iterate(make_canonical(4.0), 40)
        assert phi_n.determinant == pytest.approx(4.0 * 4.0**-40, rel=1e-12)
        assert multiplier(phi_n).real == pytest.approx(4.0**40, rel=1e-9)

    def test_scalar_input(self):
        """Test a scalar point."""
        phi = make_canonical(3.0)
        assert iterate_points(phi, 1, 0j) == pytest.approx(0.5)
