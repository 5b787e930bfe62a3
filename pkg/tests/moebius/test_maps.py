"""Unit tests for MoebiusMap and the classification helpers."""

import numpy as np
import pytest

from cphi.errors import InvalidMapError, NoFixedPointsError, NotHyperbolicError
from cphi.moebius import (
    CAYLEY,
    CAYLEY_INVERSE,
    INFINITY,
    MapClass,
    MoebiusMap,
    cayley,
    cayley_inverse,
    classify,
    fixed_points,
    is_infinite,
    matrix_power,
    multiplier,
)


@pytest.fixture
def canonical3():
    """The canonical automorphism with mu = 3 (r = 1/2)."""
    return MoebiusMap(a=1, b=0.5, c=0.5, d=1)


class TestMoebiusMapValidation:
    """Test construction and projective equality."""

    def test_reject_degenerate_coefficients(self):
        """Test that ad - bc = 0 is rejected."""
        with pytest.raises(InvalidMapError, match="degenerate"):
            MoebiusMap(a=1, b=2, c=2, d=4)

    def test_reject_all_zero(self):
        """Test that the zero matrix is rejected."""
        with pytest.raises(InvalidMapError):
            MoebiusMap(a=0, b=0, c=0, d=0)

    def test_coefficients_coerced_to_complex(self):
        """Test that integer coefficients become complex."""
        m = MoebiusMap(a=1, b=0, c=0, d=1)
        assert isinstance(m.a, complex)

    def test_projective_equality(self, canonical3):
        """Test that scaled coefficient matrices are equal maps."""
        scaled = MoebiusMap(a=-2j, b=-1j, c=-1j, d=-2j)
        assert scaled == canonical3
        assert scaled.equivalent(canonical3)

    def test_normalized_has_unit_determinant(self, canonical3):
        """Test that normalization gives ad - bc = 1."""
        assert canonical3.normalized().determinant == pytest.approx(1.0)

    def test_from_matrix(self):
        """Test building a map from a 2x2 matrix."""
        m = MoebiusMap.from_matrix(np.array([[2, 1], [0, 1]]))
        assert m.apply(1.0) == pytest.approx(3.0)


class TestApply:
    """Test evaluation on the extended plane."""

    def test_pole_maps_to_infinity(self):
        """Test that the pole of 1/z is sent to infinity."""
        inversion = MoebiusMap(a=0, b=1, c=1, d=0)
        assert is_infinite(inversion.apply(0j))

    def test_infinity_maps_to_a_over_c(self):
        """Test that infinity is sent to a/c."""
        m = MoebiusMap(a=2, b=1, c=4, d=1)
        assert m.apply(INFINITY) == pytest.approx(0.5)

    def test_affine_map_fixes_infinity(self):
        """Test that maps with c = 0 keep infinity."""
        assert is_infinite(MoebiusMap(a=2, b=1, c=0, d=1).apply(INFINITY))

    def test_array_matches_scalar(self, canonical3):
        """Test elementwise evaluation of arrays."""
        z = np.array([0.1 + 0.2j, -0.5, 1j])
        expected = [canonical3.apply(complex(p)) for p in z]
        np.testing.assert_allclose(canonical3.apply(z), expected, rtol=1e-15)

    def test_array_with_pole(self):
        """Test that array evaluation handles poles and infinity."""
        inversion = MoebiusMap(a=0, b=1, c=1, d=0)
        out = inversion.apply(np.array([0j, 2.0, INFINITY]))
        assert is_infinite(out[0])
        assert out[1] == pytest.approx(0.5)
        assert out[2] == 0

    def test_compose_applies_right_first(self):
        """Test that self.compose(other) is self o other."""
        f = MoebiusMap(a=2, b=0, c=0, d=1)
        g = MoebiusMap(a=1, b=1, c=0, d=1)
        assert f.compose(g).apply(1.0) == pytest.approx(4.0)
        assert g.compose(f).apply(1.0) == pytest.approx(3.0)

    def test_inverse(self, canonical3):
        """Test that m o m^-1 is the identity."""
        assert canonical3.compose(canonical3.inverse()).is_identity()

    def test_conjugate_by(self, canonical3):
        """Test psi o m o psi^-1 moves fixed points by psi."""
        rotation = MoebiusMap(a=1j, b=0, c=0, d=1)
        conj = canonical3.conjugate_by(rotation)
        assert conj.apply(1j) == pytest.approx(1j)
        assert conj.apply(-1j) == pytest.approx(-1j)


class TestCayley:
    """Test the Cayley transform between half-plane and disc."""

    def test_imaginary_axis_to_circle(self):
        """Test that the imaginary axis maps onto the unit circle."""
        t = np.linspace(-50, 50, 101)
        np.testing.assert_allclose(np.abs(cayley(1j * t)), 1.0, atol=1e-15)

    def test_special_points(self):
        """Test kappa(1) = 0, kappa(0) = -1 and kappa(infinity) = 1."""
        assert cayley(1.0) == 0
        assert cayley(0j) == pytest.approx(-1.0)
        assert cayley(INFINITY) == pytest.approx(1.0)

    def test_inverse_pair(self):
        """Test that the two transforms are inverse maps."""
        assert CAYLEY.compose(CAYLEY_INVERSE).is_identity()
        z = 0.3 - 0.4j
        assert cayley(cayley_inverse(z)) == pytest.approx(z)

    def test_half_plane_conjugate_of_canonical_is_dilation(self, canonical3):
        """Test that the canonical map acts as w -> mu w on the half-plane."""
        h = canonical3.half_plane()
        assert h.equivalent(MoebiusMap(a=3, b=0, c=0, d=1))


class TestClassify:
    """Test trace-squared classification."""

    def test_identity(self):
        """Test the identity class."""
        assert classify(MoebiusMap.identity()) == MapClass.IDENTITY

    def test_hyperbolic(self, canonical3):
        """Test that canonical automorphisms are hyperbolic."""
        assert classify(canonical3) == MapClass.HYPERBOLIC
        assert classify(MoebiusMap(a=2, b=0, c=0, d=1)) == MapClass.HYPERBOLIC

    def test_elliptic(self):
        """Test that rotations are elliptic."""
        assert classify(MoebiusMap(a=1j, b=0, c=0, d=1)) == MapClass.ELLIPTIC

    def test_parabolic(self):
        """Test that translations are parabolic."""
        assert classify(MoebiusMap(a=1, b=1, c=0, d=1)) == MapClass.PARABOLIC

    def test_parabolic_band(self):
        """Test that traces within the band of 4 count as parabolic."""
        k = 1.01
        near = MoebiusMap(a=k, b=0, c=0, d=1)
        assert classify(near, band=1e-9) == MapClass.HYPERBOLIC
        assert classify(near, band=1e-3) == MapClass.PARABOLIC

    def test_loxodromic(self):
        """Test that complex multipliers are loxodromic."""
        assert classify(MoebiusMap(a=2j, b=0, c=0, d=1)) == MapClass.LOXODROMIC


class TestFixedPoints:
    """Test fixed points and multipliers."""

    def test_identity_has_no_fixed_points(self):
        """Test that the identity raises."""
        with pytest.raises(NoFixedPointsError):
            fixed_points(MoebiusMap.identity())

    def test_canonical_fixed_points(self, canonical3):
        """Test that the canonical map fixes +1 (attractive) and -1."""
        alpha, beta = fixed_points(canonical3, ordered=True)
        assert alpha == pytest.approx(1.0)
        assert beta == pytest.approx(-1.0)

    def test_affine_fixed_point_at_infinity(self):
        """Test that z -> 2z has attractive point infinity and repulsive 0."""
        alpha, beta = fixed_points(MoebiusMap(a=2, b=0, c=0, d=1), ordered=True)
        assert is_infinite(alpha)
        assert beta == 0

    def test_parabolic_double_point(self):
        """Test that a parabolic map returns its point twice."""
        p, q = fixed_points(MoebiusMap(a=1, b=1, c=0, d=1))
        assert is_infinite(p) and is_infinite(q)

    def test_fixed_points_are_fixed(self):
        """Test m(p) = p for random hyperbolic maps."""
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = MoebiusMap(a=rng.normal() + 3, b=rng.normal(), c=rng.normal(), d=rng.normal())
            if classify(m) in (MapClass.IDENTITY, MapClass.PARABOLIC):
                continue
            for p in fixed_points(m):
                if not is_infinite(p):
                    assert abs(m.apply(p) - p) <= 1e-9 * max(1.0, abs(p))

    def test_multiplier_of_canonical(self, canonical3):
        """Test that the canonical map with r = 1/2 has multiplier 3."""
        assert multiplier(canonical3) == pytest.approx(3.0, rel=1e-14)

    def test_multiplier_is_projective(self, canonical3):
        """Test that scaling coefficients leaves the multiplier alone."""
        scaled = MoebiusMap(a=5j, b=2.5j, c=2.5j, d=5j)
        assert multiplier(scaled) == pytest.approx(3.0, rel=1e-14)

    def test_multiplier_rejects_parabolic(self):
        """Test that parabolic maps have no multiplier."""
        with pytest.raises(NotHyperbolicError, match="parabolic"):
            multiplier(MoebiusMap(a=1, b=1, c=0, d=1))

    def test_matrix_power(self, canonical3):
        """Test that the square of the mu = 3 map has r = 0.8."""
        assert matrix_power(canonical3, 2).equivalent(MoebiusMap(a=1, b=0.8, c=0.8, d=1))
        assert matrix_power(canonical3, 0).is_identity()
        assert matrix_power(canonical3, -1).equivalent(canonical3.inverse())

    def test_multiplier_of_rotated_dilation(self):
        """Test the multiplier is a conjugacy invariant."""
        psi = MoebiusMap(a=1, b=2j, c=0.5, d=3)
        m = MoebiusMap(a=5, b=0, c=0, d=1).conjugate_by(psi)
        assert multiplier(m) == pytest.approx(5.0, rel=1e-12)
