"""Linear fractional maps of the Riemann sphere.

A :class:`MoebiusMap` stores the four coefficients of z -> (az + b)/(cz + d).
Maps are projective: scaling all four coefficients by a nonzero complex
number gives an equal map. The point at infinity is represented by the
explicit extended value :data:`INFINITY`.
"""

import cmath
import logging
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cphi.errors import InvalidMapError, NoFixedPointsError, NotHyperbolicError

logger = logging.getLogger(__name__)

INFINITY = complex(float("inf"), 0.0)
"""Extended value used for the point at infinity."""

ComplexLike = Union[complex, float, int]
PointArray = Union[complex, np.ndarray]

DEGENERACY_TOL = 1e-14
EQUALITY_TOL = 1e-10


def is_infinite(z: complex) -> bool:
    """Return True if ``z`` is the extended point at infinity."""
    return cmath.isinf(z)


class MapClass(str, Enum):
    """Conjugacy classes of non-degenerate Möbius maps."""

    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "loxodromic"


class MoebiusMap(BaseModel):
    """The linear fractional map z -> (az + b)/(cz + d)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: complex = Field(..., description="Coefficient of z in the numerator")
    b: complex = Field(..., description="Constant term of the numerator")
    c: complex = Field(..., description="Coefficient of z in the denominator")
    d: complex = Field(..., description="Constant term of the denominator")
    det: Optional[complex] = Field(
        None, description="Exact ad - bc, for coefficients that lose it to cancellation"
    )

    @field_validator("a", "b", "c", "d", "det", mode="before")
    @classmethod
    def coerce_complex(cls, v: Optional[ComplexLike]) -> Optional[complex]:
        """Accept ints, floats and numpy scalars as coefficients."""
        return None if v is None else complex(v)

    @model_validator(mode="after")
    def check_non_degenerate(self) -> "MoebiusMap":
        """Reject coefficients with ad - bc = 0.

        A supplied ``det`` replaces the rounded product, so only an exact
        zero (or a non-finite value) is degenerate.
        """
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if self.det is not None:
            degenerate = self.det == 0 or not cmath.isfinite(self.det)
        else:
            degenerate = abs(self.determinant) <= DEGENERACY_TOL * scale * scale
        if scale == 0 or degenerate:
            raise InvalidMapError(
                f"degenerate coefficients: ad - bc = {self.determinant} "
                f"for (a, b, c, d) = ({self.a}, {self.b}, {self.c}, {self.d})"
            )
        return self

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(a=1, b=0, c=0, d=1)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, det: Optional[complex] = None) -> "MoebiusMap":
        """Build a map from a 2x2 coefficient matrix."""
        m = np.asarray(matrix, dtype=complex)
        return cls(a=m[0, 0], b=m[0, 1], c=m[1, 0], d=m[1, 1], det=det)

    @property
    def determinant(self) -> complex:
        if self.det is not None:
            return self.det
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def normalized(self) -> "MoebiusMap":
        """Return the projectively equal map with ad - bc = 1."""
        s = cmath.sqrt(self.determinant)
        return MoebiusMap(
            a=self.a / s,
            b=self.b / s,
            c=self.c / s,
            d=self.d / s,
            det=None if self.det is None else 1.0,
        )

    def trace_squared(self) -> complex:
        """Trace squared of the normalized matrix, (a + d)^2 / (ad - bc)."""
        return (self.a + self.d) ** 2 / self.determinant

    def apply(self, z: PointArray) -> PointArray:
        """Evaluate the map at a point or an array of points.

        Scalars at the pole return :data:`INFINITY`, and :data:`INFINITY`
        maps to a/c. Arrays are evaluated elementwise with the same rules.
        """
        if np.ndim(z) == 0:
            return self._apply_scalar(complex(z))
        z = np.asarray(z, dtype=complex)
        out = np.empty_like(z)
        finite = np.isfinite(z)
        num = self.a * z[finite] + self.b
        den = self.c * z[finite] + self.d
        pole = den == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(pole, INFINITY, num / np.where(pole, 1.0, den))
        out[finite] = vals
        out[~finite] = INFINITY if self.c == 0 else self.a / self.c
        return out

    def _apply_scalar(self, z: complex) -> complex:
        if is_infinite(z):
            return INFINITY if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INFINITY
        return (self.a * z + self.b) / den

    def __call__(self, z: PointArray) -> PointArray:
        return self.apply(z)

    def derivative(self, z: PointArray) -> PointArray:
        """Derivative (ad - bc)/(cz + d)^2 at finite points."""
        return self.determinant / (self.c * np.asarray(z, dtype=complex) + self.d) ** 2

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Return self o other (apply ``other`` first)."""
        product = self.matrix @ other.matrix
        if self.det is None and other.det is None:
            return MoebiusMap.from_matrix(product)
        return MoebiusMap.from_matrix(product, det=self.determinant * other.determinant)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(a=self.d, b=-self.b, c=-self.c, d=self.a, det=self.det)

    def conjugate_by(self, psi: "MoebiusMap") -> "MoebiusMap":
        """Return psi o self o psi^-1."""
        return psi.compose(self).compose(psi.inverse())

    def is_identity(self, tol: float = EQUALITY_TOL) -> bool:
        return self.equivalent(MoebiusMap.identity(), tol)

    def equivalent(self, other: "MoebiusMap", tol: float = EQUALITY_TOL) -> bool:
        """Projective equality: compare both sign choices of the normalized matrices."""
        p = self.normalized().matrix
        q = other.normalized().matrix
        scale = max(1.0, float(np.abs(p).max()), float(np.abs(q).max()))
        return bool(
            np.abs(p - q).max() <= tol * scale or np.abs(p + q).max() <= tol * scale
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.equivalent(other)

    __hash__ = None  # projective equality has no stable hash

    def is_disc_automorphism(self, tol: float = 1e-10, samples: int = 64) -> bool:
        """Check that the map sends the unit circle onto itself and 0 into the disc."""
        theta = 2 * np.pi * np.arange(samples) / samples
        image = self.apply(np.exp(1j * theta))
        if not np.all(np.isfinite(image)):
            return False
        inside = self.apply(0j)
        return bool(np.abs(np.abs(image) - 1.0).max() <= tol and abs(inside) < 1.0)

    def half_plane(self) -> "MoebiusMap":
        """The conjugate kappa^-1 o self o kappa acting on the right half-plane."""
        return CAYLEY_INVERSE.compose(self).compose(CAYLEY)

    def __str__(self) -> str:
        return f"z -> ({self.a:.6g} z + {self.b:.6g}) / ({self.c:.6g} z + {self.d:.6g})"

    def __repr__(self) -> str:
        return f"MoebiusMap(a={self.a!r}, b={self.b!r}, c={self.c!r}, d={self.d!r})"


CAYLEY = MoebiusMap(a=1, b=-1, c=1, d=1)
"""kappa(w) = (w - 1)/(w + 1), right half-plane onto the unit disc."""

CAYLEY_INVERSE = MoebiusMap(a=1, b=1, c=-1, d=1)
"""kappa^-1(z) = (1 + z)/(1 - z)."""


def cayley(w: PointArray) -> PointArray:
    """The Cayley transform kappa(w) = (w - 1)/(w + 1); kappa(-1) is infinity."""
    return CAYLEY.apply(w)


def cayley_inverse(z: PointArray) -> PointArray:
    """The inverse Cayley transform (1 + z)/(1 - z); the image of 1 is infinity."""
    return CAYLEY_INVERSE.apply(z)


def apply(m: MoebiusMap, z: PointArray) -> PointArray:
    """Evaluate ``m`` at ``z`` (see :meth:`MoebiusMap.apply`)."""
    return m.apply(z)


def classify(m: MoebiusMap, band: float = 1e-9) -> MapClass:
    """Classify a map by the trace squared of its normalized matrix.

    With t = (a + d)^2/(ad - bc) and multiplier k, t = k + 1/k + 2. The map
    is hyperbolic iff k is real positive and not 1, i.e. t real and > 4.
    A band of width ``band`` around t = 4 is treated as parabolic.
    """
    if m.is_identity():
        return MapClass.IDENTITY
    t = m.trace_squared()
    if abs(t.imag) > band * max(1.0, abs(t)):
        return MapClass.LOXODROMIC
    t = t.real
    if abs(t - 4.0) <= band * 4.0:
        return MapClass.PARABOLIC
    if t > 4.0:
        return MapClass.HYPERBOLIC
    if t >= 0.0:
        return MapClass.ELLIPTIC
    return MapClass.LOXODROMIC


def _derivative_modulus_at(m: MoebiusMap, p: complex) -> float:
    """|m'(p)| at a fixed point, using the chart 1/z at infinity."""
    if is_infinite(p):
        return abs(m.d / m.a)
    return abs(m.determinant / (m.c * p + m.d) ** 2)


def fixed_points(m: MoebiusMap, ordered: bool = False) -> Tuple[complex, complex]:
    """Fixed points of ``m`` on the Riemann sphere.

    Roots of c z^2 + (d - a) z - b = 0, with :data:`INFINITY` when c = 0.
    Parabolic maps return the double point twice. With ``ordered`` the
    attractive point (derivative modulus < 1) comes first.

    Raises:
        NoFixedPointsError: If ``m`` is the identity
    """
    if m.is_identity():
        raise NoFixedPointsError("the identity map fixes every point")

    n = m.normalized()
    a, b, c, d = n.a, n.b, n.c, n.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= DEGENERACY_TOL * scale:
        if abs(d - a) <= DEGENERACY_TOL * scale:
            points = (INFINITY, INFINITY)
        else:
            points = (b / (d - a), INFINITY)
    else:
        root = cmath.sqrt((a - d) ** 2 + 4 * b * c)
        points = (((a - d) + root) / (2 * c), ((a - d) - root) / (2 * c))

    if ordered and _derivative_modulus_at(n, points[0]) > _derivative_modulus_at(n, points[1]):
        points = (points[1], points[0])
    return points


def multiplier(m: MoebiusMap) -> complex:
    """Multiplier of a map with two distinct fixed points.

    This is the derivative at the first fixed point (the dilation factor of
    the conjugated map w -> kw), normalized so that |k| >= 1.

    Raises:
        NotHyperbolicError: If ``m`` is parabolic or the identity
    """
    kind = classify(m)
    if kind in (MapClass.IDENTITY, MapClass.PARABOLIC):
        raise NotHyperbolicError(f"{kind.value} maps have no multiplier")
    n = m.normalized()
    p, _ = fixed_points(n)
    if is_infinite(p):
        k = n.d / n.a
    else:
        k = n.determinant / (n.c * p + n.d) ** 2
    if abs(k) < 1.0:
        k = 1.0 / k
    return complex(k)


def matrix_power(m: MoebiusMap, n: int) -> MoebiusMap:
    """The n-th iterate of ``m`` by repeated matrix multiplication."""
    base = m.normalized() if n >= 0 else m.inverse().normalized()
    return MoebiusMap.from_matrix(np.linalg.matrix_power(base.matrix, abs(n)))
