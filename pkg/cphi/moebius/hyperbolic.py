"""Hyperbolic automorphisms of the unit disc.

The canonical automorphism with multiplier mu > 1 is

    phi(z) = (r + z) / (1 + r z),    r = (mu - 1) / (mu + 1),

which fixes +1 (attractive) and -1 (repulsive). Every hyperbolic
automorphism with fixed points alpha, beta is psi o phi o psi^-1 for the
conjugator psi returned by :func:`conjugator`.
"""

import cmath
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cphi.errors import (
    DomainError,
    InvalidMultiplierError,
    NotHyperbolicError,
)
from cphi.moebius.maps import (
    CAYLEY,
    INFINITY,
    MapClass,
    MoebiusMap,
    cayley_inverse,
    classify,
    fixed_points,
    is_infinite,
    matrix_power,
    multiplier,
)

logger = logging.getLogger(__name__)

FIXED_POINT_TOL = 1e-9
CIRCLE_TOL = 1e-9
MULTIPLIER_TOL = 1e-9
BOUNDARY_SNAP = 1e-12


def canonical_r(mu: float, n: int = 1) -> float:
    """r_n = (mu^n - 1)/(mu^n + 1), computed as tanh(n log(mu) / 2)."""
    return math.tanh(n * math.log(mu) / 2.0)


def one_minus_r(mu: float, n: int = 1) -> float:
    """1 - r_n = 2/(mu^n + 1) without cancellation, for n >= 0."""
    x = mu ** (-n)
    return 2.0 * x / (1.0 + x)


class CanonicalParams(BaseModel):
    """Multiplier and translation parameter of a canonical automorphism."""

    model_config = ConfigDict(frozen=True)

    mu: float = Field(..., description="Multiplier, real > 1")
    r: float = Field(..., description="phi(0) = (mu - 1)/(mu + 1)")

    @field_validator("mu")
    @classmethod
    def validate_mu(cls, v: float) -> float:
        if not v > 1.0 or not math.isfinite(v):
            raise InvalidMultiplierError(f"multiplier must be real and > 1, got {v}")
        return float(v)

    @model_validator(mode="after")
    def check_r(self) -> "CanonicalParams":
        expected = (self.mu - 1.0) / (self.mu + 1.0)
        if abs(self.r - expected) > 1e-15 * max(1.0, self.mu):
            raise ValueError(f"r must equal (mu - 1)/(mu + 1) = {expected}, got {self.r}")
        return self

    @classmethod
    def from_mu(cls, mu: float) -> "CanonicalParams":
        if not mu > 1.0:
            raise InvalidMultiplierError(f"multiplier must be real and > 1, got {mu}")
        return cls(mu=mu, r=(mu - 1.0) / (mu + 1.0))

    @classmethod
    def from_r(cls, r: float) -> "CanonicalParams":
        if not 0.0 < r < 1.0:
            raise InvalidMultiplierError(f"r must lie in (0, 1), got {r}")
        mu = (1.0 + r) / (1.0 - r)
        return cls(mu=mu, r=(mu - 1.0) / (mu + 1.0))


class HyperbolicAutomorphism(BaseModel):
    """A validated hyperbolic automorphism of the unit disc.

    ``alpha`` is the attractive fixed point, ``beta`` the repulsive one and
    ``mu`` the multiplier. ``conjugator`` maps (+1, -1) to (alpha, beta), so
    that ``map`` equals conjugator o canonical(mu) o conjugator^-1.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    map: MoebiusMap = Field(..., description="The automorphism as a Möbius map")
    alpha: complex = Field(..., description="Attractive fixed point on the unit circle")
    beta: complex = Field(..., description="Repulsive fixed point on the unit circle")
    mu: float = Field(..., description="Multiplier, real > 1")
    canonical: bool = Field(False, description="True for (r + z)/(1 + rz)")
    conjugator: MoebiusMap = Field(
        default_factory=MoebiusMap.identity,
        description="Disc automorphism sending +1 to alpha and -1 to beta",
    )

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def coerce_point(cls, v) -> complex:
        return complex(v)

    @field_validator("mu")
    @classmethod
    def validate_mu(cls, v: float) -> float:
        if not v > 1.0:
            raise InvalidMultiplierError(f"multiplier must be real and > 1, got {v}")
        return float(v)

    @model_validator(mode="after")
    def check_invariants(self) -> "HyperbolicAutomorphism":
        for name, p in (("alpha", self.alpha), ("beta", self.beta)):
            if abs(abs(p) - 1.0) > FIXED_POINT_TOL:
                raise NotHyperbolicError(f"{name} = {p} is not on the unit circle")
            image = self.map.apply(p)
            if is_infinite(image) or abs(image - p) > FIXED_POINT_TOL:
                raise NotHyperbolicError(f"{name} = {p} is not fixed (image {image})")
        if abs(self.alpha - self.beta) <= FIXED_POINT_TOL:
            raise NotHyperbolicError("fixed points coincide")
        if not self.map.is_disc_automorphism(tol=CIRCLE_TOL):
            raise NotHyperbolicError("map does not preserve the unit circle")
        k = multiplier(self.map)
        if abs(k - self.mu) > MULTIPLIER_TOL * self.mu:
            raise NotHyperbolicError(f"multiplier of the map is {k}, not mu = {self.mu}")
        if abs(self.map.normalized().derivative(self.alpha)) >= 1.0 - FIXED_POINT_TOL:
            raise NotHyperbolicError(f"alpha = {self.alpha} is the repulsive fixed point")
        if self.canonical and not self.conjugator.is_identity():
            raise NotHyperbolicError("canonical maps have the identity conjugator")
        expected = _translation(canonical_r(self.mu)).conjugate_by(self.conjugator)
        if not self.map.equivalent(expected, tol=FIXED_POINT_TOL):
            raise NotHyperbolicError(
                "map differs from conjugator o canonical(mu) o conjugator^-1"
            )
        return self

    @property
    def params(self) -> CanonicalParams:
        return CanonicalParams.from_mu(self.mu)

    @property
    def log_mu(self) -> float:
        return math.log(self.mu)

    def apply(self, z):
        return self.map.apply(z)

    def __call__(self, z):
        return self.map.apply(z)

    def inverse(self) -> "HyperbolicAutomorphism":
        """phi^-1: same multiplier, attractive and repulsive points swapped."""
        return HyperbolicAutomorphism(
            map=self.map.inverse(),
            alpha=self.beta,
            beta=self.alpha,
            mu=self.mu,
            conjugator=self.conjugator.compose(NEGATION),
        )

    @classmethod
    def from_map(cls, m: MoebiusMap, band: float = 1e-9) -> "HyperbolicAutomorphism":
        """Validate an arbitrary Möbius map as a hyperbolic disc automorphism.

        Raises:
            NotHyperbolicError: If ``m`` is not hyperbolic, its derivative at a
                fixed point lies within ``band`` of 1, or it is not a disc
                automorphism
        """
        kind = classify(m, band=band)
        if kind != MapClass.HYPERBOLIC:
            raise NotHyperbolicError(f"map is {kind.value}, not hyperbolic")
        alpha, beta = fixed_points(m, ordered=True)
        n = m.normalized()
        for p in (alpha, beta):
            if is_infinite(p):
                raise NotHyperbolicError("fixed point at infinity: not a disc automorphism")
            if abs(abs(n.derivative(p)) - 1.0) <= band:
                raise NotHyperbolicError(f"derivative at {p} within {band} of 1")
        mu = multiplier(m)
        if abs(mu.imag) > band * abs(mu):
            raise NotHyperbolicError(f"multiplier {mu} is not real")
        return cls(
            map=m,
            alpha=alpha,
            beta=beta,
            mu=mu.real,
            conjugator=conjugator(alpha, beta),
        )

    @classmethod
    def from_fixed_points(cls, alpha: complex, beta: complex, mu: float) -> "HyperbolicAutomorphism":
        """psi o canonical(mu) o psi^-1 with psi = conjugator(alpha, beta)."""
        psi = conjugator(alpha, beta)
        base = make_canonical(mu)
        return cls(
            map=base.map.conjugate_by(psi),
            alpha=psi.apply(1.0),
            beta=psi.apply(-1.0),
            mu=mu,
            conjugator=psi,
        )

    def __str__(self) -> str:
        return f"hyperbolic(mu={self.mu:.6g}, alpha={self.alpha:.6g}, beta={self.beta:.6g})"


NEGATION = MoebiusMap(a=-1, b=0, c=0, d=1)


def make_canonical(mu: float) -> HyperbolicAutomorphism:
    """The canonical automorphism (r + z)/(1 + rz), r = (mu - 1)/(mu + 1).

    Raises:
        InvalidMultiplierError: If mu <= 1
    """
    if not mu > 1.0:
        raise InvalidMultiplierError(f"multiplier must be real and > 1, got {mu}")
    r = (mu - 1.0) / (mu + 1.0)
    return HyperbolicAutomorphism(
        map=MoebiusMap(a=1, b=r, c=r, d=1),
        alpha=1.0,
        beta=-1.0,
        mu=mu,
        canonical=True,
    )


def canonical_iterate(mu: float, n: int) -> MoebiusMap:
    """phi_n for the canonical automorphism: r_n for n >= 0, -phi_|n|(-z) for n < 0.

    With x = mu^-|n| the coefficients are (1 + x, ±(1 - x); ±(1 - x), 1 + x),
    whose determinant 4x is carried exactly. The matrix stays a valid map
    until x underflows, near mu^|n| = 1e308.

    Raises:
        InvalidMapError: If mu^-|n| underflows to zero
    """
    if n == 0:
        return MoebiusMap.identity()
    x = math.exp(-abs(n) * math.log(mu))
    off = 1.0 - x if n > 0 else x - 1.0
    return MoebiusMap(a=1.0 + x, b=off, c=off, d=1.0 + x, det=4.0 * x)


def iterate(phi: HyperbolicAutomorphism, n: int) -> MoebiusMap:
    """The n-th iterate phi_n, for any integer n (phi_0 is the identity).

    Canonical maps use the closed form r_n = (mu^n - 1)/(mu^n + 1); other
    maps are conjugated to canonical form, which is exact in mu^n. Deep
    iterates keep their exact determinant, so depths where 1 - r_n rounds
    to zero still give a valid map.
    """
    base = canonical_iterate(phi.mu, n)
    if phi.canonical:
        return base
    return base.conjugate_by(phi.conjugator)


def iterate_points(phi: HyperbolicAutomorphism, n: int, z):
    """Evaluate phi_n at points of the closed disc, for any depth n.

    Works in half-plane coordinates, where the canonical iterate is the
    dilation w -> mu^n w, so no coefficient matrix is formed and boundary
    points keep their exact image. Points within BOUNDARY_SNAP of the circle
    stay on it: their half-plane images are projected onto the imaginary
    axis before scaling.
    """
    psi = phi.conjugator
    inner = z if phi.canonical else psi.inverse().apply(z)
    w = cayley_inverse(inner)
    factor = math.exp(n * phi.log_mu)
    if np.ndim(w) == 0:
        if not is_infinite(w) and abs(abs(inner) - 1.0) <= BOUNDARY_SNAP:
            w = 1j * w.imag
        scaled = INFINITY if is_infinite(w) else w * factor
    else:
        w = np.array(w, dtype=complex)
        snap = np.isfinite(w) & (np.abs(np.abs(inner) - 1.0) <= BOUNDARY_SNAP)
        w[snap] = 1j * w[snap].imag
        scaled = np.full_like(w, INFINITY)
        finite = np.isfinite(w)
        scaled[finite] = w[finite] * factor
    out = CAYLEY.apply(scaled)
    return out if phi.canonical else psi.apply(out)


def iterate_by_composition(phi: HyperbolicAutomorphism, n: int) -> MoebiusMap:
    """phi_n by repeated matrix multiplication (test oracle for :func:`iterate`)."""
    return matrix_power(phi.map, n)


def _translation(r: float) -> MoebiusMap:
    """z -> (z + r)/(1 + rz), which sends 0 to r along the real diameter."""
    return MoebiusMap(a=1, b=r, c=r, d=1)


def _half_plane_conjugator(alpha: complex, beta: complex) -> MoebiusMap:
    """Disc automorphism sending +1 to alpha and -1 to beta, alpha and beta not 1.

    In the right half-plane, with alpha = kappa(i a') and beta = kappa(i b'),
    Psi(w) = i (w - i b')/(w - i a') sends i a' to infinity and i b' to 0 and
    preserves the imaginary axis; -Psi is used when a' > b' so that the right
    half-plane maps onto itself. kappa o Psi o kappa^-1 sends (alpha, beta) to
    (+1, -1); its inverse is returned.
    """
    a_prime = (cayley_inverse(alpha) / 1j).real
    b_prime = (cayley_inverse(beta) / 1j).real
    sign = 1.0 if b_prime > a_prime else -1.0
    big_psi = MoebiusMap(a=sign * 1j, b=sign * b_prime, c=1, d=-1j * a_prime)
    to_canonical = big_psi.conjugate_by(CAYLEY)
    return to_canonical.inverse()

_ROTATIONS = (1.0, 1j, -1.0, -1j)


def conjugator(alpha: complex, beta: complex) -> MoebiusMap:
    """Disc automorphism psi with psi(+1) = alpha and psi(-1) = beta.

    Built from the half-plane map Psi (see :func:`_half_plane_conjugator`),
    after a quarter-turn rotation when alpha or beta sits at +1 (where the
    Cayley preimage is infinite). The remaining freedom, a dilation along the
    diameter (-1, 1), is fixed by requiring psi(0) to be the point of the
    alpha-beta geodesic nearest the origin; conjugator(1, -1) is the identity.

    Raises:
        DomainError: If alpha = beta or either point is off the unit circle
    """
    alpha = complex(alpha)
    beta = complex(beta)
    for name, p in (("alpha", alpha), ("beta", beta)):
        if abs(abs(p) - 1.0) > FIXED_POINT_TOL:
            raise DomainError(f"{name} = {p} is not unimodular")
    if abs(alpha - beta) <= FIXED_POINT_TOL:
        raise DomainError("alpha and beta must be distinct")

    rho = next(
        q for q in _ROTATIONS
        if abs(q * alpha - 1.0) > 0.1 and abs(q * beta - 1.0) > 0.1
    )
    rotated = _half_plane_conjugator(rho * alpha, rho * beta)
    raw = MoebiusMap(a=1.0 / rho, b=0, c=0, d=1).compose(rotated)

    target = geodesic_nearest_point(alpha, beta)
    s = raw.inverse().apply(target)
    psi = raw.compose(_translation(s.real))
    logger.debug("conjugator(%s, %s) = %s", alpha, beta, psi)
    return psi


def geodesic_nearest_point(alpha: complex, beta: complex) -> complex:
    """Point of the hyperbolic geodesic from beta to alpha nearest the origin."""
    total = alpha + beta
    if abs(total) < 1e-15:
        return 0j
    half_angle = abs(cmath.phase(alpha / beta)) / 2.0
    distance = (1.0 - math.sin(half_angle)) / math.cos(half_angle)
    return distance * total / abs(total)


def conjugate(phi: HyperbolicAutomorphism, psi: MoebiusMap) -> HyperbolicAutomorphism:
    """Transport phi by a disc automorphism: psi o phi o psi^-1.

    The result has fixed points psi(alpha), psi(beta) and the same multiplier.

    Raises:
        DomainError: If psi is not a disc automorphism
    """
    if not psi.is_disc_automorphism():
        raise DomainError("transport map must be a disc automorphism")
    alpha = psi.apply(phi.alpha)
    beta = psi.apply(phi.beta)
    return HyperbolicAutomorphism(
        map=phi.map.conjugate_by(psi),
        alpha=alpha,
        beta=beta,
        mu=phi.mu,
        conjugator=conjugator(alpha, beta),
    )


def disc_automorphism(a: complex, rotation: float = 0.0) -> MoebiusMap:
    """z -> e^{i rotation} (z - a)/(1 - conj(a) z), for |a| < 1.

    Raises:
        DomainError: If |a| >= 1
    """
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")
    u = cmath.exp(1j * rotation)
    return MoebiusMap(a=u, b=-u * a, c=-np.conj(a), d=1)


def circle_defect(phi: HyperbolicAutomorphism, samples: int = 1024) -> float:
    """max | |phi(e^{i theta})| - 1 | over a uniform grid."""
    theta = 2 * np.pi * np.arange(samples) / samples
    return float(np.abs(np.abs(phi.apply(np.exp(1j * theta))) - 1.0).max())

