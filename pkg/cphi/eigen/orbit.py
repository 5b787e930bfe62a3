"""Orbit families: the functions f o phi_n and their norms.

The doubly cyclic subspace of f is spanned by the orbit {f o phi_n : n in Z}.
An :class:`OrbitFamily` holds a window of that orbit together with the
norms every construction in this package is built from.
"""

import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cphi.errors import DomainError, FitError
from cphi.hardy import (
    DEFAULT_OVERSAMPLE,
    ZERO_THRESHOLD,
    BoundaryGrid,
    DilationQuadrature,
    H2Function,
    OrbitProfile,
    orbit_member,
    poisson_quadratic_form,
)
from cphi.hardy.quadrature import DEFAULT_MARGIN, DEFAULT_STEPS
from cphi.moebius import HyperbolicAutomorphism, iterate_points

logger = logging.getLogger(__name__)

DEFAULT_SKIP = 10
MIN_FIT_POINTS = 10
MIN_SUMMATION_WINDOW = 20


class OrbitFamily(BaseModel):
    """A window [-M, M] of the orbit of f under phi.

    ``norms[n + M]`` is ||f o phi_n||: an exact-form norm from the dilation
    quadrature when f carries a form, the coefficient norm of the member
    otherwise. ``members`` extend one step past the window on each side, as
    the telescoping identities need f o phi_(M+1) and f o phi_(-M-1).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    f: H2Function = Field(..., description="The function whose orbit is sampled")
    phi: HyperbolicAutomorphism = Field(..., description="The automorphism")
    window: int = Field(..., ge=1, description="Window half-width M")
    norms: np.ndarray = Field(..., description="||f o phi_n|| for n = -M..M")
    coefficient_norms: Optional[np.ndarray] = Field(None, description="hardy.norm of each member")
    discrepancies: np.ndarray = Field(..., description="|norm^2 - Poisson quadratic form| per n")
    members: Dict[int, H2Function] = Field(default_factory=dict, description="f o phi_n as truncations")
    unresolved: List[int] = Field(default_factory=list, description="Members whose tail exceeds the budget")
    forward_rate: Optional[float] = Field(None, description="Fitted decay exponent as n -> +inf")
    backward_rate: Optional[float] = Field(None, description="Fitted decay exponent as n -> -inf")
    profile: Optional[OrbitProfile] = Field(None, exclude=True, description="Quadrature samples")

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.window, self.window + 1)

    def norm_at(self, n: int) -> float:
        if abs(n) > self.window:
            raise DomainError(f"orbit index {n} outside window [-{self.window}, {self.window}]")
        return float(self.norms[n + self.window])

    def member(self, n: int) -> H2Function:
        if n not in self.members:
            raise DomainError(f"member {n} was not computed")
        return self.members[n]

    def combination_norm(self, coefficients: Mapping[int, complex]) -> float:
        """||sum_n c_n f o phi_n||, exact when the family has a profile."""
        if self.profile is not None:
            return self.profile.norm(coefficients)
        total = np.zeros(self.f.budget, dtype=complex)
        for n, c in coefficients.items():
            total += complex(c) * self.member(n).coeffs
        return float(np.linalg.norm(total))

    def with_scale(self, c: complex) -> "OrbitFamily":
        """The family of c f (c != 0), without recomputing compositions."""
        c = complex(c)
        if c == 0:
            raise DomainError("scale must be nonzero")
        profile = None
        if self.profile is not None:
            p = self.profile
            profile = OrbitProfile(p.n_min, p.n_max, c * p.plus, c * p.minus, p.weight_plus, p.weight_minus)
        return self.model_copy(
            update={
                "f": self.f.scaled(c),
                "norms": abs(c) * self.norms,
                "coefficient_norms": None if self.coefficient_norms is None else abs(c) * self.coefficient_norms,
                "discrepancies": abs(c) ** 2 * self.discrepancies,
                "members": {n: m.scaled(c) for n, m in self.members.items()},
                "profile": profile,
            }
        )


def orbit_norms(
    f: H2Function,
    phi: HyperbolicAutomorphism,
    window: int,
    grid: Optional[BoundaryGrid] = None,
    oversample: int = DEFAULT_OVERSAMPLE,
    steps: int = DEFAULT_STEPS,
    margin: float = DEFAULT_MARGIN,
    with_members: bool = True,
    skip: int = DEFAULT_SKIP,
) -> OrbitFamily:
    """Compute the orbit family of f over |n| <= window.

    Members come from :func:`orbit_member`; norms of functions with an exact
    form come from the dilation quadrature. Each norm is cross-checked
    against the Poisson quadratic form of the truncation at phi_n(0); the
    absolute discrepancy is recorded (NaN once phi_n(0) rounds onto the
    circle). Decay exponents are fitted when the window allows it.

    Raises:
        DomainError: If window < 1
    """
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    with_members = with_members or f.form is None

    members: Dict[int, H2Function] = {}
    unresolved: List[int] = []
    if with_members:
        for n in range(-window - 1, window + 2):
            member = f if n == 0 else orbit_member(f, phi, n, grid, oversample)
            members[n] = member
            if not member.is_resolved():
                unresolved.append(n)
        if unresolved:
            logger.warning(
                "%d of %d orbit members are unresolved at budget %d",
                len(unresolved), len(members), f.budget,
            )

    indices = range(-window, window + 1)
    coefficient_norms = np.array([members[n].norm for n in indices]) if with_members else None
    profile = None
    if f.form is not None:
        profile = DilationQuadrature(phi, steps, margin).profile(f, -window - 1, window + 1)
        norms = profile.member_norms()[1:-1]
    else:
        norms = coefficient_norms

    discrepancies = np.full(norms.size, np.nan)
    for i, n in enumerate(indices):
        a = complex(iterate_points(phi, n, 0j))
        if abs(a) < 1.0:
            discrepancies[i] = abs(norms[i] ** 2 - poisson_quadratic_form(f, a))
    logger.debug(
        "orbit of %s: window %d, largest discrepancy %.3g",
        f.label or "f", window, np.nanmax(discrepancies) if np.any(np.isfinite(discrepancies)) else float("nan"),
    )

    family = OrbitFamily(
        f=f,
        phi=phi,
        window=window,
        norms=norms,
        coefficient_norms=coefficient_norms,
        discrepancies=discrepancies,
        members=members,
        unresolved=unresolved,
        profile=profile,
    )
    rates = {}
    for direction, name in (("+", "forward_rate"), ("-", "backward_rate")):
        try:
            rates[name] = decay_fit(family, direction, skip)
        except FitError as e:
            logger.debug("no %s decay fit: %s", name, e)
    return family.model_copy(update=rates) if rates else family


def decay_fit(
    family: OrbitFamily,
    direction: str = "+",
    skip: int = DEFAULT_SKIP,
    threshold: float = ZERO_THRESHOLD,
) -> float:
    """Least-squares decay exponent of ||f o phi_(+-n)|| ~ mu^(-n eps).

    Fits log-norms against n for n = skip..M and returns the slope divided
    by -log(mu). Points from the first norm below ``threshold`` times the
    largest norm onwards are dropped: the function has vanished there.

    Raises:
        DomainError: If direction is not "+" or "-"
        FitError: If fewer than 10 usable points remain
    """
    if direction not in ("+", "-"):
        raise DomainError(f"direction must be '+' or '-', got {direction!r}")
    sign = 1 if direction == "+" else -1
    n = np.arange(skip, family.window + 1)
    values = np.array([family.norm_at(sign * k) for k in n])
    floor = threshold * max(float(family.norms.max()), np.finfo(float).tiny)
    small = np.flatnonzero(values <= floor)
    if small.size:
        n = n[: small[0]]
        values = values[: small[0]]
    if n.size < MIN_FIT_POINTS:
        raise FitError(
            f"need at least {MIN_FIT_POINTS} usable points in direction {direction}, have {n.size}"
        )
    slope, _ = np.polyfit(n, np.log(values), 1)
    return float(-slope / family.phi.log_mu)


def tail_square_sum(family: OrbitFamily) -> Tuple[float, float]:
    """sum_{|n| <= M} ||f o phi_n||^2 and the part from M/2 < |n| <= M."""
    if family.window < MIN_SUMMATION_WINDOW:
        logger.warning("window %d is below %d; the Cauchy gap is not meaningful", family.window, MIN_SUMMATION_WINDOW)
    sq = family.norms**2
    outer = np.abs(family.indices) > family.window // 2
    return float(sq.sum()), float(sq[outer].sum())


class HypercyclicWitness(BaseModel):
    """Outcome of the sufficient hypercyclicity check on an orbit window."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    tol: float
    first_failing: Optional[int] = Field(None, description="Smallest |k| whose orbit does not decay")
    forward_min: float = Field(..., description="Smallest ||f o phi_n|| for n in [M/2, M]")
    backward_min: float = Field(..., description="Smallest ||f o phi_-n|| for n in [M/2, M]")


def hypercyclic_check(family: OrbitFamily, tol: float = 1e-3) -> HypercyclicWitness:
    """Check that C_phi^n and C_phi^-n tend to zero on the orbit span.

    For every member index k with |k| <= M/2, both ||f o phi_(k+n)|| and
    ||f o phi_(k-n)|| must drop below ``tol`` inside the window.
    """
    m = family.window
    if m < MIN_SUMMATION_WINDOW:
        logger.warning("window %d is below %d for the hypercyclicity check", m, MIN_SUMMATION_WINDOW)
    half = m // 2
    first_failing = None
    for k in sorted(range(-half, half + 1), key=lambda j: (abs(j), j)):
        forward = min(family.norm_at(j) for j in range(k, m + 1))
        backward = min(family.norm_at(j) for j in range(-m, k + 1))
        if forward >= tol or backward >= tol:
            first_failing = k
            break
    forward_min = float(min(family.norm_at(j) for j in range(half, m + 1)))
    backward_min = float(min(family.norm_at(-j) for j in range(half, m + 1)))
    return HypercyclicWitness(
        passed=first_failing is None,
        tol=tol,
        first_failing=first_failing,
        forward_min=forward_min,
        backward_min=backward_min,
    )


def backward_bounded(family: OrbitFamily, factor: float = 2.0) -> Tuple[bool, float, float]:
    """Whether sup_{n < 0} ||f o phi_n|| stays within ``factor`` x ||f o phi_-1||."""
    backward = family.norms[: family.window]
    reference = family.norm_at(-1)
    sup = float(backward.max())
    return sup <= factor * reference, sup, reference


def convergence_radii(family: OrbitFamily) -> Tuple[float, float]:
    """(mu^-eps, mu^delta) from the fitted exponents.

    Raises:
        FitError: If either exponent could not be fitted
    """
    if family.forward_rate is None or family.backward_rate is None:
        raise FitError("decay exponents are not available for this window")
    mu = family.phi.mu
    return mu ** (-family.forward_rate), mu**family.backward_rate
