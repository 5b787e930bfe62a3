"""The Poisson kernel and the two estimates built on it.

Pointwise, with a = rho e^{i0} and zeta = e^{i theta}:

    P_a(zeta) <= 4 (1 - rho) / ((1 - rho)^2 + (theta/pi)^2)

Along the orbit of 0 under the canonical automorphism (a = r_n):

    sum_{n >= 0} P_{r_n}(e^{i theta}) <= 16 mu/(mu - 1) * pi/|theta|
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from cphi.errors import DomainError
from cphi.moebius import canonical_r, one_minus_r

logger = logging.getLogger(__name__)

SUM_TAIL_TOL = 1e-12


class KernelPoint(BaseModel):
    """A point rho e^{i theta} in polar coordinates, rho in [0, 1)."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., ge=0.0, lt=1.0, description="Radius")
    theta: float = Field(..., ge=-math.pi, le=math.pi, description="Angle")


class SumBoundReport(BaseModel):
    """A partial orbit sum of Poisson kernels next to its bound."""

    model_config = ConfigDict(frozen=True)

    mu: float
    theta: float
    partial_sum: float
    bound: float
    terms_used: int

    @property
    def holds(self) -> bool:
        return self.partial_sum <= self.bound


class GridCheck(BaseModel):
    """Outcome of checking an inequality over a parameter grid.

    ``violations`` holds one row per grid point where the inequality fails;
    ``worst`` is the largest ratio of left to right side seen anywhere.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    checked: int
    worst: float
    violations: pd.DataFrame

    @property
    def passed(self) -> bool:
        return self.violations.empty

    def summary(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "violations": int(len(self.violations)),
            "worst_ratio": self.worst,
        }


def kernel(a: complex, zeta):
    """P_a(zeta) = (1 - |a|^2)/|zeta - a|^2.

    Raises:
        DomainError: If |a| >= 1
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")
    return (1.0 - abs(a) ** 2) / np.abs(np.asarray(zeta) - a) ** 2


def _polar_kernel(rho, theta):
    """P_rho(e^{i theta}) written without cancellation near rho = 1, theta = 0."""
    gap = 1.0 - rho
    return gap * (1.0 + rho) / (gap**2 + 4.0 * rho * np.sin(theta / 2.0) ** 2)


def kernel_bound(p: KernelPoint) -> float:
    """4(1 - rho)/((1 - rho)^2 + (theta/pi)^2)."""
    return _bound(p.rho, p.theta)


def _bound(rho, theta):
    gap = 1.0 - rho
    return 4.0 * gap / (gap**2 + (theta / math.pi) ** 2)


def terms_needed(mu: float, theta: float, tol: float = SUM_TAIL_TOL) -> int:
    """Smallest N with sum_{n > N} P_{r_n}(e^{i theta}) below tol.

    Uses P_r(e^{i theta}) <= 2(1 - r)/(4 r sin^2(theta/2)) and 1 - r_n < 2 mu^-n.
    """
    s2 = math.sin(theta / 2.0) ** 2
    r1 = canonical_r(mu)
    scale = 1.0 / (tol * (mu - 1.0) * r1 * s2)
    return max(1, math.ceil(math.log(scale) / math.log(mu)))


def orbit_kernel_sum(mu: float, theta: float, n_terms: Optional[int] = None) -> SumBoundReport:
    """sum_{n=0}^{n_terms} P_{r_n}(e^{i theta}) and its bound 16 mu/(mu - 1) pi/|theta|.

    Without ``n_terms`` the sum runs until the geometric tail is below 1e-12.

    Raises:
        DomainError: If theta = 0 (the sum diverges at the attractive point)
            or |theta| > pi
    """
    if theta == 0.0:
        raise DomainError("theta = 0 is the attractive fixed point, where the sum diverges")
    if abs(theta) > math.pi:
        raise DomainError(f"theta must lie in [-pi, pi], got {theta}")
    if not mu > 1.0:
        raise DomainError(f"multiplier must be > 1, got {mu}")
    if n_terms is None:
        n_terms = terms_needed(mu, theta)
    n = np.arange(n_terms + 1)
    gap = np.array([one_minus_r(mu, int(k)) for k in n])
    rho = 1.0 - gap
    terms = gap * (1.0 + rho) / (gap**2 + 4.0 * rho * math.sin(theta / 2.0) ** 2)
    bound = 16.0 * mu / (mu - 1.0) * math.pi / abs(theta)
    report = SumBoundReport(
        mu=mu,
        theta=theta,
        partial_sum=float(np.sum(terms)),
        bound=bound,
        terms_used=int(n.size),
    )
    logger.debug("orbit kernel sum mu=%g theta=%g: %.6g <= %.6g", mu, theta, report.partial_sum, bound)
    return report


def kernel_grid_check(rho_count: int = 1024, theta_count: int = 1024, rho_max: float = 0.999) -> GridCheck:
    """Check the pointwise kernel bound on a rho x theta grid."""
    rho = np.linspace(0.0, rho_max, rho_count)[:, None]
    theta = np.linspace(-math.pi, math.pi, theta_count)[None, :]
    values = _polar_kernel(rho, theta)
    bounds = _bound(rho, theta)
    ratio = values / bounds
    bad = np.argwhere(values > bounds)
    violations = pd.DataFrame(
        {
            "rho": rho[bad[:, 0], 0],
            "theta": theta[0, bad[:, 1]],
            "kernel": values[bad[:, 0], bad[:, 1]],
            "bound": bounds[bad[:, 0], bad[:, 1]],
        }
    )
    check = GridCheck(name="kernel_bound", checked=int(ratio.size), worst=float(ratio.max()), violations=violations)
    logger.info("kernel bound: %d points, %d violations, worst ratio %.4f", check.checked, len(violations), check.worst)
    return check


def orbit_sum_grid_check(
    mus: Sequence[float] = (1.5, 2.0, 4.0, 10.0),
    theta_count: int = 512,
    n_terms: Optional[int] = None,
    exclusion: float = 1e-3,
) -> GridCheck:
    """Check the orbit-sum bound over mus and a theta grid with |theta| >= exclusion."""
    theta = np.linspace(-math.pi, math.pi, theta_count)
    theta = theta[np.abs(theta) >= exclusion]
    rows = []
    worst = 0.0
    for mu in mus:
        for t in theta:
            report = orbit_kernel_sum(mu, float(t), n_terms)
            worst = max(worst, report.partial_sum / report.bound)
            if not report.holds:
                rows.append(report.model_dump(include={"mu", "theta", "partial_sum", "bound"}))
    violations = pd.DataFrame(rows, columns=["mu", "theta", "partial_sum", "bound"])
    check = GridCheck(name="orbit_sum_bound", checked=len(mus) * theta.size, worst=worst, violations=violations)
    logger.info("orbit sum bound: %d points, %d violations, worst ratio %.4f", check.checked, len(rows), worst)
    return check


def iterate_bracket_check(mus: Sequence[float] = (1.5, 2.0, 4.0), n_max: int = 60) -> GridCheck:
    """Check mu^-n < 1 - r_n < 2 mu^-n for n = 1..n_max.

    The bracket is decided in exact rational arithmetic (1 - r_n = 2/(mu^n + 1)
    for the binary value of mu); the floating point 1 - r_n must match the
    exact value to 1e-14 relative.
    """
    rows = []
    worst = 0.0
    for mu in mus:
        exact_mu = Fraction(mu)
        for n in range(1, n_max + 1):
            power = exact_mu**n
            exact = Fraction(2) / (power + 1)
            lower = 1 / power
            value = one_minus_r(mu, n)
            rel_error = abs(value - float(exact)) / float(exact)
            worst = max(worst, float(exact / (2 * lower)))
            if not (lower < exact < 2 * lower) or rel_error > 1e-14:
                rows.append(
                    {
                        "mu": mu,
                        "n": n,
                        "lower": float(lower),
                        "one_minus_r": value,
                        "upper": float(2 * lower),
                        "rel_error": rel_error,
                    }
                )
    violations = pd.DataFrame(rows, columns=["mu", "n", "lower", "one_minus_r", "upper", "rel_error"])
    check = GridCheck(name="iterate_bracket", checked=len(mus) * n_max, worst=worst, violations=violations)
    logger.info("iterate bracket: %d points, %d violations", check.checked, len(rows))
    return check
