"""Eigenvalue evidence for the closed annulus mu^-1/2 <= |lambda| <= mu^1/2.

Inside the annulus lambda = mu^a with |Re a| < 1/2, and the explicit
function f_a = ((1 + z)/(1 - z))^a satisfies C_phi f_a = lambda f_a. The
residual of that relation is measured on the exact form with the dilation
quadrature. Shifting a by 2 pi i / log(mu) gives a second eigenfunction for
the same lambda.
"""

import cmath
import logging
import math
from enum import Enum
from typing import Any, Dict, List, Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from cphi.errors import DomainError, NotInH2Error
from cphi.hardy import DEFAULT_BUDGET, DilationQuadrature, PowerForm, check_budget, form_inner
from cphi.moebius import HyperbolicAutomorphism

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-9


class SpectrumStatus(str, Enum):
    """Where a candidate lambda sits relative to the annulus."""

    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class ResidualPoint(BaseModel):
    """One point of the residual field."""

    model_config = ConfigDict(frozen=True)

    lam: complex
    status: SpectrumStatus
    exponent: complex = Field(..., description="a = log(lambda) / log(mu), principal branch")
    residual: float = Field(math.nan, description="||C_phi f_a - lambda f_a|| / ||f_a||, inside only")
    distance: float = Field(0.0, description="|Re a| - 1/2 for points outside")

    def to_row(self) -> Dict[str, Any]:
        return {
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "residual": self.residual,
            "status": self.status.value,
        }


def eigen_exponent(lam: complex, mu: float) -> complex:
    """a with mu^a = lambda and Im a in (-pi/log mu, pi/log mu].

    Raises:
        DomainError: If lambda = 0
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    return cmath.log(lam) / math.log(mu)


def classify_lambda(lam: complex, mu: float, tol: float = BOUNDARY_TOL) -> SpectrumStatus:
    gap = abs(eigen_exponent(lam, mu).real) - 0.5
    if abs(gap) <= tol:
        return SpectrumStatus.BOUNDARY
    return SpectrumStatus.INSIDE if gap < 0 else SpectrumStatus.OUTSIDE


def _fa_form(a: complex, phi: HyperbolicAutomorphism) -> PowerForm:
    """f_a with its singular points moved to the fixed points of phi."""
    return PowerForm(-a, a, frame=None if phi.canonical else phi.conjugator)


def eigen_residual(phi: HyperbolicAutomorphism, lam: complex, budget: int = DEFAULT_BUDGET) -> ResidualPoint:
    """Residual of C_phi f_a = lambda f_a for lambda inside the annulus.

    For fixed points other than +-1, f_a is carried to alpha and beta by the
    conjugator: (1 - conj(alpha) z)^-a (1 - conj(beta) z)^a is a multiple of
    f_a o psi^-1, so the relation is checked for phi itself. Only the exact
    form is sampled, so ``budget`` is validated but no series is built.
    Boundary and outside points are classified without a residual.

    Raises:
        DomainError: If lambda = 0
        BudgetError: If budget is not a power of two
    """
    check_budget(budget)
    lam = complex(lam)
    a = eigen_exponent(lam, phi.mu)
    status = classify_lambda(lam, phi.mu)
    if status != SpectrumStatus.INSIDE:
        return ResidualPoint(lam=lam, status=status, exponent=a, distance=abs(a.real) - 0.5)
    profile = DilationQuadrature(phi).profile(_fa_form(a, phi), 0, 1)
    residual = profile.norm({1: 1.0, 0: -lam}) / profile.norm({0: 1.0})
    return ResidualPoint(lam=lam, status=status, exponent=a, residual=residual)


def annulus_residual_map(
    phi: HyperbolicAutomorphism,
    lambdas: Sequence[complex],
    budget: int = DEFAULT_BUDGET,
) -> List[ResidualPoint]:
    """:func:`eigen_residual` at each lambda, in order."""
    points = [eigen_residual(phi, lam, budget) for lam in lambdas]
    counts = {s.value: sum(p.status == s for p in points) for s in SpectrumStatus}
    logger.info("residual map over %d points: %s", len(points), counts)
    return points


def residual_frame(points: Sequence[ResidualPoint]) -> pd.DataFrame:
    """The residual field as a table with columns lambda_re, lambda_im, residual, status."""
    return pd.DataFrame([p.to_row() for p in points], columns=["lambda_re", "lambda_im", "residual", "status"])


def gram_independence(phi: HyperbolicAutomorphism, a: complex, budget: int = DEFAULT_BUDGET) -> float:
    """det of the normalized Gram matrix of f_a and f_(a + 2 pi i / log mu).

    Both are eigenfunctions for lambda = mu^a; a determinant away from 0
    shows the eigenspace has dimension at least 2. The inner products are
    taken between the exact forms.

    Raises:
        NotInH2Error: If |Re a| >= 1/2
        BudgetError: If budget is not a power of two
    """
    check_budget(budget)
    a = complex(a)
    if abs(a.real) >= 0.5:
        raise NotInH2Error(f"f_a is in H^2 only for |Re a| < 1/2, got a = {a}")
    f = _fa_form(a, phi)
    g = _fa_form(a + 2j * math.pi / phi.log_mu, phi)
    ff = form_inner(f, f).real
    gg = form_inner(g, g).real
    fg = form_inner(f, g)
    det = 1.0 - abs(fg) ** 2 / (ff * gg)
    logger.debug("Gram determinant at a = %s: %.6g", a, det)
    return float(det)
