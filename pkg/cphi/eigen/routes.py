"""Scans that check eigenvalue annuli predicted from conditions on f.

Each route builds the function its hypothesis describes, computes the orbit
family and scans the annulus the conclusion predicts, inset by a margin.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cphi.errors import DomainError
from cphi.eigen.laurent import (
    DEFAULT_RESIDUAL_TOL,
    Annulus,
    EigenReport,
    ScanSummary,
    eigen_scan,
    summarize,
)
from cphi.eigen.orbit import backward_bounded, decay_fit, orbit_norms
from cphi.hardy import DEFAULT_BUDGET, H2Function, WeightSpec, constant, multiply, transported_weight
from cphi.moebius import HyperbolicAutomorphism
from cphi.poisson import boundary_density, hl_maximal

logger = logging.getLogger(__name__)

DEFAULT_INSET = 0.05
DEFAULT_DELTAS = (0.05, 0.1, 0.15, 0.2)
RATE_FLOOR = 1e-6


class RouteReport(BaseModel):
    """The one-sided route: bounded backward orbit plus forward decay."""

    model_config = ConfigDict(frozen=True)

    hl_at_repulsive: float = Field(..., description="Hardy-Littlewood maximal value of |f|^2 at beta")
    forward_rate: float = Field(..., description="Fitted forward decay exponent")
    backward_bounded: bool
    backward_sup: float
    backward_reference: float
    annulus: Optional[Annulus] = Field(None, description="A(mu^-eps, 1) inset, when eps > 0")

    @property
    def holds(self) -> bool:
        return math.isfinite(self.hl_at_repulsive) and self.backward_bounded and self.forward_rate > RATE_FLOOR


class ScanResult(BaseModel):
    """A labelled annulus scan."""

    model_config = ConfigDict(frozen=True)

    label: str
    annulus: Annulus
    reports: List[EigenReport]
    summary: ScanSummary


def weight_for(phi: HyperbolicAutomorphism, spec: WeightSpec, budget: int) -> H2Function:
    """The weight with exponents at the fixed points of phi."""
    return transported_weight(spec, phi.alpha, phi.beta, budget)


def _scan(
    label: str,
    f: H2Function,
    phi: HyperbolicAutomorphism,
    annulus: Annulus,
    window: int,
    radial: int,
    angular: int,
    tol: float,
) -> ScanResult:
    family = orbit_norms(f, phi, window, with_members=False)
    reports = eigen_scan(family, annulus, radial, angular, tol)
    summary = summarize(reports, (radial, angular))
    logger.info("%s on %s: %d of %d pass", label, annulus, summary.counts["pass"], summary.total)
    return ScanResult(label=label, annulus=annulus, reports=reports, summary=summary)


def one_sided_route(
    f: H2Function,
    phi: HyperbolicAutomorphism,
    window: int = 60,
    inset: float = DEFAULT_INSET,
) -> RouteReport:
    """Check the one-sided hypotheses: |f|^2 has a finite maximal function at
    the repulsive point, and the forward orbit decays.

    Raises:
        FitError: If the forward decay cannot be fitted
    """
    g = boundary_density(f)
    nodes = np.exp(2j * math.pi * np.arange(g.size) / g.size)
    index = int(np.argmin(np.abs(nodes - phi.beta)))
    hl = hl_maximal(g, index)

    family = orbit_norms(f, phi, window, with_members=False)
    rate = family.forward_rate if family.forward_rate is not None else decay_fit(family, "+")
    bounded, sup, reference = backward_bounded(family)
    annulus = None
    if rate > RATE_FLOOR:
        try:
            annulus = Annulus.from_exponents(phi.mu, rate, 0.0).inset(inset)
        except ValueError:
            logger.warning("forward rate %.3g leaves no annulus after a %g inset", rate, inset)
    return RouteReport(
        hl_at_repulsive=hl,
        forward_rate=rate,
        backward_bounded=bounded,
        backward_sup=sup,
        backward_reference=reference,
        annulus=annulus,
    )


def hp_reduction_scan(
    g: H2Function,
    p: float,
    phi: HyperbolicAutomorphism,
    deltas: Sequence[float] = DEFAULT_DELTAS,
    window: int = 60,
    radial: int = 16,
    angular: int = 16,
    tol: float = DEFAULT_RESIDUAL_TOL,
    inset: float = DEFAULT_INSET,
) -> Dict[float, ScanResult]:
    """For each delta < 1/2 - 1/p, scan A(mu^-delta, mu^delta) for
    f = weight(1/2 + delta, 1/2 + delta) g.

    Raises:
        DomainError: If p <= 2 (no admissible delta)
    """
    if p <= 2:
        raise DomainError(f"p must exceed 2, got {p}")
    epsilon = 0.5 - 1.0 / p
    results = {}
    for delta in deltas:
        if not 0 < delta < epsilon:
            logger.info("skipping delta = %g: need 0 < delta < %g", delta, epsilon)
            continue
        w = weight_for(phi, WeightSpec(gamma=0.5 + delta, delta=0.5 + delta), g.budget)
        f = multiply(w, g)
        annulus = Annulus.from_exponents(phi.mu, delta, delta).inset(inset)
        results[delta] = _scan(f"hp p={p:g} delta={delta:g}", f, phi, annulus, window, radial, angular, tol)
    return results


def reversed_scan(
    epsilon: float,
    phi: HyperbolicAutomorphism,
    budget: int = DEFAULT_BUDGET,
    window: int = 60,
    radial: int = 16,
    angular: int = 16,
    tol: float = DEFAULT_RESIDUAL_TOL,
    inset: float = DEFAULT_INSET,
) -> ScanResult:
    """Hypotheses with the roles of the fixed points swapped:
    f = weight(1/2, 1/2 + epsilon), scanned on A(1, mu^epsilon)."""
    if not 0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    f = weight_for(phi, WeightSpec(gamma=0.5, delta=0.5 + epsilon), budget)
    annulus = Annulus.from_exponents(phi.mu, 0.0, epsilon).inset(inset)
    return _scan(f"reversed epsilon={epsilon:g}", f, phi, annulus, window, radial, angular, tol)


def one_sided_hp_scan(
    p: float,
    phi: HyperbolicAutomorphism,
    g: Optional[H2Function] = None,
    budget: int = DEFAULT_BUDGET,
    window: int = 60,
    radial: int = 16,
    angular: int = 16,
    tol: float = DEFAULT_RESIDUAL_TOL,
    inset: float = DEFAULT_INSET,
) -> ScanResult:
    """f = (1 - z)^(2/p) g with g bounded near the repulsive point, scanned on
    A(mu^(-1/p), 1).

    Raises:
        DomainError: If 2/p exceeds the largest weight exponent 3/2
    """
    if not p >= 4.0 / 3.0:
        raise DomainError(f"p must be at least 4/3, got {p}")
    g = g if g is not None else constant(1.0, budget)
    w = weight_for(phi, WeightSpec(gamma=2.0 / p, delta=0.0), g.budget)
    f = multiply(w, g)
    annulus = Annulus.from_exponents(phi.mu, 1.0 / p, 0.0).inset(inset)
    return _scan(f"one-sided p={p:g}", f, phi, annulus, window, radial, angular, tol)
