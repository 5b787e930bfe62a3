"""Eigenfunctions as H^2-valued Laurent series along an orbit.

For lambda in the convergence annulus, F = sum_n lambda^-n f o phi_n
satisfies C_phi F = lambda F. On the window [-M, M] the defect telescopes:

    C_phi F_M - lambda F_M = lambda^-M f o phi_(M+1) - lambda^(M+1) f o phi_-M
"""

import cmath
import logging
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from cphi.errors import DivergenceError, DomainError
from cphi.eigen.orbit import OrbitFamily, convergence_radii

logger = logging.getLogger(__name__)

DEFAULT_RESIDUAL_TOL = 1e-4
EXCEPTIONAL_RATIO = 1e-10
DIVERGENCE_SLACK = 1e-9


class Annulus(BaseModel):
    """The open annulus R1 < |z| < R2."""

    model_config = ConfigDict(frozen=True)

    inner_radius: float = Field(..., gt=0.0, description="R1")
    outer_radius: float = Field(..., description="R2 > R1")

    @model_validator(mode="after")
    def check_order(self) -> "Annulus":
        if not math.isfinite(self.outer_radius) or self.outer_radius <= self.inner_radius:
            raise ValueError(
                f"need 0 < R1 < R2 < inf, got ({self.inner_radius}, {self.outer_radius})"
            )
        return self

    @classmethod
    def from_exponents(cls, mu: float, inner: float, outer: float) -> "Annulus":
        """A(mu^-inner, mu^outer)."""
        return cls(inner_radius=mu ** (-inner), outer_radius=mu**outer)

    def inset(self, margin: float) -> "Annulus":
        """A(R1 (1 + margin), R2 (1 - margin))."""
        return Annulus(
            inner_radius=self.inner_radius * (1.0 + margin),
            outer_radius=self.outer_radius * (1.0 - margin),
        )

    def contains(self, z: complex) -> bool:
        return self.inner_radius < abs(z) < self.outer_radius

    def within(self, other: "Annulus") -> bool:
        return other.inner_radius <= self.inner_radius and self.outer_radius <= other.outer_radius

    def grid(self, radial: int, angular: int) -> List[complex]:
        """Cell centres in log-radius, angles k 2pi/angular; radius-major order."""
        ratio = self.outer_radius / self.inner_radius
        radii = [self.inner_radius * ratio ** ((i + 0.5) / radial) for i in range(radial)]
        return [r * cmath.exp(2j * math.pi * k / angular) for r in radii for k in range(angular)]

    def __str__(self) -> str:
        return f"A({self.inner_radius:.6g}, {self.outer_radius:.6g})"


class EigenStatus(str, Enum):
    """Outcome of one Laurent eigenfunction evaluation."""

    PASS = "pass"
    UNCONVERGED = "unconverged"
    EXCEPTIONAL = "exceptional"
    DIVERGENT = "divergent"


class EigenReport(BaseModel):
    """F_lambda on a window, its size and how well it satisfies C_phi F = lambda F."""

    model_config = ConfigDict(frozen=True)

    lam: complex = Field(..., description="The candidate eigenvalue lambda")
    truncation: int = Field(..., description="Window half-width M")
    eigenfunction_norm: float = Field(..., description="||F_lambda||")
    relative_residual: float = Field(..., description="||C_phi F - lambda F|| / ||F||")
    exceptional: bool = Field(False, description="F_lambda vanishes relative to its terms")
    status: EigenStatus
    forward_ratio: float = Field(..., description="|lambda|^-1 mu^-eps")
    backward_ratio: float = Field(..., description="|lambda| mu^-delta")

    def to_row(self) -> Dict[str, Any]:
        return {
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "M": self.truncation,
            "norm": self.eigenfunction_norm,
            "residual": self.relative_residual,
            "exceptional": self.exceptional,
            "status": self.status.value,
        }


def tail_ratios(family: OrbitFamily, lam: complex) -> Tuple[float, float]:
    """Geometric ratios of the forward and backward Laurent tails."""
    inner, outer = convergence_radii(family)
    return inner / abs(lam), abs(lam) / outer


def required_window(ratio: float, tol: float) -> int:
    """Smallest M with ratio^M <= tol."""
    if ratio <= 0.0:
        return 0
    if ratio >= 1.0:
        return -1
    return math.ceil(math.log(tol) / math.log(ratio))


def laurent_eigenfunction(
    family: OrbitFamily,
    lam: complex,
    tol: float = DEFAULT_RESIDUAL_TOL,
    exceptional_ratio: float = EXCEPTIONAL_RATIO,
) -> EigenReport:
    """Sum F_lambda = sum_{|n| <= M} lambda^-n f o phi_n and measure its defect.

    The residual is ||lambda^-M f o phi_(M+1) - lambda^(M+1) f o phi_-M||
    relative to ||F_lambda||. F_lambda is flagged exceptional when its norm
    is below ``exceptional_ratio`` x sum |lambda|^-n ||f o phi_n||.

    Raises:
        DomainError: If lambda = 0
        FitError: If the family has no fitted decay exponents
        DivergenceError: If a tail ratio exceeds 1 at this lambda
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    forward, backward = tail_ratios(family, lam)
    if forward > 1.0 + DIVERGENCE_SLACK:
        raise DivergenceError("forward", forward)
    if backward > 1.0 + DIVERGENCE_SLACK:
        raise DivergenceError("backward", backward)

    m = family.window
    needed = max(required_window(forward, tol), required_window(backward, tol))
    if needed < 0:
        logger.warning("lambda = %s: a tail ratio is 1, the window %d truncates a non-decaying series", lam, m)
    elif needed > m:
        logger.warning("lambda = %s: window %d is shorter than the %d terms the tail ratios need", lam, m, needed)

    weights = {int(n): lam ** (-int(n)) for n in family.indices}
    norm = family.combination_norm(weights)
    defect = family.combination_norm({m + 1: lam ** (-m), -m: -(lam ** (m + 1))})
    scale = float(sum(abs(w) * family.norm_at(n) for n, w in weights.items()))
    exceptional = norm < exceptional_ratio * scale
    residual = defect / norm if norm > 0 else math.inf

    if exceptional:
        status = EigenStatus.EXCEPTIONAL
    elif residual <= tol:
        status = EigenStatus.PASS
    else:
        status = EigenStatus.UNCONVERGED
    logger.debug("lambda = %s: norm %.6g, residual %.3g, %s", lam, norm, residual, status.value)
    return EigenReport(
        lam=lam,
        truncation=m,
        eigenfunction_norm=norm,
        relative_residual=residual,
        exceptional=exceptional,
        status=status,
        forward_ratio=forward,
        backward_ratio=backward,
    )


def eigen_scan(
    family: OrbitFamily,
    annulus: Annulus,
    radial: int = 16,
    angular: int = 16,
    tol: float = DEFAULT_RESIDUAL_TOL,
    exceptional_ratio: float = EXCEPTIONAL_RATIO,
) -> List[EigenReport]:
    """One :class:`EigenReport` per point of a polar grid on the annulus.

    Divergent points are reported with status ``divergent`` and NaN norms.
    """
    try:
        inner, outer = convergence_radii(family)
        region = Annulus(inner_radius=inner, outer_radius=outer)
        if not annulus.within(region):
            logger.warning("scan annulus %s leaves the convergence region %s", annulus, region)
    except ValueError:
        logger.warning("fitted exponents give an empty convergence region")

    reports = []
    for lam in annulus.grid(radial, angular):
        try:
            reports.append(laurent_eigenfunction(family, lam, tol, exceptional_ratio))
        except DivergenceError as e:
            forward, backward = tail_ratios(family, lam)
            reports.append(
                EigenReport(
                    lam=lam,
                    truncation=family.window,
                    eigenfunction_norm=math.nan,
                    relative_residual=math.nan,
                    status=EigenStatus.DIVERGENT,
                    forward_ratio=forward,
                    backward_ratio=backward,
                )
            )
            logger.debug("lambda = %s: %s", lam, e)
    return reports


class ScanSummary(BaseModel):
    """Status counts of a scan and the layout of its exceptional points."""

    model_config = ConfigDict(frozen=True)

    total: int
    counts: Dict[str, int]
    pass_fraction: float
    exceptional_points: List[Tuple[int, int]] = Field(default_factory=list, description="(radial, angular) cells")
    exceptional_isolated: bool = True
    max_residual: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def summarize(reports: Sequence[EigenReport], shape: Optional[Tuple[int, int]] = None) -> ScanSummary:
    """Count statuses and check that exceptional points are isolated on the grid.

    With ``shape = (radial, angular)`` the reports are read in grid order and
    two exceptional cells touching radially or angularly (angles wrap
    around) count as non-isolated.
    """
    counts = {s.value: 0 for s in EigenStatus}
    for r in reports:
        counts[r.status.value] += 1
    total = len(reports)

    cells: List[Tuple[int, int]] = []
    isolated = True
    if shape is not None:
        radial, angular = shape
        if radial * angular != total:
            raise DomainError(f"shape {shape} does not match {total} reports")
        flagged = np.array([r.status == EigenStatus.EXCEPTIONAL for r in reports]).reshape(radial, angular)
        cells = [(int(i), int(j)) for i, j in np.argwhere(flagged)]
        for i, j in cells:
            neighbours = [(i, (j + 1) % angular), (i, (j - 1) % angular), (i + 1, j), (i - 1, j)]
            if any(0 <= a < radial and flagged[a, b] for a, b in neighbours):
                isolated = False
        if not isolated:
            logger.warning("exceptional points are not isolated on the %d x %d grid", radial, angular)

    finite = [r.relative_residual for r in reports if math.isfinite(r.relative_residual)]
    return ScanSummary(
        total=total,
        counts=counts,
        pass_fraction=counts[EigenStatus.PASS.value] / total if total else 0.0,
        exceptional_points=cells,
        exceptional_isolated=isolated,
        max_residual=max(finite) if finite else None,
    )
