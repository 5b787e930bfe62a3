"""Fourier partial sums along an orbit, indexed by points of the circle.

For |omega| = 1, F_M(omega) = sum_{|n| <= M} omega^-n f o phi_n obeys

    C_phi F_M = omega F_M - omega^(M+1) f o phi_-M + omega^-M f o phi_(M+1)

exactly, whatever the decay of the orbit. When sum ||f o phi_n||^2 is
finite, the boundary terms vanish in the mean over omega.
"""

import cmath
import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cphi.errors import DomainError
from cphi.eigen.orbit import OrbitFamily
from cphi.hardy import H2Function, compose, linear_combination

logger = logging.getLogger(__name__)

UNIMODULAR_TOL = 1e-12


class CirclePartial(BaseModel):
    """A circle partial sum F_M(omega) with its two residuals.

    ``identity_residual`` measures the exact identity on coefficients and
    reflects only composition truncation. ``convergence_residual`` is
    ||C_phi F_M - omega F_M|| / ||F_M||, which tends to zero only when the
    orbit is square-summable.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega: complex
    truncation: int
    function: Optional[H2Function] = Field(None, description="F_M as a truncation")
    norm: float = Field(..., description="||F_M||")
    identity_residual: Optional[float] = None
    convergence_residual: float


def _check_omega(omega: complex) -> complex:
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > UNIMODULAR_TOL:
        raise DomainError(f"|omega| must be 1, got {abs(omega)}")
    return omega


def _truncation(family: OrbitFamily, m: Optional[int]) -> int:
    m = family.window if m is None else m
    if not 0 <= m <= family.window:
        raise DomainError(f"M = {m} outside [0, {family.window}]")
    return m


def convergence_residual(family: OrbitFamily, omega: complex, m: Optional[int] = None) -> float:
    """||omega^-M f o phi_(M+1) - omega^(M+1) f o phi_-M|| / ||F_M||."""
    omega = _check_omega(omega)
    m = _truncation(family, m)
    norm = family.combination_norm({n: omega ** (-n) for n in range(-m, m + 1)})
    defect = family.combination_norm({m + 1: omega ** (-m), -m: -(omega ** (m + 1))})
    return defect / norm if norm > 0 else math.inf


def circle_eigen_partial(family: OrbitFamily, omega: complex, m: Optional[int] = None) -> CirclePartial:
    """Build F_M(omega) from the members and check the partial-sum identity.

    The identity residual is ||C_phi F_M - omega F_M + omega^(M+1) f o phi_-M
    - omega^-M f o phi_(M+1)|| / ||F_M||, with C_phi F_M from :func:`compose`.

    Raises:
        DomainError: If |omega| != 1, M is outside the window, or the
            family was computed without members
    """
    omega = _check_omega(omega)
    m = _truncation(family, m)
    if not family.members:
        raise DomainError("circle partial sums need the orbit members")

    partial = linear_combination(
        [(omega ** (-n), family.member(n)) for n in range(-m, m + 1)],
        label=f"F_{m}({omega:.6g})",
    )
    image = compose(partial, family.phi.map)
    defect = (
        image.coeffs
        - omega * partial.coeffs
        + omega ** (m + 1) * family.member(-m).coeffs
        - omega ** (-m) * family.member(m + 1).coeffs
    )
    norm = partial.norm
    identity = float(np.linalg.norm(defect)) / norm if norm > 0 else math.inf
    logger.debug("F_%d(%s): identity residual %.3g", m, omega, identity)
    return CirclePartial(
        omega=omega,
        truncation=m,
        function=partial,
        norm=norm,
        identity_residual=identity,
        convergence_residual=convergence_residual(family, omega, m),
    )


def sampled_omegas(count: int, seed: int = 0) -> List[complex]:
    """``count`` points of the circle with uniformly random angles."""
    rng = np.random.default_rng(seed)
    return [cmath.exp(1j * t) for t in rng.uniform(0.0, 2.0 * math.pi, count)]


def median_convergence(family: OrbitFamily, omegas: Sequence[complex], truncations: Sequence[int]) -> List[float]:
    """Median convergence residual over omegas, one value per truncation."""
    return [
        float(np.median([convergence_residual(family, w, m) for w in omegas]))
        for m in truncations
    ]
