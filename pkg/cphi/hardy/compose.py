"""The composition operator C_m f = f o m on truncated functions."""

import logging
from functools import partial
from typing import Callable, Optional, Tuple

import numpy as np

from cphi.errors import BudgetError, DomainError
from cphi.hardy.forms import ComposedForm
from cphi.hardy.function import DEFAULT_OVERSAMPLE, BoundaryGrid, H2Function
from cphi.moebius import HyperbolicAutomorphism, MoebiusMap, iterate_points

logger = logging.getLogger(__name__)

CIRCLE_TOL = 1e-10


def _boundary_values(f: H2Function, points: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Exact form values where available and finite, else the truncated series.

    The flag is True when the exact form was used.
    """
    if f.form is not None:
        values = f.form(points)
        if np.all(np.isfinite(values)):
            return values, True
        logger.debug("%s: form is singular on the grid, sampling the series", f.label or "f")
    return f.evaluate(points), False


def _resample(
    f: H2Function,
    transform: Callable[[np.ndarray], np.ndarray],
    center: complex,
    grid: BoundaryGrid,
    oversample: int,
    frame: Optional[MoebiusMap],
    label: str,
) -> H2Function:
    if grid.size < oversample * f.budget:
        raise BudgetError(
            f"grid of {grid.size} nodes is smaller than {oversample} x budget {f.budget}"
        )
    points = transform(grid.nodes)
    if not np.all(np.isfinite(points)) or np.abs(np.abs(points) - 1.0).max() > CIRCLE_TOL:
        raise DomainError("map does not send the unit circle onto itself")

    values, exact = _boundary_values(f, points)
    spectrum = np.fft.fft(values) / grid.size
    coeffs = spectrum[: f.budget]
    discarded = float(np.vdot(spectrum[f.budget :], spectrum[f.budget :]).real)
    tail = discarded
    if not exact:
        # the input tail, transported by ||C_m|| <= ((1 + |m(0)|)/(1 - |m(0)|))^1/2
        gap = max(1.0 - abs(center), np.finfo(float).tiny)
        tail += f.tail_energy * (1.0 + abs(center)) / gap

    form = ComposedForm(f.form, transform, frame=frame) if f.form is not None else None
    out = H2Function(coeffs=coeffs, budget=f.budget, tail_energy=tail, form=form, label=label)
    if not out.is_resolved():
        logger.warning(
            "%s is unresolved: tail %.3g against norm^2 %.3g",
            label, out.tail_energy, out.norm_squared,
        )
    return out


def compose(
    f: H2Function,
    m: MoebiusMap,
    grid: Optional[BoundaryGrid] = None,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> H2Function:
    """f o m for a disc automorphism m, through the boundary grid.

    Samples f at m(omega_j), recovers Taylor coefficients by FFT and keeps
    the first f.budget of them. The energy of the discarded coefficients is
    recorded as tail energy.

    Raises:
        BudgetError: If the grid is smaller than oversample x budget
        DomainError: If m does not preserve the unit circle
    """
    grid = grid or BoundaryGrid.for_budget(f.budget, oversample)
    center = complex(m.apply(0j))
    if not abs(center) < 1.0:
        raise DomainError(f"m(0) = {center} is not inside the disc")
    return _resample(f, m.apply, center, grid, oversample, None, label=f"{f.label or 'f'} o m")


def orbit_member(
    f: H2Function,
    phi: HyperbolicAutomorphism,
    n: int,
    grid: Optional[BoundaryGrid] = None,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> H2Function:
    """f o phi_n for any integer n, evaluating phi_n in half-plane coordinates."""
    grid = grid or BoundaryGrid.for_budget(f.budget, oversample)
    transform = partial(iterate_points, phi, n)
    center = complex(transform(0j))
    frame = None
    if f.form is not None and f.form.frame is not None and not phi.canonical:
        if f.form.frame.equivalent(phi.conjugator, 1e-12):
            frame = f.form.frame
    return _resample(
        f, transform, center, grid, oversample, frame, label=f"{f.label or 'f'} o phi_{n}"
    )
