"""Finite sections of the composition operator.

Column k of the N x N compression is the first N Taylor coefficients of
phi^k, the image of z^k under C_phi. Only norm bounds are read off these
matrices; their eigenvalues are not used as spectral evidence.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import svdvals

from cphi.errors import BudgetError, ConvergenceError, DomainError
from cphi.hardy import DEFAULT_OVERSAMPLE, UNRESOLVED_RATIO, BoundaryGrid, check_budget
from cphi.moebius import HyperbolicAutomorphism

logger = logging.getLogger(__name__)

POWER_TOL = 1e-10
POWER_MAX_ITERATIONS = 5000


class CompressionMatrix(BaseModel):
    """P_N C_phi P_N in the monomial basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int = Field(..., description="N")
    mu: float = Field(..., gt=1.0, description="Multiplier of phi")
    entries: np.ndarray = Field(..., description="N x N complex matrix, column k = phi^k truncated")
    column_tail: np.ndarray = Field(..., description="DFT energy of phi^k beyond the first N coefficients")

    def resolved_columns(self, ratio: float = UNRESOLVED_RATIO) -> List[int]:
        """Columns whose discarded energy is at most ``ratio`` (each phi^k has norm 1)."""
        return [int(k) for k in np.flatnonzero(self.column_tail <= ratio)]

    @property
    def aliased_columns(self) -> List[int]:
        return [int(k) for k in np.flatnonzero(self.column_tail > UNRESOLVED_RATIO)]


def truncated_matrix(
    phi: HyperbolicAutomorphism,
    dimension: int,
    grid: Optional[BoundaryGrid] = None,
) -> CompressionMatrix:
    """Build the compression from running powers of phi's boundary values.

    phi^k carries frequencies up to about k mu, so the default grid has
    4 N ceil(mu) nodes rounded up to a power of two; the DFT then returns
    Taylor coefficients rather than aliased sums.

    Raises:
        BudgetError: If the dimension is not a power of two or the grid has
            fewer than 4N nodes
    """
    n = check_budget(dimension, "dimension")
    if grid is None:
        wanted = DEFAULT_OVERSAMPLE * n * math.ceil(phi.mu)
        grid = BoundaryGrid(size=1 << (wanted - 1).bit_length())
    if grid.size < DEFAULT_OVERSAMPLE * n:
        raise BudgetError(f"grid of {grid.size} nodes is smaller than {DEFAULT_OVERSAMPLE} x {n}")
    values = phi.map.apply(grid.nodes)
    entries = np.empty((n, n), dtype=complex)
    tail = np.empty(n)
    power = np.ones(grid.size, dtype=complex)
    for k in range(n):
        spectrum = np.fft.fft(power) / grid.size
        entries[:, k] = spectrum[:n]
        tail[k] = float(np.vdot(spectrum[n:], spectrum[n:]).real)
        power = power * values
    out = CompressionMatrix(dimension=n, mu=phi.mu, entries=entries, column_tail=tail)
    aliased = out.aliased_columns
    if aliased:
        logger.info("compression N=%d: %d columns from k=%d on exceed the tail ratio", n, len(aliased), aliased[0])
    return out


def _power_iteration(a: np.ndarray, tol: float, max_iterations: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    previous = 0.0
    for iteration in range(1, max_iterations + 1):
        y = a.conj().T @ (a @ x)
        rayleigh = float(np.vdot(x, y).real)
        size = np.linalg.norm(y)
        if size == 0.0:
            return 0.0
        x = y / size
        if abs(rayleigh - previous) <= tol * rayleigh:
            logger.debug("power iteration converged after %d steps", iteration)
            return math.sqrt(rayleigh)
        previous = rayleigh
    raise ConvergenceError(max_iterations)


def operator_norm_estimate(
    m: CompressionMatrix,
    method: str = "svd",
    tol: float = POWER_TOL,
    max_iterations: int = POWER_MAX_ITERATIONS,
    seed: int = 0,
) -> float:
    """Largest singular value of the compression.

    ``method="power"`` runs power iteration on m* m until the Rayleigh
    quotient changes by at most ``tol`` relatively. The top of the singular
    spectrum is a continuum filling in as N grows, so power iteration slows
    down like 1/N^2; ``method="svd"`` (the default) computes the singular
    values directly.

    Raises:
        ConvergenceError: If power iteration needs more than max_iterations
        DomainError: For an unknown method
    """
    if method == "svd":
        return float(svdvals(m.entries)[0])
    if method == "power":
        return _power_iteration(m.entries, tol, max_iterations, seed)
    raise DomainError(f"unknown method {method!r}, expected 'svd' or 'power'")


def lower_norm_estimate(m: CompressionMatrix, columns: Optional[Sequence[int]] = None) -> float:
    """Smallest singular value of the compression restricted to ``columns``.

    Defaults to the resolved columns. On their span ||P_N C_phi x|| is at
    least (mu^-1/2 - sqrt(sum of their tails)) ||x||.

    Raises:
        DomainError: If no column is selected
    """
    cols = m.resolved_columns() if columns is None else list(columns)
    if not cols:
        raise DomainError("no resolved columns to restrict to")
    return float(svdvals(m.entries[:, cols])[-1])


def lower_bound(m: CompressionMatrix, columns: Optional[Sequence[int]] = None) -> float:
    """mu^-1/2 minus the truncation slack of the selected columns."""
    cols = m.resolved_columns() if columns is None else list(columns)
    return m.mu ** -0.5 - math.sqrt(float(np.sum(m.column_tail[cols])))
