"""Discrete Hardy-Littlewood and radial maximal functions on the circle.

Both act on nonnegative samples g_j = g(omega_j) at the M equispaced nodes.
The Hardy-Littlewood function takes the largest average over arcs centred
at a node, with dyadic half-widths; the radial one takes the largest
normalized discrete Poisson average along the radius to a point. With these
discretizations radial <= 2 hl at every node.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from cphi.errors import DomainError
from cphi.hardy import DEFAULT_OVERSAMPLE, BoundaryGrid, H2Function

logger = logging.getLogger(__name__)

DEFAULT_RADII = tuple([0.0] + [1.0 - 2.0**-k for k in range(1, 25)])


def _samples(g) -> np.ndarray:
    g = np.asarray(g, dtype=float).ravel()
    if g.size < 2:
        raise DomainError("need at least two boundary samples")
    if not np.all(np.isfinite(g)):
        raise DomainError("boundary samples must be finite")
    if np.any(g < 0):
        raise DomainError("boundary samples must be nonnegative")
    return g


def boundary_density(f: H2Function, size: Optional[int] = None) -> np.ndarray:
    """|f|^2 at the nodes of a boundary grid.

    Uses the exact form when it is finite at every node, otherwise the
    truncated series.
    """
    grid = BoundaryGrid(size=size) if size else BoundaryGrid.for_budget(f.budget, DEFAULT_OVERSAMPLE)
    values = f.evaluate(grid.nodes, exact=True)
    if not np.all(np.isfinite(values)):
        values = f.evaluate(grid.nodes)
    return np.abs(values) ** 2


def hl_maximal_all(g) -> np.ndarray:
    """Hardy-Littlewood maximal values at every node.

    The candidates are the node itself, arcs of half-width 2^k nodes for
    2^k < M/2, and the full circle.

    Raises:
        DomainError: If a sample is negative or not finite
    """
    g = _samples(g)
    m = g.size
    best = g.copy()
    csum = np.concatenate([[0.0], np.cumsum(np.tile(g, 3))])
    centre = np.arange(m) + m
    h = 1
    while h < m // 2:
        window = (csum[centre + h + 1] - csum[centre - h]) / (2 * h + 1)
        np.maximum(best, window, out=best)
        h *= 2
    np.maximum(best, g.mean(), out=best)
    return best


def hl_maximal(g, zeta_index: int) -> float:
    """Hardy-Littlewood maximal value at one node.

    Raises:
        DomainError: If a sample is negative or the index is off the grid
    """
    g = _samples(g)
    if not 0 <= zeta_index < g.size:
        raise DomainError(f"node index {zeta_index} outside [0, {g.size})")
    return float(hl_maximal_all(g)[zeta_index])


def _discrete_kernel(a: complex, nodes: np.ndarray) -> np.ndarray:
    weights = (1.0 - abs(a) ** 2) / np.abs(nodes - a) ** 2
    return weights / weights.sum()


def radial_maximal(g, zeta: complex, radii: Sequence[float] = DEFAULT_RADII) -> float:
    """max over rho of the normalized discrete Poisson average of g at rho zeta."""
    g = _samples(g)
    nodes = _nodes(g.size)
    zeta = complex(zeta) / abs(zeta)
    return float(max(np.dot(_discrete_kernel(rho * zeta, nodes), g) for rho in radii))


def radial_maximal_all(g, radii: Sequence[float] = DEFAULT_RADII) -> np.ndarray:
    """Radial maximal values at every node, one circular convolution per radius."""
    g = _samples(g)
    nodes = _nodes(g.size)
    spectrum = np.fft.fft(g)
    best = np.zeros(g.size)
    for rho in radii:
        k = _discrete_kernel(rho, nodes)
        averages = np.fft.ifft(spectrum * np.fft.fft(k)).real
        np.maximum(best, averages, out=best)
    return best


def _nodes(m: int) -> np.ndarray:
    return np.exp(2j * math.pi * np.arange(m) / m)


def maximal_domination(
    g,
    radii: Sequence[float] = DEFAULT_RADII,
    constant: float = 2.0,
) -> pd.DataFrame:
    """Per-node ratio of the radial to the Hardy-Littlewood maximal function.

    Returns:
        DataFrame with columns index, theta, radial, hl, ratio, dominated
    """
    g = _samples(g)
    radial = radial_maximal_all(g, radii)
    hl = hl_maximal_all(g)
    ratio = np.divide(radial, hl, out=np.zeros_like(radial), where=hl > 0)
    frame = pd.DataFrame(
        {
            "index": np.arange(g.size),
            "theta": 2.0 * math.pi * np.arange(g.size) / g.size,
            "radial": radial,
            "hl": hl,
            "ratio": ratio,
            "dominated": radial <= constant * hl * (1.0 + 1e-12),
        }
    )
    failures = int((~frame["dominated"]).sum())
    if failures:
        logger.warning("radial > %g hl at %d of %d nodes", constant, failures, g.size)
    logger.debug("maximal domination: largest ratio %.4f", float(ratio.max()))
    return frame
