"""Exact boundary forms.

A coefficient budget truncates the functions this package studies, and the
truncated series cannot see arcs narrower than the grid spacing. A form is
the closed-form expression the coefficients were computed from. It can be
evaluated anywhere on the closed disc, and in dilation coordinates
``z = psi(kappa(w))`` without losing precision next to the points psi(+1)
and psi(-1).
"""

from abc import ABC, abstractmethod
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from cphi.moebius import CAYLEY, MoebiusMap

FRAME_TOL = 1e-12


def _same_frame(frame: Optional[MoebiusMap], psi: MoebiusMap) -> bool:
    if frame is None:
        return psi.is_identity(FRAME_TOL)
    return frame.equivalent(psi, FRAME_TOL)


def _power(base: np.ndarray, exponent: complex) -> np.ndarray:
    """Principal power base**exponent with 0**e = 0 for Re e > 0."""
    zero = base == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.exp(exponent * np.log(np.where(zero, 1.0, base)))
    if np.any(zero):
        out = np.where(zero, 0.0 if exponent.real > 0 else np.inf, out)
    return out


class BoundaryForm(ABC):
    """An analytic function on the disc given in closed form."""

    frame: Optional[MoebiusMap] = None

    @abstractmethod
    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Values at points of the closed disc."""

    def in_frame(self, psi: MoebiusMap, w: np.ndarray) -> np.ndarray:
        """Values at psi(kappa(w)) for points w of the closed right half-plane."""
        return self(psi.apply(CAYLEY.apply(np.asarray(w, dtype=complex))))

    @property
    def growth(self) -> float:
        """Exponent g with |f(z)| = O(dist(z, singular set)^-g) near the circle."""
        return 0.0

    @property
    def degree(self) -> int:
        """Polynomial degree contributed to the integrand (0 for bounded forms)."""
        return 0


class PolynomialForm(BoundaryForm):
    """A polynomial given by its coefficients."""

    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __repr__(self) -> str:
        return f"PolynomialForm(degree={self.degree})"


class PowerForm(BoundaryForm):
    """scale * (1 - conj(alpha) z)^p * (1 - conj(beta) z)^q, principal branches.

    alpha = frame(+1) and beta = frame(-1); without a frame they are +1 and -1,
    which gives the weights (1 - z)^gamma (1 + z)^delta and the eigenfunctions
    f_a = (1 - z)^-a (1 + z)^a.
    """

    def __init__(
        self,
        attractive: complex,
        repulsive: complex,
        scale: complex = 1.0,
        frame: Optional[MoebiusMap] = None,
    ):
        self.attractive = complex(attractive)
        self.repulsive = complex(repulsive)
        self.scale = complex(scale)
        self.frame = frame
        psi = frame if frame is not None else MoebiusMap.identity()
        self.alpha = complex(psi.apply(1.0))
        self.beta = complex(psi.apply(-1.0))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.scale, dtype=complex)
        for point, exponent in ((self.alpha, self.attractive), (self.beta, self.repulsive)):
            if exponent != 0:
                out = out * _power(1.0 - np.conj(point) * z, exponent)
        return out

    def in_frame(self, psi: MoebiusMap, w):
        if not _same_frame(self.frame, psi):
            return super().in_frame(psi, w)
        # alpha - psi(xi) and beta - psi(xi) with xi = kappa(w), written so
        # that nothing cancels as w -> infinity or w -> 0.
        w = np.asarray(w, dtype=complex)
        c, d = psi.c, psi.d
        det = psi.determinant
        denom = (c + d) * w + (d - c)
        to_alpha = 2.0 * det / ((c + d) * denom)
        to_beta = -2.0 * det * w / ((d - c) * denom)
        out = np.full(w.shape, self.scale, dtype=complex)
        if self.attractive != 0:
            out = out * _power(np.conj(self.alpha) * to_alpha, self.attractive)
        if self.repulsive != 0:
            out = out * _power(np.conj(self.beta) * to_beta, self.repulsive)
        return out

    @property
    def growth(self) -> float:
        return max(0.0, -self.attractive.real, -self.repulsive.real)

    def __repr__(self) -> str:
        return (
            f"PowerForm(attractive={self.attractive:.6g}, repulsive={self.repulsive:.6g}, "
            f"alpha={self.alpha:.6g}, beta={self.beta:.6g})"
        )


class ProductForm(BoundaryForm):
    """Pointwise product of forms."""

    def __init__(self, factors: Sequence[BoundaryForm]):
        self.factors: List[BoundaryForm] = list(factors)
        self.frame = next((f.frame for f in self.factors if f.frame is not None), None)

    def __call__(self, z):
        out = np.ones(np.shape(z), dtype=complex)
        for factor in self.factors:
            out = out * factor(z)
        return out

    def in_frame(self, psi: MoebiusMap, w):
        out = np.ones(np.shape(w), dtype=complex)
        for factor in self.factors:
            out = out * factor.in_frame(psi, w)
        return out

    @property
    def growth(self) -> float:
        return sum(f.growth for f in self.factors)

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)


class SumForm(BoundaryForm):
    """Linear combination sum_i c_i f_i."""

    def __init__(self, terms: Sequence[Tuple[complex, BoundaryForm]]):
        self.terms: List[Tuple[complex, BoundaryForm]] = [(complex(c), f) for c, f in terms]
        self.frame = next((f.frame for _, f in self.terms if f.frame is not None), None)

    def __call__(self, z):
        out = np.zeros(np.shape(z), dtype=complex)
        for c, term in self.terms:
            out = out + c * term(z)
        return out

    def in_frame(self, psi: MoebiusMap, w):
        out = np.zeros(np.shape(w), dtype=complex)
        for c, term in self.terms:
            out = out + c * term.in_frame(psi, w)
        return out

    @property
    def growth(self) -> float:
        return max((f.growth for _, f in self.terms), default=0.0)

    @property
    def degree(self) -> int:
        return max((f.degree for _, f in self.terms), default=0)


class ComposedForm(BoundaryForm):
    """inner o transform, for a disc automorphism given as a point map.

    ``frame`` is kept from ``inner`` only when the caller knows the transform
    fixes frame(+1) and frame(-1) (orbit members of the frame's automorphism).
    """

    def __init__(
        self,
        inner: BoundaryForm,
        transform: Callable[[np.ndarray], np.ndarray],
        frame: Optional[MoebiusMap] = None,
    ):
        self.inner = inner
        self.transform = transform
        self.frame = frame

    def __call__(self, z):
        return self.inner(self.transform(np.asarray(z, dtype=complex)))

    @property
    def growth(self) -> float:
        return self.inner.growth

    @property
    def degree(self) -> int:
        return self.inner.degree
