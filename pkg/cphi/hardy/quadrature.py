"""Quadrature in dilation coordinates.

Write a point of the unit circle as zeta = kappa(+-i e^v). Then
dm = dv / (2 pi cosh v), the points +1 and -1 sit at v = +inf and v = -inf,
and the canonical automorphism acts as the shift v -> v + log(mu). Orbit
norms ||f o phi_n|| at any depth n become integrals of shifted samples of
one profile, and mass that a uniform grid on the circle cannot resolve is
integrated at its own scale.

With psi the conjugator of phi (psi(+1) = alpha, psi(-1) = beta) and
b = psi^-1(0):

    ||sum_n c_n f o phi_n||^2
        = sum_+- int |sum_n c_n F_+-(v + n log mu)|^2 P_b(zeta) dv / (2 pi cosh v)

with F_+-(u) = f(psi(kappa(+-i e^u))). The step divides log(mu), so the
shifts are index shifts of a single sample array.
"""

import logging
import math
from typing import TYPE_CHECKING, Mapping, Optional, Tuple, Union

import numpy as np
from scipy.linalg import matmul_toeplitz

from cphi.errors import DomainError, NotInH2Error
from cphi.hardy.forms import BoundaryForm, PolynomialForm
from cphi.moebius import (
    CAYLEY,
    HyperbolicAutomorphism,
    MoebiusMap,
    cayley_inverse,
)

if TYPE_CHECKING:
    from cphi.hardy.function import H2Function

logger = logging.getLogger(__name__)

BASE_STEP = 0.1
DEFAULT_MARGIN = 60.0
DEFAULT_STEPS = 16
MAX_HALF_WIDTH = 650.0


def _sech(v: np.ndarray) -> np.ndarray:
    e = np.exp(-np.abs(v))
    return 2.0 * e / (1.0 + e * e)


def _circle_weights(b: complex, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """P_b(kappa(+-i e^v)) / (2 pi cosh v) on both branches."""
    out = []
    for sign in (1.0, -1.0):
        zeta = CAYLEY.apply(sign * 1j * np.exp(v))
        kernel = (1.0 - abs(b) ** 2) / np.abs(zeta - b) ** 2
        out.append(kernel * _sech(v) / (2.0 * math.pi))
    return out[0], out[1]


def _kernel_scale(b: complex) -> Tuple[float, float]:
    """Centre (log |w_b|) and relative width of P_b in v-coordinates."""
    w = complex(cayley_inverse(b))
    width = 1.0 if abs(w.imag) <= w.real else w.real / abs(w.imag)
    return math.log(abs(w)), width


def effective_margin(form: BoundaryForm, margin: float) -> float:
    """Half-width in v needed for |F|^2 / cosh v to decay like e^-margin.

    Capped at MAX_HALF_WIDTH, where e^v approaches the top of the floating
    point range; slowly decaying integrands lose the mass beyond the cap.

    Raises:
        NotInH2Error: If the form grows like dist^-1/2 or faster
    """
    g = form.growth
    if g >= 0.5:
        raise NotInH2Error(f"form grows with exponent {g:.6g} >= 1/2 at the circle")
    wanted = margin / (1.0 - 2.0 * g)
    if wanted > MAX_HALF_WIDTH:
        logger.warning("quadrature half-width %.0f capped at %.0f", wanted, MAX_HALF_WIDTH)
    return min(wanted, MAX_HALF_WIDTH)


def _as_form(f: Union["H2Function", BoundaryForm]) -> BoundaryForm:
    if isinstance(f, BoundaryForm):
        return f
    if f.form is not None:
        return f.form
    return PolynomialForm(f.coeffs)


def form_energy(
    form: BoundaryForm,
    a: complex = 0j,
    margin: float = DEFAULT_MARGIN,
) -> float:
    """int |f|^2 P_a dm for a form, in the form's own frame."""
    psi = form.frame if form.frame is not None else MoebiusMap.identity()
    b = complex(psi.inverse().apply(a))
    centre, width = _kernel_scale(b)
    step = min(BASE_STEP, 2.0 / (form.degree + 4), BASE_STEP * width)
    half = effective_margin(form, margin)
    v = np.arange(min(0.0, centre) - half, max(0.0, centre) + half + step, step)
    w_plus, w_minus = _circle_weights(b, v)
    e = np.exp(v)
    total = np.sum(np.abs(form.in_frame(psi, 1j * e)) ** 2 * w_plus)
    total += np.sum(np.abs(form.in_frame(psi, -1j * e)) ** 2 * w_minus)
    return float(total * step)


def form_inner(f: BoundaryForm, g: BoundaryForm, margin: float = DEFAULT_MARGIN) -> complex:
    """<f, g> = int f conj(g) dm for two forms, on the same nodes as :func:`form_energy`.

    Raises:
        NotInH2Error: If the product grows like dist^-1 or faster
    """
    psi = MoebiusMap.identity()
    growth = f.growth + g.growth
    if growth >= 1.0:
        raise NotInH2Error(f"product grows with exponent {growth:.6g} >= 1 at the circle")
    step = min(BASE_STEP, 2.0 / (max(f.degree, g.degree) + 4))
    half = min(margin / (1.0 - growth), MAX_HALF_WIDTH)
    v = np.arange(-half, half + step, step)
    w_plus, w_minus = _circle_weights(0j, v)
    e = np.exp(v)
    total = 0j
    for sign, weight in ((1.0, w_plus), (-1.0, w_minus)):
        w = sign * 1j * e
        total += np.sum(f.in_frame(psi, w) * np.conj(g.in_frame(psi, w)) * weight)
    return complex(total * step)


def poisson_quadratic_form(f: "H2Function", a: complex) -> float:
    """int |f|^2 P_a dm on the truncation, as sum_jk c_j conj(c_k) A_jk.

    A_jk = a^(j-k) for j >= k and conj(a)^(k-j) otherwise: the Fourier
    coefficients of P_a. The Toeplitz product runs through scipy's FFT
    embedding.

    Raises:
        DomainError: If |a| >= 1
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")
    c = np.trim_zeros(np.asarray(f.coeffs, dtype=complex), "b")
    if c.size == 0:
        return 0.0
    powers = np.arange(c.size)
    column = a ** powers
    row = np.conj(a) ** powers
    product = matmul_toeplitz((column, row), np.conj(c))
    return float(np.real(np.dot(c, product)))


def poisson_integral(f: "H2Function", a: complex, margin: float = DEFAULT_MARGIN) -> float:
    """int |f|^2 P_a dm for the function f represents.

    Uses the exact form when f has one, otherwise the truncation (where
    the quadratic form is exact).

    Raises:
        DomainError: If |a| >= 1
    """
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")
    if f.form is None:
        return poisson_quadratic_form(f, a)
    return form_energy(f.form, a, margin)


class OrbitProfile:
    """Samples of one function along an orbit, ready for shifted sums.

    ``plus`` and ``minus`` hold one row per orbit index n in
    [n_min, n_max]: the samples of f o phi_n at the quadrature nodes.
    """

    def __init__(
        self,
        n_min: int,
        n_max: int,
        plus: np.ndarray,
        minus: np.ndarray,
        weight_plus: np.ndarray,
        weight_minus: np.ndarray,
    ):
        self.n_min = n_min
        self.n_max = n_max
        self.plus = plus
        self.minus = minus
        self.weight_plus = weight_plus
        self.weight_minus = weight_minus

    def _rows(self, coefficients: Mapping[int, complex]) -> Tuple[np.ndarray, np.ndarray]:
        idx = np.array(sorted(coefficients), dtype=int)
        if idx.size and (idx[0] < self.n_min or idx[-1] > self.n_max):
            raise DomainError(
                f"orbit indices [{idx[0]}, {idx[-1]}] outside profile "
                f"[{self.n_min}, {self.n_max}]"
            )
        c = np.array([coefficients[n] for n in idx], dtype=complex)
        return idx - self.n_min, c

    def norm(self, coefficients: Mapping[int, complex]) -> float:
        """||sum_n c_n f o phi_n|| for a finite set of orbit indices."""
        rows, c = self._rows(coefficients)
        if rows.size == 0:
            return 0.0
        g_plus = c @ self.plus[rows]
        g_minus = c @ self.minus[rows]
        total = np.dot(np.abs(g_plus) ** 2, self.weight_plus)
        total += np.dot(np.abs(g_minus) ** 2, self.weight_minus)
        return float(math.sqrt(max(total, 0.0)))

    def member_norms(self) -> np.ndarray:
        """||f o phi_n|| for n = n_min..n_max."""
        sq = np.abs(self.plus) ** 2 @ self.weight_plus
        sq += np.abs(self.minus) ** 2 @ self.weight_minus
        return np.sqrt(np.maximum(sq, 0.0))


class DilationQuadrature:
    """Orbit norms of a hyperbolic automorphism by shifted trapezoid sums.

    ``steps`` is the number of nodes per period log(mu); it is raised when
    the integrand needs a finer step (high polynomial degree, or a conjugator
    that moves P_b close to the circle). ``margin`` is the half-width in v
    beyond the orbit window, stretched for forms that blow up at the circle.
    """

    def __init__(
        self,
        phi: HyperbolicAutomorphism,
        steps: int = DEFAULT_STEPS,
        margin: float = DEFAULT_MARGIN,
    ):
        if steps < 1:
            raise DomainError(f"steps must be >= 1, got {steps}")
        self.phi = phi
        self.steps = steps
        self.margin = margin
        self.psi = MoebiusMap.identity() if phi.canonical else phi.conjugator
        self.center = complex(self.psi.inverse().apply(0j))

    def _steps_for(self, form: BoundaryForm) -> int:
        _, width = _kernel_scale(self.center)
        finest = min(BASE_STEP * width, 2.0 / (form.degree + 4))
        return max(self.steps, math.ceil(self.phi.log_mu / finest))

    def profile(
        self,
        f: Union["H2Function", BoundaryForm],
        n_min: int,
        n_max: int,
        margin: Optional[float] = None,
    ) -> OrbitProfile:
        """Sample f along the orbit indices n_min..n_max."""
        if n_max < n_min:
            raise DomainError(f"empty orbit range [{n_min}, {n_max}]")
        form = _as_form(f)
        k = self._steps_for(form)
        h = self.phi.log_mu / k
        centre, _ = _kernel_scale(self.center)
        reach = max(abs(n_min), abs(n_max)) * self.phi.log_mu + abs(centre)
        half_width = min(effective_margin(form, margin or self.margin), 700.0 - reach)
        if half_width <= 0:
            raise DomainError(f"orbit range [{n_min}, {n_max}] exceeds the floating point range")
        # nodes cover both v = 0 and the peak of P_b
        low = math.floor((min(0.0, centre) - half_width) / h)
        high = math.ceil((max(0.0, centre) + half_width) / h)
        width = high - low + 1
        count = n_max - n_min + 1
        u = (np.arange(width + (count - 1) * k) + low + n_min * k) * h
        e = np.exp(u)
        samples_plus = form.in_frame(self.psi, 1j * e)
        samples_minus = form.in_frame(self.psi, -1j * e)
        rows = np.arange(count)[:, None] * k + np.arange(width)[None, :]
        v = (np.arange(width) + low) * h
        weight_plus, weight_minus = _circle_weights(self.center, v)
        logger.debug(
            "orbit profile: n in [%d, %d], %d nodes per period, %d nodes per row",
            n_min, n_max, k, width,
        )
        return OrbitProfile(
            n_min,
            n_max,
            samples_plus[rows],
            samples_minus[rows],
            weight_plus * h,
            weight_minus * h,
        )

    def norms(self, f: Union["H2Function", BoundaryForm], window: int) -> np.ndarray:
        """||f o phi_n|| for n = -window..window."""
        return self.profile(f, -window, window).member_norms()
