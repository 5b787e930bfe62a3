"""Power-series recurrences and the explicit families built on them."""

import logging

import numpy as np

from cphi.errors import NotInH2Error
from cphi.hardy.forms import PowerForm
from cphi.hardy.function import (
    DEFAULT_BUDGET,
    H2Function,
    WeightSpec,
    check_budget,
    from_form,
)
from cphi.moebius import conjugator

logger = logging.getLogger(__name__)


def binomial_series(exponent: complex, n: int, slope: complex = 1.0) -> np.ndarray:
    """First n coefficients of (1 + slope z)^exponent, principal branch.

    b_0 = 1 and b_k = b_{k-1} (exponent - k + 1) / k * slope.
    """
    k = np.arange(1, n)
    ratios = (exponent - k + 1) / k * slope
    return np.concatenate([[1.0 + 0j], np.cumprod(ratios.astype(complex))])


def artanh_series(n: int) -> np.ndarray:
    """First n coefficients of artanh z = z + z^3/3 + z^5/5 + ..."""
    c = np.zeros(n, dtype=complex)
    odd = np.arange(1, n, 2)
    c[odd] = 1.0 / odd
    return c


def series_exp(g: np.ndarray) -> np.ndarray:
    """Coefficients of exp(g(z)) to the length of g.

    From E' = g' E: k e_k = sum_{j=1..k} j g_j e_{k-j}, with e_0 = exp(g_0).
    """
    g = np.asarray(g, dtype=complex)
    n = g.size
    e = np.zeros(n, dtype=complex)
    e[0] = np.exp(g[0])
    jg = np.arange(n) * g
    for k in range(1, n):
        e[k] = np.dot(jg[1 : k + 1], e[k - 1 :: -1]) / k
    return e


def weight_function(w: WeightSpec, budget: int = DEFAULT_BUDGET) -> H2Function:
    """(1 - z)^gamma (1 + z)^delta by binomial series and convolution.

    Its boundary modulus is |z - 1|^gamma |z + 1|^delta.

    Raises:
        BudgetError: If budget is not a power of two
    """
    check_budget(budget)
    left = binomial_series(w.gamma, budget, slope=-1.0)
    right = binomial_series(w.delta, budget, slope=1.0)
    coeffs = np.convolve(left, right)[:budget]
    return from_form(coeffs, PowerForm(w.gamma, w.delta), budget, label=str(w))


def transported_weight(
    w: WeightSpec,
    alpha: complex,
    beta: complex,
    budget: int = DEFAULT_BUDGET,
) -> H2Function:
    """(1 - conj(alpha) z)^gamma (1 - conj(beta) z)^delta.

    The weight of :func:`weight_function` moved to the fixed points
    (alpha, beta); it equals the transported weight up to a unimodular
    constant.
    """
    check_budget(budget)
    psi = conjugator(alpha, beta)
    left = binomial_series(w.gamma, budget, slope=-np.conj(complex(alpha)))
    right = binomial_series(w.delta, budget, slope=-np.conj(complex(beta)))
    coeffs = np.convolve(left, right)[:budget]
    form = PowerForm(w.gamma, w.delta, frame=psi)
    return from_form(coeffs, form, budget, label=f"{w}@({alpha:.6g}, {beta:.6g})")


def eigenfunction_fa(a: complex, budget: int = DEFAULT_BUDGET) -> H2Function:
    """f_a = ((1 + z)/(1 - z))^a, computed as exp(2a artanh z).

    f_a o phi = mu^a f_a for the canonical automorphism with multiplier mu.

    Raises:
        NotInH2Error: If |Re a| >= 1/2
        BudgetError: If budget is not a power of two
    """
    a = complex(a)
    if abs(a.real) >= 0.5:
        raise NotInH2Error(f"f_a is in H^2 only for |Re a| < 1/2, got a = {a}")
    check_budget(budget)
    coeffs = series_exp(2.0 * a * artanh_series(budget))
    return from_form(coeffs, PowerForm(-a, a), budget, label=f"f_{a:.6g}")
