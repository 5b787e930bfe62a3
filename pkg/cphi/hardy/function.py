"""Truncated Taylor representation of H^2 functions.

An :class:`H2Function` keeps the first ``budget`` Taylor coefficients of a
function together with an estimate of the mass it leaves out, and, when it
is known, the exact form it was computed from.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cphi.errors import BudgetError
from cphi.hardy.forms import BoundaryForm, PolynomialForm, ProductForm, SumForm
from cphi.hardy.quadrature import form_energy

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 4096
DEFAULT_OVERSAMPLE = 4
ZERO_THRESHOLD = 1e-12
UNRESOLVED_RATIO = 1e-6


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def check_budget(n: int, name: str = "budget") -> int:
    """Return n if it is a power of two.

    Raises:
        BudgetError: Otherwise
    """
    if not is_power_of_two(n):
        raise BudgetError(f"{name} must be a power of two, got {n}")
    return int(n)


class WeightSpec(BaseModel):
    """Exponents of the weight (1 - z)^gamma (1 + z)^delta."""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(0.0, ge=0.0, le=1.5, description="Exponent at the attractive fixed point")
    delta: float = Field(0.0, ge=0.0, le=1.5, description="Exponent at the repulsive fixed point")

    def __str__(self) -> str:
        return f"weight({self.gamma:g}, {self.delta:g})"


class BoundaryGrid(BaseModel):
    """M equispaced nodes on the unit circle with weight 1/M each."""

    model_config = ConfigDict(frozen=True)

    size: int = Field(..., description="Number of nodes, a power of two")

    @field_validator("size")
    @classmethod
    def validate_size(cls, v: int) -> int:
        return check_budget(v, "grid size")

    @classmethod
    def for_budget(cls, budget: int, oversample: int = DEFAULT_OVERSAMPLE) -> "BoundaryGrid":
        return cls(size=check_budget(budget) * check_budget(oversample, "oversample"))

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    def quadrature(self, values: np.ndarray) -> complex:
        """Discrete mean of boundary values over the grid."""
        return complex(np.mean(np.asarray(values, dtype=complex)))


class H2Function(BaseModel):
    """First ``budget`` Taylor coefficients of an H^2 function.

    ``tail_energy`` estimates sum_{k >= budget} |c_k|^2 plus aliasing picked
    up on the way; a function whose tail exceeds ``UNRESOLVED_RATIO`` times
    its norm squared is reported as unresolved. ``form`` is not serialized.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray = Field(..., description="Taylor coefficients c_0..c_{N-1}")
    budget: int = Field(..., description="Coefficient budget N, a power of two")
    tail_energy: float = Field(0.0, ge=0.0, description="Estimated truncated mass")
    form: Optional[BoundaryForm] = Field(None, exclude=True, description="Exact form, if known")
    label: str = Field("", description="Human-readable description")

    @field_validator("budget")
    @classmethod
    def validate_budget(cls, v: int) -> int:
        return check_budget(v)

    @model_validator(mode="before")
    @classmethod
    def pad_coefficients(cls, data: Any) -> Any:
        """Pad or check the coefficient array against the budget."""
        if not isinstance(data, dict):
            return data
        budget = data.get("budget")
        coeffs = np.asarray(data.get("coeffs", []), dtype=complex).ravel()
        if isinstance(budget, (int, np.integer)) and coeffs.size < budget:
            coeffs = np.concatenate([coeffs, np.zeros(budget - coeffs.size, dtype=complex)])
        if isinstance(budget, (int, np.integer)) and coeffs.size > budget:
            raise BudgetError(f"{coeffs.size} coefficients exceed the budget {budget}")
        coeffs.setflags(write=False)
        return {**data, "coeffs": coeffs}

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared))

    def is_resolved(self, ratio: float = UNRESOLVED_RATIO) -> bool:
        return self.tail_energy <= ratio * max(self.norm_squared, np.finfo(float).tiny)

    def is_zero(self, scale: float = 1.0, threshold: float = ZERO_THRESHOLD) -> bool:
        return self.norm <= threshold * scale

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def evaluate(self, z, exact: bool = False):
        """Value of the truncated series at z (|z| <= 1), or of the form with ``exact``."""
        if exact and self.form is not None:
            return self.form(z)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def truncated(self) -> "H2Function":
        """The same coefficients with the form dropped."""
        return self.model_copy(update={"form": None})

    def scaled(self, c: complex) -> "H2Function":
        c = complex(c)
        form = SumForm([(c, self.form)]) if self.form is not None else None
        return H2Function(
            coeffs=c * self.coeffs,
            budget=self.budget,
            tail_energy=abs(c) ** 2 * self.tail_energy,
            form=form,
            label=self.label,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a dictionary with coefficients as [re, im] pairs.

        Returns:
            Dictionary with deterministically ordered keys
        """
        return {
            "budget": self.budget,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs[: self.degree + 1]],
            "label": self.label,
            "tail_energy": self.tail_energy,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "H2Function":
        """Create a function from :meth:`to_dict` output (without a form)."""
        coeffs = np.array([complex(re, im) for re, im in data.get("coeffs", [])], dtype=complex)
        return cls(
            coeffs=coeffs,
            budget=data["budget"],
            tail_energy=data.get("tail_energy", 0.0),
            label=data.get("label", ""),
        )

    def fingerprint(self) -> str:
        """SHA-256 of the deterministic JSON representation."""
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()

    def save(self, path: Path) -> None:
        """Save to a JSON file.

        Args:
            path: Path to save the function
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path: Path) -> "H2Function":
        """Load a function saved by :meth:`save`."""
        with open(path, "r") as f:
            return cls.from_dict(json.load(f))

    def __str__(self) -> str:
        name = self.label or "H2Function"
        return f"{name}[N={self.budget}, norm={self.norm:.6g}, tail={self.tail_energy:.3g}]"


def exact_tail(coeffs: np.ndarray, form: BoundaryForm) -> float:
    """||f||^2 from the form minus the retained coefficient energy."""
    kept = float(np.vdot(coeffs, coeffs).real)
    return max(form_energy(form) - kept, 0.0)


def from_form(
    coeffs: np.ndarray,
    form: BoundaryForm,
    budget: int,
    label: str = "",
) -> H2Function:
    """Wrap truncated coefficients of a known form, measuring the tail."""
    coeffs = np.asarray(coeffs, dtype=complex)[:budget]
    f = H2Function(
        coeffs=coeffs,
        budget=budget,
        tail_energy=exact_tail(coeffs, form),
        form=form,
        label=label,
    )
    if not f.is_resolved():
        logger.warning("%s is unresolved at budget %d (tail %.3g)", label or "function", budget, f.tail_energy)
    return f


def polynomial(coeffs: Sequence[complex], budget: int = DEFAULT_BUDGET, label: str = "") -> H2Function:
    """A polynomial, represented exactly.

    Raises:
        BudgetError: If the degree does not fit in the budget
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    return H2Function(coeffs=coeffs, budget=budget, form=PolynomialForm(coeffs), label=label)


def monomial(k: int, budget: int = DEFAULT_BUDGET) -> H2Function:
    """z^k."""
    check_budget(budget)
    if not 0 <= k < budget:
        raise BudgetError(f"monomial degree {k} outside [0, {budget})")
    c = np.zeros(k + 1, dtype=complex)
    c[k] = 1.0
    return polynomial(c, budget, label=f"z^{k}")


def constant(value: complex = 1.0, budget: int = DEFAULT_BUDGET) -> H2Function:
    return polynomial([value], budget, label=f"{complex(value):g}")


def norm(f: H2Function) -> float:
    """l^2 norm of the coefficients."""
    return f.norm


def _aligned(f: H2Function, g: H2Function) -> Tuple[np.ndarray, np.ndarray]:
    n = max(f.budget, g.budget)
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[: f.budget] = f.coeffs
    b[: g.budget] = g.coeffs
    return a, b


def inner(f: H2Function, g: H2Function) -> complex:
    """<f, g> = sum f_k conj(g_k)."""
    a, b = _aligned(f, g)
    return complex(np.vdot(b, a))


def linear_combination(
    terms: Sequence[Tuple[complex, H2Function]],
    label: str = "",
) -> H2Function:
    """sum_i c_i f_i, with a sum form when every term has a form."""
    if not terms:
        raise BudgetError("empty linear combination")
    budget = max(f.budget for _, f in terms)
    coeffs = np.zeros(budget, dtype=complex)
    tail = 0.0
    for c, f in terms:
        coeffs[: f.budget] += complex(c) * f.coeffs
        tail += abs(c) * np.sqrt(f.tail_energy)
    forms = [(c, f.form) for c, f in terms]
    form = SumForm(forms) if all(f is not None for _, f in forms) else None
    return H2Function(coeffs=coeffs, budget=budget, tail_energy=tail**2, form=form, label=label)


def multiply(f: H2Function, g: H2Function) -> H2Function:
    """Coefficient convolution truncated to the larger budget.

    The product of two truncations is exact below the budget. The tail is
    measured from the product form when both factors have one; otherwise
    the discarded convolution energy plus the factors' tails scaled by the
    other factor's norm.
    """
    budget = max(f.budget, g.budget)
    a = f.coeffs[: f.degree + 1]
    b = g.coeffs[: g.degree + 1]
    full = np.convolve(a, b)
    coeffs = full[:budget]
    form = None
    if f.form is not None and g.form is not None:
        form = ProductForm([f.form, g.form])
        tail = exact_tail(coeffs, form)
    else:
        overflow = float(np.vdot(full[budget:], full[budget:]).real)
        tail = overflow + f.norm_squared * g.tail_energy + g.norm_squared * f.tail_energy
    label = f"{f.label}*{g.label}" if f.label and g.label else ""
    out = H2Function(coeffs=coeffs, budget=budget, tail_energy=tail, form=form, label=label)
    if not out.is_resolved():
        logger.warning("product %s is unresolved (tail %.3g)", label or "", tail)
    return out
