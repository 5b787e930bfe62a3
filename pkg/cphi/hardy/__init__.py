"""H^2 functions: truncated coefficients, exact forms and composition."""

from cphi.hardy.compose import compose, orbit_member
from cphi.hardy.forms import (
    BoundaryForm,
    ComposedForm,
    PolynomialForm,
    PowerForm,
    ProductForm,
    SumForm,
)
from cphi.hardy.function import (
    DEFAULT_BUDGET,
    DEFAULT_OVERSAMPLE,
    UNRESOLVED_RATIO,
    ZERO_THRESHOLD,
    BoundaryGrid,
    H2Function,
    WeightSpec,
    check_budget,
    constant,
    inner,
    is_power_of_two,
    linear_combination,
    monomial,
    multiply,
    norm,
    polynomial,
)
from cphi.hardy.quadrature import (
    DilationQuadrature,
    OrbitProfile,
    form_energy,
    form_inner,
    poisson_integral,
    poisson_quadratic_form,
)
from cphi.hardy.series import (
    artanh_series,
    binomial_series,
    eigenfunction_fa,
    series_exp,
    transported_weight,
    weight_function,
)

__all__ = [
    "compose",
    "orbit_member",
    "BoundaryForm",
    "ComposedForm",
    "PolynomialForm",
    "PowerForm",
    "ProductForm",
    "SumForm",
    "DEFAULT_BUDGET",
    "DEFAULT_OVERSAMPLE",
    "UNRESOLVED_RATIO",
    "ZERO_THRESHOLD",
    "BoundaryGrid",
    "H2Function",
    "WeightSpec",
    "check_budget",
    "constant",
    "inner",
    "is_power_of_two",
    "linear_combination",
    "monomial",
    "multiply",
    "norm",
    "polynomial",
    "DilationQuadrature",
    "OrbitProfile",
    "form_energy",
    "form_inner",
    "poisson_integral",
    "poisson_quadratic_form",
    "artanh_series",
    "binomial_series",
    "eigenfunction_fa",
    "series_exp",
    "transported_weight",
    "weight_function",
]
