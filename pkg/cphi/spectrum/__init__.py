"""Finite sections, norm bounds and eigenvalue residual maps."""

from cphi.spectrum.compression import (
    CompressionMatrix,
    lower_bound,
    lower_norm_estimate,
    operator_norm_estimate,
    truncated_matrix,
)
from cphi.spectrum.residuals import (
    ResidualPoint,
    SpectrumStatus,
    annulus_residual_map,
    classify_lambda,
    eigen_exponent,
    eigen_residual,
    gram_independence,
    residual_frame,
)

__all__ = [
    "CompressionMatrix",
    "lower_bound",
    "lower_norm_estimate",
    "operator_norm_estimate",
    "truncated_matrix",
    "ResidualPoint",
    "SpectrumStatus",
    "annulus_residual_map",
    "classify_lambda",
    "eigen_exponent",
    "eigen_residual",
    "gram_independence",
    "residual_frame",
]
