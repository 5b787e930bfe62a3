"""Experiment configs, the suites behind each subcommand and their reports."""

from cphi.experiments.config import (
    SCHEMA_VERSION,
    AutomorphismSpec,
    BudgetSpec,
    ExperimentConfig,
    GridSpec,
    PoissonSpec,
    RouteSpec,
    SpectrumSpec,
    ToleranceSpec,
)
from cphi.experiments.reports import ReportWriter, SummaryRenderer, plain, split_complex
from cphi.experiments.suites import SUITES, SuiteResult

__all__ = [
    "SCHEMA_VERSION",
    "AutomorphismSpec",
    "BudgetSpec",
    "ExperimentConfig",
    "GridSpec",
    "PoissonSpec",
    "RouteSpec",
    "SpectrumSpec",
    "ToleranceSpec",
    "ReportWriter",
    "SummaryRenderer",
    "plain",
    "split_complex",
    "SUITES",
    "SuiteResult",
]
