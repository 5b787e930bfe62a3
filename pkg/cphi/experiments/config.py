"""Experiment configuration documents.

An experiment config is a JSON document with a mandatory ``schema_version``.
Sections left out of the document, and budget or tolerance fields left as
null, are filled from the workbench settings (:class:`cphi.config.CphiConfig`)
by :meth:`ExperimentConfig.resolve`.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cphi.config import CphiConfig
from cphi.eigen import Annulus
from cphi.hardy import WeightSpec, is_power_of_two
from cphi.moebius import HyperbolicAutomorphism, make_canonical

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

Pair = Tuple[float, float]


def _power_of_two(v: Optional[int], name: str) -> Optional[int]:
    # ValueError, not BudgetError: pydantic reports it as a validation error
    if v is not None and not is_power_of_two(v):
        raise ValueError(f"{name} must be a power of two, got {v}")
    return v


def _multipliers(v: List[float]) -> List[float]:
    if not v:
        raise ValueError("mus must not be empty")
    for mu in v:
        if not mu > 1.0:
            raise ValueError(f"every mu must be > 1, got {mu}")
    return v


class AutomorphismSpec(BaseModel):
    """The automorphism: a multiplier, optionally with fixed points as [re, im] pairs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mu: float = Field(2.0, description="Multiplier, > 1")
    alpha: Optional[Pair] = Field(None, description="Attractive fixed point")
    beta: Optional[Pair] = Field(None, description="Repulsive fixed point")

    @field_validator("mu")
    @classmethod
    def validate_mu(cls, v: float) -> float:
        if not v > 1.0:
            raise ValueError(f"mu must be > 1, got {v}")
        return v

    @model_validator(mode="after")
    def check_fixed_points(self) -> "AutomorphismSpec":
        if (self.alpha is None) != (self.beta is None):
            raise ValueError("alpha and beta must be given together")
        if self.alpha is not None:
            for name, p in (("alpha", self.alpha), ("beta", self.beta)):
                if abs(abs(complex(*p)) - 1.0) > 1e-9:
                    raise ValueError(f"{name} must lie on the unit circle, got {p}")
            if abs(complex(*self.alpha) - complex(*self.beta)) < 1e-9:
                raise ValueError("alpha and beta must be distinct")
        return self

    @property
    def canonical(self) -> bool:
        return self.alpha is None

    def build(self) -> HyperbolicAutomorphism:
        if self.canonical:
            return make_canonical(self.mu)
        return HyperbolicAutomorphism.from_fixed_points(complex(*self.alpha), complex(*self.beta), self.mu)


class BudgetSpec(BaseModel):
    """Coefficient budget, grid oversampling and orbit window."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    budget: Optional[int] = Field(None, description="Coefficient budget N")
    oversample: Optional[int] = Field(None, description="Grid size / N")
    window: int = Field(60, ge=1, description="Orbit window half-width M")
    dilation_steps: Optional[int] = Field(None, ge=1, description="Quadrature nodes per period")
    dilation_margin: Optional[float] = Field(None, gt=0.0, description="Quadrature half-width beyond the window")

    @field_validator("budget")
    @classmethod
    def validate_budget(cls, v: Optional[int]) -> Optional[int]:
        return _power_of_two(v, "budget")

    @field_validator("oversample")
    @classmethod
    def validate_oversample(cls, v: Optional[int]) -> Optional[int]:
        return _power_of_two(v, "oversample")


class GridSpec(BaseModel):
    """Polar lambda-grid on an annulus."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    radial: int = Field(16, ge=1)
    angular: int = Field(16, ge=1)
    inner_radius: float = Field(0.9, gt=0.0)
    outer_radius: float = Field(1.1, gt=0.0)

    @model_validator(mode="after")
    def check_order(self) -> "GridSpec":
        if self.outer_radius <= self.inner_radius:
            raise ValueError(f"outer_radius {self.outer_radius} must exceed inner_radius {self.inner_radius}")
        return self

    def annulus(self) -> Annulus:
        return Annulus(inner_radius=self.inner_radius, outer_radius=self.outer_radius)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.radial, self.angular


class ToleranceSpec(BaseModel):
    """Pass thresholds. Null fields take the workbench settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    residual: Optional[float] = Field(None, gt=0.0, description="Laurent residual tolerance")
    exceptional_ratio: Optional[float] = Field(None, gt=0.0)
    power_iteration: Optional[float] = Field(None, gt=0.0, description="Power iteration stopping tolerance")
    power_iteration_max: Optional[int] = Field(None, ge=1, description="Power iteration step limit")
    radial_constant: Optional[float] = Field(None, gt=0.0)
    norm_identity: float = Field(1e-8, gt=0.0, description="|norm^2 - quadratic form|")
    partial_identity: float = Field(1e-7, gt=0.0, description="Circle partial-sum identity")
    cauchy_ratio: float = Field(1e-3, gt=0.0, description="Tail / partial square sum")
    hypercyclic: float = Field(1e-3, gt=0.0)
    pass_fraction: float = Field(0.99, gt=0.0, le=1.0)
    max_exceptional: int = Field(3, ge=0)
    multiplier: float = Field(1e-10, gt=0.0)
    kernel_sum: float = Field(1e-10, gt=0.0, description="Orbit sum at theta = pi")
    eigen_residual: float = Field(1e-6, gt=0.0, description="Explicit eigenfunction residual")
    gram_floor: float = Field(1e-2, gt=0.0)


class PoissonSpec(BaseModel):
    """Grids of the kernel and orbit-sum checks."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rho_count: int = Field(1024, ge=2)
    theta_count: int = Field(1024, ge=2)
    sum_theta_count: int = Field(512, ge=2)
    sum_terms: int = Field(200, ge=1)
    exclusion: float = Field(1e-3, gt=0.0)
    bracket_n_max: int = Field(60, ge=1)
    mus: List[float] = Field(default_factory=lambda: [1.5, 2.0, 4.0, 10.0])

    @field_validator("mus")
    @classmethod
    def validate_mus(cls, v: List[float]) -> List[float]:
        return _multipliers(v)


class RouteSpec(BaseModel):
    """Additional eigen-scan routes, all off by default."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    one_sided: bool = Field(False, description="One-sided route for the configured weight")
    reversed_epsilon: Optional[float] = Field(None, gt=0.0, le=1.0)
    hp_p: Optional[float] = Field(None, description="Exponent of the H^p reduction")
    deltas: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.15, 0.2])
    one_sided_hp_p: Optional[float] = Field(None)
    inset: float = Field(0.05, ge=0.0, lt=0.5)

    @field_validator("hp_p")
    @classmethod
    def validate_hp_p(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 2.0:
            raise ValueError(f"hp_p must exceed 2, got {v}")
        return v

    @field_validator("one_sided_hp_p")
    @classmethod
    def validate_one_sided_p(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v >= 4.0 / 3.0:
            raise ValueError(f"one_sided_hp_p must be at least 4/3, got {v}")
        return v


class SpectrumSpec(BaseModel):
    """Residual map grid, compression sizes and Gram sample points."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    map_radial: int = Field(6, ge=1)
    map_angular: int = Field(16, ge=1)
    map_reach: float = Field(0.75, gt=0.0, description="Map covers A(mu^-reach, mu^reach)")
    map_budget: int = Field(64, description="Budget of the f_a used for residuals")
    dimensions: List[int] = Field(default_factory=lambda: [64, 128, 256, 512, 1024])
    gram_points: List[Pair] = Field(default_factory=lambda: [(0.0, 0.0), (0.2, 0.3), (-0.35, -0.1)])
    exponents: List[Pair] = Field(
        default_factory=lambda: [(0.3, 0.0), (-0.3, 0.0), (0.2, 1.1), (-0.2, 1.1), (0.189, 0.0)],
        description="Exponents a of explicit eigenfunctions f_a",
    )
    mus: List[float] = Field(default_factory=lambda: [1.5, 2.0, 4.0, 10.0])
    norm_method: Optional[Literal["svd", "power"]] = Field(None, description="Compression norm estimator")

    @field_validator("mus")
    @classmethod
    def validate_mus(cls, v: List[float]) -> List[float]:
        return _multipliers(v)

    @field_validator("map_budget")
    @classmethod
    def validate_map_budget(cls, v: int) -> int:
        return _power_of_two(v, "map_budget")

    @field_validator("dimensions")
    @classmethod
    def validate_dimensions(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("dimensions must not be empty")
        for d in v:
            _power_of_two(d, "dimension")
        return sorted(v)

    @field_validator("gram_points", "exponents")
    @classmethod
    def validate_real_parts(cls, v: List[Pair]) -> List[Pair]:
        for re, _ in v:
            if abs(re) >= 0.5:
                raise ValueError(f"real parts must lie in (-1/2, 1/2), got {re}")
        return v


class ExperimentConfig(BaseModel):
    """One experiment run, shared by every subcommand."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: int = Field(..., description="Document schema version")
    automorphism: AutomorphismSpec = Field(default_factory=AutomorphismSpec)
    weight: WeightSpec = Field(default_factory=lambda: WeightSpec(gamma=0.75, delta=0.75))
    budgets: BudgetSpec = Field(default_factory=BudgetSpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    tolerances: ToleranceSpec = Field(default_factory=ToleranceSpec)
    poisson: PoissonSpec = Field(default_factory=PoissonSpec)
    routes: RouteSpec = Field(default_factory=RouteSpec)
    spectrum: SpectrumSpec = Field(default_factory=SpectrumSpec)
    mus: List[float] = Field(default_factory=lambda: [1.5, 2.0, 4.0], description="Multipliers of norm-identity")
    samples: int = Field(200, ge=1, description="Random polynomials in norm-identity")
    degree: int = Field(64, ge=0, description="Largest random polynomial degree")
    identity_budget: int = Field(2048, description="Budget of the norm-identity compositions")
    truncations: List[int] = Field(default_factory=lambda: [10, 20, 40])
    omegas: int = Field(64, ge=1, description="Sampled omegas for circle-eigen")
    expect_hypercyclic: Optional[bool] = None
    seed: int = 0
    out_dir: Optional[str] = None

    @field_validator("schema_version")
    @classmethod
    def validate_schema_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {v}, expected {SCHEMA_VERSION}")
        return v

    @field_validator("mus")
    @classmethod
    def validate_mus(cls, v: List[float]) -> List[float]:
        return _multipliers(v)

    @field_validator("identity_budget")
    @classmethod
    def validate_identity_budget(cls, v: int) -> int:
        return _power_of_two(v, "identity_budget")

    @field_validator("truncations")
    @classmethod
    def validate_truncations(cls, v: List[int]) -> List[int]:
        if not v or any(m < 1 for m in v):
            raise ValueError(f"truncations must be positive, got {v}")
        return sorted(v)

    @model_validator(mode="after")
    def check_sizes(self) -> "ExperimentConfig":
        if self.degree >= self.identity_budget:
            raise ValueError(f"degree {self.degree} does not fit identity_budget {self.identity_budget}")
        if self.truncations[-1] > self.budgets.window:
            raise ValueError(f"largest truncation {self.truncations[-1]} exceeds window {self.budgets.window}")
        return self

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Read and validate a JSON document.

        Raises:
            ValueError: If the file is not JSON or fails validation
        """
        with open(path, "r") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a JSON object")
        return cls.model_validate(data)

    @classmethod
    def default(cls) -> "ExperimentConfig":
        return cls(schema_version=SCHEMA_VERSION)

    def resolve(self, settings: CphiConfig) -> "ExperimentConfig":
        """Fill null budget and tolerance fields from the workbench settings."""
        budgets = self.budgets.model_copy(
            update={
                "budget": self.budgets.budget or settings.numerics.budget,
                "oversample": self.budgets.oversample or settings.numerics.oversample,
                "dilation_steps": self.budgets.dilation_steps or settings.numerics.dilation_steps,
                "dilation_margin": self.budgets.dilation_margin or settings.numerics.dilation_margin,
            }
        )
        v = settings.verification
        t = self.tolerances
        tolerances = t.model_copy(
            update={
                "residual": t.residual or v.residual_tol,
                "exceptional_ratio": t.exceptional_ratio or v.exceptional_ratio,
                "power_iteration": t.power_iteration or v.power_iteration_tol,
                "power_iteration_max": t.power_iteration_max or v.power_iteration_max,
                "radial_constant": t.radial_constant or v.radial_constant,
            }
        )
        spectrum = self.spectrum.model_copy(
            update={"norm_method": self.spectrum.norm_method or v.norm_method}
        )
        return self.model_copy(
            update={
                "budgets": budgets,
                "tolerances": tolerances,
                "spectrum": spectrum,
                "out_dir": self.out_dir or settings.reports.out_dir,
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def fingerprint(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()

    def plan(self, command: str) -> Dict[str, Any]:
        """Budgets and grid sizes a subcommand would use, for ``--dry-run``."""
        plan: Dict[str, Any] = {
            "command": command,
            "mu": self.automorphism.mu,
            "budget": self.budgets.budget,
            "oversample": self.budgets.oversample,
            "seed": self.seed,
        }
        if command == "norm-identity":
            plan.update(samples=self.samples, degree=self.degree, budget=self.identity_budget, mus=self.mus)
        elif command == "poisson-bounds":
            plan.update(
                kernel_grid=[self.poisson.rho_count, self.poisson.theta_count],
                sum_thetas=self.poisson.sum_theta_count,
                sum_terms=self.poisson.sum_terms,
                mus=self.poisson.mus,
            )
        elif command in ("orbit", "circle-eigen"):
            plan.update(window=self.budgets.window, weight=str(self.weight))
            if command == "circle-eigen":
                plan.update(truncations=self.truncations, omegas=self.omegas)
        elif command in ("eigen-scan", "conjugacy"):
            plan.update(
                window=self.budgets.window,
                weight=str(self.weight),
                grid=list(self.grid.shape),
                annulus=str(self.grid.annulus()),
            )
        elif command == "spectrum":
            plan.update(
                residual_grid=[self.spectrum.map_radial, self.spectrum.map_angular],
                map_budget=self.spectrum.map_budget,
                dimensions=self.spectrum.dimensions,
                mus=self.spectrum.mus,
                norm_method=self.spectrum.norm_method,
            )
        return plan
