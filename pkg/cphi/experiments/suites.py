"""The verification suites behind each subcommand.

Every suite takes a resolved :class:`ExperimentConfig` and returns a
:class:`SuiteResult`: named tables in grid order, a flat summary, and one
boolean per check. A suite passes when every check does.
"""

import cmath
import logging
import math
from typing import Any, Callable, Dict, List

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from cphi.eigen import (
    Annulus,
    EigenReport,
    ScanSummary,
    circle_eigen_partial,
    eigen_scan,
    hp_reduction_scan,
    hypercyclic_check,
    median_convergence,
    one_sided_hp_scan,
    one_sided_route,
    orbit_norms,
    reversed_scan,
    sampled_omegas,
    summarize,
    tail_square_sum,
)
from cphi.eigen.routes import weight_for
from cphi.experiments.config import ExperimentConfig
from cphi.hardy import (
    BoundaryGrid,
    H2Function,
    compose,
    constant,
    poisson_quadratic_form,
    polynomial,
)
from cphi.moebius import HyperbolicAutomorphism, circle_defect, make_canonical, multiplier
from cphi.poisson import (
    boundary_density,
    iterate_bracket_check,
    kernel_grid_check,
    maximal_domination,
    orbit_kernel_sum,
    orbit_sum_grid_check,
)
from cphi.spectrum import (
    SpectrumStatus,
    annulus_residual_map,
    eigen_residual,
    gram_independence,
    lower_bound,
    lower_norm_estimate,
    operator_norm_estimate,
    residual_frame,
    truncated_matrix,
)

logger = logging.getLogger(__name__)

NORM_SLACK = 1e-9
MONOTONE_SLACK = 1e-12
CONJUGATE_FIXED_POINTS = (1j, -1j)


class SuiteResult(BaseModel):
    """Outcome of one subcommand run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: str
    checks: Dict[str, bool] = Field(default_factory=dict, description="Named pass/fail checks")
    summary: Dict[str, Any] = Field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = Field(default_factory=dict, description="Report tables by file stem")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed_checks(self) -> List[str]:
        return sorted(name for name, ok in self.checks.items() if not ok)


def _random_polynomial(rng: np.random.Generator, degree: int, budget: int) -> H2Function:
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return polynomial(c / np.linalg.norm(c), budget=budget)


def _random_hyperbolic(rng: np.random.Generator, mu: float) -> HyperbolicAutomorphism:
    """Fixed points at angles t and t + s with s in [1, 2 pi - 1]."""
    t = rng.uniform(0.0, 2.0 * math.pi)
    s = t + rng.uniform(1.0, 2.0 * math.pi - 1.0)
    return HyperbolicAutomorphism.from_fixed_points(cmath.exp(1j * t), cmath.exp(1j * s), mu)


def _family(config: ExperimentConfig, f: H2Function, phi: HyperbolicAutomorphism, with_members: bool):
    b = config.budgets
    return orbit_norms(
        f,
        phi,
        b.window,
        grid=BoundaryGrid.for_budget(f.budget, b.oversample),
        oversample=b.oversample,
        steps=b.dilation_steps,
        margin=b.dilation_margin,
        with_members=with_members,
    )


def _scan_frame(reports: List[EigenReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports])


def _scan_checks(prefix: str, summary: ScanSummary, config: ExperimentConfig) -> Dict[str, bool]:
    t = config.tolerances
    return {
        f"{prefix}_pass_fraction": summary.pass_fraction >= t.pass_fraction,
        f"{prefix}_exceptional_count": summary.counts["exceptional"] <= t.max_exceptional,
        f"{prefix}_exceptional_isolated": summary.exceptional_isolated,
    }


def norm_identity(config: ExperimentConfig) -> SuiteResult:
    """||f o phi||^2 against the Poisson quadratic form at phi(0) for random f and phi."""
    rng = np.random.default_rng(config.seed)
    grid = BoundaryGrid.for_budget(config.identity_budget, config.budgets.oversample)
    rows = []
    for i in range(config.samples):
        mu = config.mus[i % len(config.mus)]
        degree = int(rng.integers(0, config.degree + 1))
        f = _random_polynomial(rng, degree, config.identity_budget)
        phi = _random_hyperbolic(rng, mu)
        a = complex(phi.map.apply(0j))
        lhs = compose(f, phi.map, grid=grid, oversample=config.budgets.oversample).norm_squared
        rhs = poisson_quadratic_form(f, a)
        rows.append(
            {
                "sample": i,
                "mu": mu,
                "degree": degree,
                "alpha_re": phi.alpha.real,
                "alpha_im": phi.alpha.imag,
                "beta_re": phi.beta.real,
                "beta_im": phi.beta.imag,
                "norm_squared": lhs,
                "quadratic_form": rhs,
                "error": abs(lhs - rhs),
            }
        )
    table = pd.DataFrame(rows)
    worst = float(table["error"].max())
    logger.info("norm identity: %d samples, worst error %.3g", len(rows), worst)
    return SuiteResult(
        command="norm-identity",
        checks={"norm_identity": worst <= config.tolerances.norm_identity},
        summary={"samples": len(rows), "max_error": worst, "tolerance": config.tolerances.norm_identity},
        tables={"samples": table},
    )


def poisson_bounds(config: ExperimentConfig) -> SuiteResult:
    """Kernel bound, orbit-sum bound, iterate bracket and maximal-function domination."""
    p = config.poisson
    kernel = kernel_grid_check(p.rho_count, p.theta_count)
    sums = orbit_sum_grid_check(p.mus, p.sum_theta_count, p.sum_terms, p.exclusion)
    bracket = iterate_bracket_check(p.mus, p.bracket_n_max)

    antipode = []
    for mu in p.mus:
        report = orbit_kernel_sum(mu, math.pi, p.sum_terms)
        exact = mu / (mu - 1.0)
        antipode.append(
            {"mu": mu, "partial_sum": report.partial_sum, "exact": exact, "error": abs(report.partial_sum - exact)}
        )
    antipode_table = pd.DataFrame(antipode)

    phi = config.automorphism.build()
    f = weight_for(phi, config.weight, config.budgets.budget)
    domination = maximal_domination(boundary_density(f), constant=config.tolerances.radial_constant)

    checks = {check.name: check.passed for check in (kernel, sums, bracket)}
    checks["antipodal_sum"] = bool(antipode_table["error"].max() <= config.tolerances.kernel_sum)
    checks["radial_domination"] = bool(domination["dominated"].all())
    summary = {check.name: check.summary() for check in (kernel, sums, bracket)}
    summary["antipodal_max_error"] = float(antipode_table["error"].max())
    summary["radial_max_ratio"] = float(domination["ratio"].max())
    return SuiteResult(
        command="poisson-bounds",
        checks=checks,
        summary=summary,
        tables={
            "kernel_violations": kernel.violations,
            "orbit_sum_violations": sums.violations,
            "bracket_violations": bracket.violations,
            "antipodal_sums": antipode_table,
            "maximal_domination": domination,
        },
    )


def _orbit_frame(family) -> pd.DataFrame:
    frame = pd.DataFrame({"n": family.indices, "norm": family.norms, "discrepancy": family.discrepancies})
    if family.coefficient_norms is not None:
        frame.insert(2, "coefficient_norm", family.coefficient_norms)
    return frame


def orbit(config: ExperimentConfig) -> SuiteResult:
    """Orbit norms of the configured weight, decay exponents and the hypercyclicity check."""
    phi = config.automorphism.build()
    f = weight_for(phi, config.weight, config.budgets.budget)
    family = _family(config, f, phi, with_members=True)
    witness = hypercyclic_check(family, config.tolerances.hypercyclic)
    total, tail = tail_square_sum(family)

    checks = {"norms_finite": bool(np.all(np.isfinite(family.norms)))}
    if config.expect_hypercyclic is not None:
        checks["hypercyclic"] = witness.passed == config.expect_hypercyclic
    summary = {
        "function": f.label,
        "window": family.window,
        "forward_rate": family.forward_rate,
        "backward_rate": family.backward_rate,
        "unresolved_members": len(family.unresolved),
        "square_sum": total,
        "tail_square_sum": tail,
        "hypercyclic": witness.model_dump(),
    }
    return SuiteResult(command="orbit", checks=checks, summary=summary, tables={"orbit_norms": _orbit_frame(family)})


def eigen_scan_suite(config: ExperimentConfig) -> SuiteResult:
    """Laurent eigenfunction scan of the configured annulus, plus any enabled routes."""
    phi = config.automorphism.build()
    b, g, r, t = config.budgets, config.grid, config.routes, config.tolerances
    f = weight_for(phi, config.weight, b.budget)
    family = _family(config, f, phi, with_members=False)
    reports = eigen_scan(family, g.annulus(), g.radial, g.angular, t.residual, t.exceptional_ratio)
    main = summarize(reports, g.shape)

    checks = _scan_checks("scan", main, config)
    summary: Dict[str, Any] = {"function": f.label, "annulus": str(g.annulus()), "scan": main.to_dict()}
    tables = {"scan": _scan_frame(reports)}

    if r.one_sided:
        route = one_sided_route(f, phi, b.window, r.inset)
        checks["one_sided_route"] = route.holds
        summary["one_sided_route"] = route.model_dump(mode="json")
    if r.reversed_epsilon is not None:
        result = reversed_scan(r.reversed_epsilon, phi, b.budget, b.window, g.radial, g.angular, t.residual, r.inset)
        checks.update(_scan_checks("reversed", result.summary, config))
        summary["reversed"] = {"annulus": str(result.annulus), **result.summary.to_dict()}
        tables["reversed_scan"] = _scan_frame(result.reports)
    if r.hp_p is not None:
        results = hp_reduction_scan(
            constant(1.0, b.budget), r.hp_p, phi, r.deltas, b.window, g.radial, g.angular, t.residual, r.inset
        )
        for delta, result in sorted(results.items()):
            key = f"hp_delta_{delta:g}"
            checks.update(_scan_checks(key, result.summary, config))
            summary[key] = {"annulus": str(result.annulus), **result.summary.to_dict()}
            tables[key] = _scan_frame(result.reports)
    if r.one_sided_hp_p is not None:
        result = one_sided_hp_scan(
            r.one_sided_hp_p, phi, budget=b.budget, window=b.window, radial=g.radial,
            angular=g.angular, tol=t.residual, inset=r.inset,
        )
        checks.update(_scan_checks("one_sided_hp", result.summary, config))
        summary["one_sided_hp"] = {"annulus": str(result.annulus), **result.summary.to_dict()}
        tables["one_sided_hp_scan"] = _scan_frame(result.reports)
    return SuiteResult(command="eigen-scan", checks=checks, summary=summary, tables=tables)


def circle_eigen(config: ExperimentConfig) -> SuiteResult:
    """Circle partial sums F_M(omega): Cauchy gap, partial-sum identity and convergence."""
    phi = config.automorphism.build()
    t = config.tolerances
    f = weight_for(phi, config.weight, config.budgets.budget)
    family = _family(config, f, phi, with_members=True)
    total, tail = tail_square_sum(family)

    omegas = sampled_omegas(config.omegas, config.seed)
    m = config.truncations[-1]
    partials = [circle_eigen_partial(family, w, m) for w in omegas]
    partial_table = pd.DataFrame(
        [
            {
                "omega_re": p.omega.real,
                "omega_im": p.omega.imag,
                "M": p.truncation,
                "norm": p.norm,
                "identity_residual": p.identity_residual,
                "convergence_residual": p.convergence_residual,
            }
            for p in partials
        ]
    )
    medians = median_convergence(family, omegas, config.truncations)
    convergence_table = pd.DataFrame({"M": config.truncations, "median_residual": medians})

    worst_identity = float(partial_table["identity_residual"].max())
    checks = {
        "cauchy_gap": tail <= t.cauchy_ratio * total,
        "partial_identity": worst_identity <= t.partial_identity,
        "convergence_decreasing": bool(np.all(np.diff(medians) < 0)),
    }
    summary = {
        "function": f.label,
        "square_sum": total,
        "tail_square_sum": tail,
        "max_identity_residual": worst_identity,
        "median_residuals": dict(zip(map(str, config.truncations), medians)),
    }
    return SuiteResult(
        command="circle-eigen",
        checks=checks,
        summary=summary,
        tables={"partials": partial_table, "convergence": convergence_table, "orbit_norms": _orbit_frame(family)},
    )


def _boundary_lambdas(mu: float, angular: int) -> List[complex]:
    return [
        radius * cmath.exp(2j * math.pi * k / angular)
        for radius in (mu**-0.5, mu**0.5)
        for k in range(angular)
    ]


def _norm_bounds(config: ExperimentConfig) -> pd.DataFrame:
    s, t = config.spectrum, config.tolerances
    rows = []
    for mu in s.mus:
        phi = make_canonical(mu)
        for n in s.dimensions:
            m = truncated_matrix(phi, n)
            rows.append(
                {
                    "mu": mu,
                    "N": n,
                    "norm": operator_norm_estimate(
                        m,
                        method=s.norm_method or "svd",
                        tol=t.power_iteration,
                        max_iterations=t.power_iteration_max,
                        seed=config.seed,
                    ),
                    "upper_bound": math.sqrt(mu),
                    "lower_norm": lower_norm_estimate(m),
                    "lower_bound": lower_bound(m),
                    "aliased_columns": len(m.aliased_columns),
                }
            )
            logger.debug("compression mu=%g N=%d: norm %.12g", mu, n, rows[-1]["norm"])
    return pd.DataFrame(rows)


def spectrum(config: ExperimentConfig) -> SuiteResult:
    """Residual map over the annulus, explicit eigenfunctions, norm bounds and Gram determinants."""
    s, t = config.spectrum, config.tolerances
    phi = config.automorphism.build()
    mu = phi.mu

    lambdas = Annulus.from_exponents(mu, s.map_reach, s.map_reach).grid(s.map_radial, s.map_angular)
    lambdas += _boundary_lambdas(mu, s.map_angular)
    points = annulus_residual_map(phi, lambdas, s.map_budget)
    residual_table = residual_frame(points)
    inside = [p.residual for p in points if p.status == SpectrumStatus.INSIDE]

    explicit = []
    for re, im in s.exponents:
        a = complex(re, im)
        point = eigen_residual(phi, mu**a, s.map_budget)
        explicit.append({"a_re": re, "a_im": im, "lambda_re": point.lam.real, "lambda_im": point.lam.imag, "residual": point.residual})
    explicit_table = pd.DataFrame(explicit)

    bounds = _norm_bounds(config)
    monotone = bounds.groupby("mu", sort=True)["norm"].apply(lambda v: bool(np.all(np.diff(v.to_numpy()) >= -MONOTONE_SLACK)))

    gram = pd.DataFrame(
        [{"a_re": re, "a_im": im, "determinant": gram_independence(phi, complex(re, im), s.map_budget)} for re, im in s.gram_points]
    )

    checks = {
        "map_residual": bool(max(inside, default=0.0) <= t.residual),
        "map_outside_empty": all(math.isnan(p.residual) for p in points if p.status != SpectrumStatus.INSIDE),
        "explicit_residual": bool(explicit_table["residual"].max() <= t.eigen_residual),
        "norm_upper_bound": bool((bounds["norm"] <= bounds["upper_bound"] + NORM_SLACK).all()),
        "norm_monotone": bool(monotone.all()),
        "lower_bound": bool((bounds["lower_norm"] >= bounds["lower_bound"] - MONOTONE_SLACK).all()),
        "gram_independent": bool((gram["determinant"] >= t.gram_floor).all()),
    }
    counts = {status.value: sum(p.status == status for p in points) for status in SpectrumStatus}
    summary = {
        "mu": mu,
        "map_counts": counts,
        "map_max_residual": max(inside, default=None),
        "explicit_max_residual": float(explicit_table["residual"].max()),
        "largest_norm": float(bounds["norm"].max()),
        "smallest_gram_determinant": float(gram["determinant"].min()),
    }
    return SuiteResult(
        command="spectrum",
        checks=checks,
        summary=summary,
        tables={"residual_map": residual_table, "explicit": explicit_table, "norm_bounds": bounds, "gram": gram},
    )


def conjugacy(config: ExperimentConfig) -> SuiteResult:
    """Transport to other fixed points: multiplier, fixed points and the eigen-scan pass rate."""
    spec = config.automorphism
    mu = spec.mu
    if spec.canonical:
        alpha, beta = CONJUGATE_FIXED_POINTS
        phi = HyperbolicAutomorphism.from_fixed_points(alpha, beta, mu)
    else:
        phi = spec.build()
    canonical = make_canonical(mu)
    t, g = config.tolerances, config.grid

    k = multiplier(phi.map)
    fixed_error = max(abs(complex(phi.map.apply(phi.alpha)) - phi.alpha), abs(complex(phi.map.apply(phi.beta)) - phi.beta))

    scans = {}
    for label, psi in (("canonical", canonical), ("conjugate", phi)):
        f = weight_for(psi, config.weight, config.budgets.budget)
        family = _family(config, f, psi, with_members=False)
        reports = eigen_scan(family, g.annulus(), g.radial, g.angular, t.residual, t.exceptional_ratio)
        scans[label] = (reports, summarize(reports, g.shape))

    checks = {
        "multiplier": abs(k - mu) <= t.multiplier,
        "fixed_points": fixed_error <= t.multiplier,
    }
    for label, (_, summary) in scans.items():
        checks.update(_scan_checks(label, summary, config))
    summary = {
        "alpha": [phi.alpha.real, phi.alpha.imag],
        "beta": [phi.beta.real, phi.beta.imag],
        "multiplier": [k.real, k.imag],
        "multiplier_error": abs(k - mu),
        "fixed_point_error": fixed_error,
        "circle_defect": circle_defect(phi),
        **{label: s.to_dict() for label, (_, s) in scans.items()},
    }
    return SuiteResult(
        command="conjugacy",
        checks=checks,
        summary=summary,
        tables={f"{label}_scan": _scan_frame(reports) for label, (reports, _) in scans.items()},
    )


SUITES: Dict[str, Callable[[ExperimentConfig], SuiteResult]] = {
    "norm-identity": norm_identity,
    "poisson-bounds": poisson_bounds,
    "orbit": orbit,
    "eigen-scan": eigen_scan_suite,
    "circle-eigen": circle_eigen,
    "spectrum": spectrum,
    "conjugacy": conjugacy,
}
