"""Main entry point for the cphi CLI."""
import json
import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from cphi import __version__
from cphi.config import ConfigurationError, get_config
from cphi.errors import CphiError
from cphi.experiments import SUITES, ExperimentConfig, ReportWriter

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(verbose: bool):
    """One stream handler on the package logger: WARNING, or DEBUG when verbose."""
    root = logging.getLogger("cphi")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _load_experiment(config_path, settings) -> ExperimentConfig:
    if config_path is None:
        return ExperimentConfig.default().resolve(settings)
    return ExperimentConfig.load(Path(config_path)).resolve(settings)


def run(command: str, config_path, out, seed, dry_run: bool, verbose: bool) -> int:
    """Run one suite and write its reports.

    Returns:
        0 when every check passes, 1 on a violation, 2 on a config error
    """
    try:
        settings = get_config()
    except ConfigurationError as e:
        click.echo(f"❌ Configuration error: {e}", err=True)
        return EXIT_USAGE
    configure_logging(verbose or settings.reports.verbose)

    try:
        config = _load_experiment(config_path, settings)
    except (ValidationError, ValueError, OSError) as e:
        click.echo(f"❌ Invalid experiment config: {e}", err=True)
        return EXIT_USAGE
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if out is not None:
        updates["out_dir"] = str(out)
    config = config.model_copy(update=updates)

    if dry_run:
        click.echo(json.dumps(config.plan(command), indent=2, sort_keys=True))
        return EXIT_PASS

    try:
        result = SUITES[command](config)
    except CphiError as e:
        click.echo(f"❌ {command} failed: {e}", err=True)
        return EXIT_VIOLATION

    writer = ReportWriter(Path(config.out_dir), settings.reports.float_digits)
    run_dir = writer.write(result, config)
    if result.passed:
        click.echo(f"✓ {command}: all {len(result.checks)} checks pass ({run_dir})")
        return EXIT_PASS
    click.echo(f"✗ {command}: failed {', '.join(result.failed_checks)} ({run_dir})")
    return EXIT_VIOLATION


SUITE_OPTIONS = (
    click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Experiment config (JSON)"),
    click.option("--out", type=click.Path(file_okay=False), help="Report directory"),
    click.option("--seed", type=int, default=None, help="Seed for randomized suites"),
    click.option("--dry-run", is_flag=True, help="Validate the config and print the planned budgets"),
    click.option("--verbose", "-v", is_flag=True, help="Debug logging"),
)


def suite_options(func):
    """Attach the options shared by every suite subcommand."""
    for option in reversed(SUITE_OPTIONS):
        func = option(func)
    return func


@click.group()
@click.version_option(__version__, prog_name="cphi")
def cli():
    """cphi - hyperbolic composition operators on H^2"""
    pass


@cli.command("norm-identity")
@suite_options
def norm_identity(**options):
    """Change-of-variable identity for random polynomials and maps"""
    raise SystemExit(run("norm-identity", **options))


@cli.command("poisson-bounds")
@suite_options
def poisson_bounds(**options):
    """Poisson kernel, orbit-sum and maximal-function bounds on grids"""
    raise SystemExit(run("poisson-bounds", **options))


@cli.command("orbit")
@suite_options
def orbit(**options):
    """Orbit norms, decay exponents and the hypercyclicity check"""
    raise SystemExit(run("orbit", **options))


@cli.command("eigen-scan")
@suite_options
def eigen_scan(**options):
    """Laurent eigenfunction scan of an annulus"""
    raise SystemExit(run("eigen-scan", **options))


@cli.command("circle-eigen")
@suite_options
def circle_eigen(**options):
    """Circle partial sums for unimodular eigenvalues"""
    raise SystemExit(run("circle-eigen", **options))


@cli.command("spectrum")
@suite_options
def spectrum(**options):
    """Residual map, explicit eigenfunctions and norm bounds"""
    raise SystemExit(run("spectrum", **options))


@cli.command("conjugacy")
@suite_options
def conjugacy(**options):
    """Transport of the canonical automorphism to other fixed points"""
    raise SystemExit(run("conjugacy", **options))


@cli.group()
def config():
    """Manage workbench settings"""
    pass


@config.command("init")
@click.option("--global", "is_global", is_flag=True, help="Create global config (~/.cphi/)")
@click.option("--force", is_flag=True, help="Overwrite existing config")
def config_init(is_global: bool, force: bool):
    """Initialize configuration file"""
    import shutil

    if is_global:
        config_path = Path.home() / ".cphi" / "config.toml"
    else:
        config_path = Path.cwd() / ".cphi" / "config.toml"

    if config_path.exists() and not force:
        click.echo(f"Configuration already exists at {config_path}")
        click.echo("Use --force to overwrite.")
        return

    template_path = Path(__file__).parent / "config_template.toml"
    config_path.parent.mkdir(parents=True, exist_ok=True)
    shutil.copy(template_path, config_path)

    click.echo(f"✓ Created configuration at {config_path}")
    click.echo("\nEdit the file to configure:")
    click.echo("  - Coefficient budgets and quadrature")
    click.echo("  - Verification tolerances")
    click.echo("  - Report directory")
    click.echo("\nOr set environment variables:")
    click.echo("  - CPHI_BUDGET=8192")
    click.echo("  - CPHI_OUT_DIR=reports")


@config.command("show")
@click.option("--all", "show_all", is_flag=True, help="Show all config sources")
def config_show(show_all: bool):
    """Display current configuration"""
    import os

    try:
        settings = get_config()
    except ConfigurationError as e:
        click.echo(f"❌ Error loading configuration: {e}", err=True)
        raise SystemExit(EXIT_USAGE)

    n, v, r = settings.numerics, settings.verification, settings.reports
    click.echo("\n📋 Current Configuration\n")
    click.echo("🔢 Numerics:")
    click.echo(f"   Budget:          {n.budget}")
    click.echo(f"   Oversample:      {n.oversample}")
    click.echo(f"   Quadrature:      {n.dilation_steps} steps, margin {n.dilation_margin:g}")

    click.echo("\n📐 Verification:")
    click.echo(f"   Radial constant: {v.radial_constant:g}")
    click.echo(f"   Residual tol:    {v.residual_tol:g}")
    click.echo(f"   Exceptional:     {v.exceptional_ratio:g}")
    click.echo(f"   Norm method:     {v.norm_method}")
    click.echo(f"   Power iteration: tol {v.power_iteration_tol:g}, max {v.power_iteration_max}")

    click.echo("\n📁 Reports:")
    click.echo(f"   Directory:       {r.out_dir}")
    click.echo(f"   Float digits:    {r.float_digits}")
    click.echo(f"   Verbose:         {r.verbose}")

    if show_all:
        click.echo("\n📁 Config Sources:")
        for label, path in (
            ("User:   ", Path.home() / ".cphi" / "config.toml"),
            ("Project:", Path.cwd() / ".cphi" / "config.toml"),
        ):
            if path.exists():
                click.echo(f"   ✓ {label} {path}")
            else:
                click.echo(f"   ✗ {label} {path} (not found)")
        active = sorted(k for k in os.environ if k.startswith("CPHI_"))
        click.echo(f"\n   Environment overrides active: {', '.join(active) or 'none'}")

    click.echo()


@config.command("validate")
def config_validate():
    """Validate configuration"""
    try:
        settings = get_config()
        settings.validate()
        click.echo("✓ Configuration is valid")
    except ConfigurationError as e:
        click.echo(f"❌ Configuration error: {e}", err=True)
        raise SystemExit(EXIT_USAGE)


@cli.command("runs")
@click.option("--out", type=click.Path(file_okay=False), help="Report directory")
def runs(out):
    """List the latest run of each subcommand"""
    settings = get_config()
    writer = ReportWriter(Path(out or settings.reports.out_dir))
    index = writer.list_runs()
    if not index:
        click.echo("No runs recorded.")
        return
    for command, entry in sorted(index.items()):
        mark = "✓" if entry["passed"] else "✗"
        failed = f"  failed: {', '.join(entry['failed_checks'])}" if entry["failed_checks"] else ""
        click.echo(f"  {mark} {command:15} {entry['directory']}{failed}")


if __name__ == "__main__":
    cli()
