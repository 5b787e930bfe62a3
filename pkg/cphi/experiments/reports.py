"""Report files for suite runs.

Each run writes into ``<out>/<command>/``:

- one CSV per table, floats with 17 significant digits, no index column;
- ``summary.json``: checks, summary values and the config fingerprint,
  with sorted keys and no timestamps;
- ``summary.md``: the same content rendered from a Jinja2 template.

``<out>/index.json`` maps each subcommand to its latest run.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, Template, TemplateNotFound

from cphi.experiments.config import ExperimentConfig
from cphi.experiments.suites import SuiteResult

logger = logging.getLogger(__name__)


def plain(value: Any) -> Any:
    """Convert numpy scalars, complex numbers and NaN into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [plain(value.real), plain(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def split_complex(frame: pd.DataFrame) -> pd.DataFrame:
    """Replace every complex column c by c_re and c_im, in place of c."""
    out = {}
    for name in frame.columns:
        column = frame[name]
        if np.iscomplexobj(column.to_numpy()):
            out[f"{name}_re"] = column.to_numpy().real
            out[f"{name}_im"] = column.to_numpy().imag
        else:
            out[name] = column
    return pd.DataFrame(out)


class SummaryRenderer:
    """Renders summary templates from the package's ``templates`` directory."""

    def __init__(self, template_dir: Optional[Path] = None):
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"
        self.template_dir = Path(template_dir)
        self.env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self._template_cache: Dict[str, Template] = {}

    def render(self, template_name: str, **context: Any) -> str:
        """Render ``template_name`` (with or without the .j2 extension).

        Raises:
            TemplateNotFound: If the template doesn't exist
        """
        if not template_name.endswith(".j2"):
            template_name = f"{template_name}.j2"
        if template_name not in self._template_cache:
            try:
                self._template_cache[template_name] = self.env.get_template(template_name)
            except TemplateNotFound:
                raise TemplateNotFound(f"Template '{template_name}' not found in {self.template_dir}")
        return self._template_cache[template_name].render(**context)


class ReportWriter:
    """Writes suite results under one output directory."""

    def __init__(self, out_dir: Path, float_digits: int = 17, renderer: Optional[SummaryRenderer] = None):
        self.out_dir = Path(out_dir)
        self.float_format = f"%.{float_digits}g"
        self.index_file = self.out_dir / "index.json"
        self.renderer = renderer or SummaryRenderer()

    def write(self, result: SuiteResult, config: ExperimentConfig) -> Path:
        """Write all files for one run and update the index.

        Returns:
            The run directory
        """
        run_dir = self.out_dir / result.command
        run_dir.mkdir(parents=True, exist_ok=True)

        files: List[str] = []
        for stem, frame in sorted(result.tables.items()):
            path = run_dir / f"{stem}.csv"
            split_complex(frame).to_csv(path, index=False, float_format=self.float_format)
            files.append(path.name)

        document = {
            "command": result.command,
            "passed": result.passed,
            "checks": {name: bool(ok) for name, ok in sorted(result.checks.items())},
            "summary": plain(result.summary),
            "config": config.to_dict(),
            "config_fingerprint": config.fingerprint(),
            "tables": files,
        }
        with open(run_dir / "summary.json", "w") as f:
            json.dump(document, f, indent=2, sort_keys=True)
            f.write("\n")

        markdown = self.renderer.render(
            "summary.md",
            command=result.command,
            passed=result.passed,
            checks=document["checks"],
            summary=document["summary"],
            fingerprint=document["config_fingerprint"],
            tables=files,
        )
        (run_dir / "summary.md").write_text(markdown)

        self._update_index(result, run_dir, config)
        logger.info("wrote %d tables for %s to %s", len(files), result.command, run_dir)
        return run_dir

    def _load_index(self) -> Dict[str, Any]:
        if not self.index_file.exists():
            return {}
        try:
            with open(self.index_file, "r") as f:
                return json.load(f)
        except json.JSONDecodeError:
            logger.warning("index %s is corrupt, starting a new one", self.index_file)
            return {}

    def _update_index(self, result: SuiteResult, run_dir: Path, config: ExperimentConfig):
        index = self._load_index()
        index[result.command] = {
            "directory": run_dir.name,
            "passed": result.passed,
            "failed_checks": result.failed_checks,
            "config_fingerprint": config.fingerprint(),
        }
        with open(self.index_file, "w") as f:
            json.dump(index, f, indent=2, sort_keys=True)
            f.write("\n")

    def list_runs(self) -> Dict[str, Any]:
        return self._load_index()
