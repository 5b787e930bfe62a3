"""Tests for report files."""

import json
import math

import numpy as np
import pandas as pd
import pytest
from jinja2 import TemplateNotFound

from cphi.experiments import ExperimentConfig, ReportWriter, SuiteResult, SummaryRenderer, plain, split_complex


@pytest.fixture
def result():
    """A small suite result with one passing and one failing check."""
    return SuiteResult(
        command="orbit",
        checks={"norms_finite": True, "hypercyclic": False},
        summary={"forward_rate": np.float64(0.5), "missing": math.nan, "nested": {"count": np.int64(3)}},
        tables={"orbit_norms": pd.DataFrame({"n": [-1, 0, 1], "norm": [0.1, 1.0, 1.0 / 3.0]})},
    )


class TestPlain:
    """Test conversion to JSON-ready values."""

    def test_numpy_scalars(self):
        """Test that numpy scalars become Python numbers."""
        assert plain(np.float64(1.5)) == 1.5
        assert type(plain(np.int64(2))) is int
        assert plain(np.bool_(True)) is True

    def test_nan_becomes_null(self):
        """Test that non-finite floats become None."""
        assert plain(math.nan) is None
        assert plain([1.0, math.inf]) == [1.0, None]

    def test_complex_pairs(self):
        """Test that complex numbers become [re, im]."""
        assert plain({"lam": 1 + 2j}) == {"lam": [1.0, 2.0]}


class TestSplitComplex:
    """Test complex column splitting."""

    def test_split(self):
        """Test that a complex column becomes _re and _im columns in place."""
        frame = pd.DataFrame({"k": [0, 1], "z": np.array([1 + 2j, 3 - 4j]), "w": [0.5, 0.25]})
        out = split_complex(frame)
        assert list(out.columns) == ["k", "z_re", "z_im", "w"]
        assert out["z_im"].tolist() == [2.0, -4.0]

    def test_real_frame_unchanged(self):
        """Test that real frames pass through."""
        frame = pd.DataFrame({"a": [1.0, 2.0]})
        pd.testing.assert_frame_equal(split_complex(frame), frame)


class TestReportWriter:
    """Test the files written for a run."""

    def test_writes_files(self, tmp_path, result):
        """Test that CSV, JSON and Markdown summaries and the index are written."""
        config = ExperimentConfig.default()
        run_dir = ReportWriter(tmp_path).write(result, config)
        assert run_dir == tmp_path / "orbit"
        assert (run_dir / "orbit_norms.csv").exists()
        assert (run_dir / "summary.md").exists()

        summary = json.loads((run_dir / "summary.json").read_text())
        assert summary["passed"] is False
        assert summary["checks"] == {"hypercyclic": False, "norms_finite": True}
        assert summary["summary"]["missing"] is None
        assert summary["summary"]["nested"] == {"count": 3}
        assert summary["config_fingerprint"] == config.fingerprint()

        index = json.loads((tmp_path / "index.json").read_text())
        assert index["orbit"]["failed_checks"] == ["hypercyclic"]

    def test_full_precision_floats(self, tmp_path, result):
        """Test that floats are written with 17 significant digits."""
        run_dir = ReportWriter(tmp_path).write(result, ExperimentConfig.default())
        lines = (run_dir / "orbit_norms.csv").read_text().splitlines()
        assert lines[0] == "n,norm"
        assert lines[1] == "-1,0.10000000000000001"
        assert float(lines[3].split(",")[1]) == 1.0 / 3.0

    def test_byte_identical(self, tmp_path, result):
        """Test that rewriting the same result gives the same bytes."""
        config = ExperimentConfig.default()
        first = ReportWriter(tmp_path / "a").write(result, config)
        second = ReportWriter(tmp_path / "b").write(result, config)
        for name in ("orbit_norms.csv", "summary.json", "summary.md"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_markdown(self, tmp_path, result):
        """Test the rendered summary."""
        run_dir = ReportWriter(tmp_path).write(result, ExperimentConfig.default())
        text = (run_dir / "summary.md").read_text()
        assert "# cphi orbit" in text
        assert "**Result:** FAIL" in text
        assert "| hypercyclic | FAIL |" in text
        assert "`orbit_norms.csv`" in text

    def test_index_keeps_other_commands(self, tmp_path, result):
        """Test that the index is keyed by subcommand."""
        writer = ReportWriter(tmp_path)
        config = ExperimentConfig.default()
        writer.write(result, config)
        writer.write(result.model_copy(update={"command": "spectrum", "checks": {"ok": True}}), config)
        runs = writer.list_runs()
        assert set(runs) == {"orbit", "spectrum"}
        assert runs["spectrum"]["passed"] is True

    def test_corrupt_index(self, tmp_path, result):
        """Test that a corrupt index is replaced."""
        tmp_path.mkdir(exist_ok=True)
        (tmp_path / "index.json").write_text("{not json")
        writer = ReportWriter(tmp_path)
        writer.write(result, ExperimentConfig.default())
        assert set(writer.list_runs()) == {"orbit"}


def test_missing_template(tmp_path):
    """Test that an unknown template raises TemplateNotFound."""
    with pytest.raises(TemplateNotFound):
        SummaryRenderer(tmp_path).render("absent")
