"""Unit tests for the file adapters.

Covers:
  - parse_design_text / format_design: headers, block labels, malformed input
  - DesignFileStore: model files and design/model consistency checks
  - ReportWriter: JSON reports and the variance table
  - PackagedDesignCatalog: bundled designs
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np
import pytest

from screenopt.adapters.design_catalog import PackagedDesignCatalog
from screenopt.adapters.design_files import DesignFileStore, format_design, parse_design_text
from screenopt.adapters.report_writer import ReportWriter
from screenopt.core.diagnostics import compare_designs
from screenopt.core.models import Design, ModelSpec
from screenopt.core.reports import ReproductionReport
from screenopt.errors import DomainViolationError, InconsistentSpecError, InvalidInputError
from tests.conftest import make_design, make_spec, write_design_file


class TestDesignText:
    """Design CSV parsing and formatting."""

    def test_parse_with_blocks(self) -> None:
        """Block labels are 1-based in files and 0-based in memory."""
        design = parse_design_text("x1,x2,block\n1,-1,1\n-1,1,2\n")
        np.testing.assert_array_equal(design.settings, [[1.0, -1.0], [-1.0, 1.0]])
        np.testing.assert_array_equal(design.block_of, [0, 1])

    def test_format_preserves_values(self) -> None:
        """Seventeen significant digits re-read to identical floats."""
        design = make_design([[0.1, -1.0 / 3.0], [1.0, 0.0]], block_of=[0, 1])
        text = format_design(design)
        assert text.splitlines()[0] == "x1,x2,block"
        again = parse_design_text(text)
        np.testing.assert_array_equal(again.settings, design.settings)
        np.testing.assert_array_equal(again.block_of, design.block_of)

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "a,b\n1,2\n",
            "x1,x3\n1,2\n",
            "x1,x2\n1\n",
            "x1,x2\n1,high\n",
            "x1,x2\n",
            "x1,block\n1,0\n",
        ],
    )
    def test_malformed(self, text: str) -> None:
        with pytest.raises(InvalidInputError):
            parse_design_text(text)


class TestDesignFileStore:
    """Files on disk."""

    def test_read_model(self, tmp_path: Path) -> None:
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"k": 3, "order": 2, "potential": "interactions"}), encoding="utf-8")
        spec = DesignFileStore().read_model(path)
        assert spec.q == 3

    def test_invalid_model(self, tmp_path: Path) -> None:
        path = tmp_path / "model.json"
        path.write_text('{"k": "three"}', encoding="utf-8")
        with pytest.raises(InvalidInputError):
            DesignFileStore().read_model(path)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(InvalidInputError):
            DesignFileStore().read_design(tmp_path / "absent.csv")

    def test_factor_count_checked(self, tmp_path: Path) -> None:
        path = write_design_file(tmp_path / "d.csv", make_design([[1, 1], [-1, -1]]))
        with pytest.raises(InconsistentSpecError):
            DesignFileStore().read_design(path, ModelSpec.build(3))

    def test_domain_checked(self, tmp_path: Path) -> None:
        """A centre point is not a two-level setting."""
        path = write_design_file(tmp_path / "d.csv", make_design([[0, 1], [-1, -1]]))
        with pytest.raises(DomainViolationError):
            DesignFileStore().read_design(path, make_spec(2, two_level=True))

    def test_block_sizes_checked(self, tmp_path: Path) -> None:
        path = write_design_file(tmp_path / "d.csv", make_design([[1], [-1], [1]], block_of=[0, 0, 1]))
        with pytest.raises(InconsistentSpecError):
            DesignFileStore().read_design(path, make_spec(1, blocks=[1, 2]))

    def test_write_then_read(self, tmp_path: Path) -> None:
        design = make_design([[0.25, -1.0], [1.0, 0.5]])
        store = DesignFileStore()
        store.write_design(tmp_path / "d.csv", design)
        np.testing.assert_array_equal(store.read_design(tmp_path / "d.csv").settings, design.settings)


class TestReportWriter:
    """Report output."""

    def test_report_to_stream(self) -> None:
        stream = io.StringIO()
        ReportWriter(stdout=stream).write_report(ReproductionReport(target="fig1"), None)
        assert json.loads(stream.getvalue())["target"] == "fig1"

    def test_report_to_file(self, tmp_path: Path) -> None:
        stream = io.StringIO()
        ReportWriter(stdout=stream).write_report(ReproductionReport(target="a5"), tmp_path / "r.json")
        assert stream.getvalue() == ""
        assert json.loads((tmp_path / "r.json").read_text(encoding="utf-8"))["target"] == "a5"

    def test_variance_table(self, a_optimal_seven_run: Design, d_optimal_seven_run: Design) -> None:
        """One row per design and rank, ranks 1-based."""
        table = compare_designs([("a", a_optimal_seven_run), ("d", d_optimal_seven_run)], ModelSpec.build(5))
        stream = io.StringIO()
        ReportWriter(stdout=stream).write_variance_table(table, None)
        lines = stream.getvalue().splitlines()
        assert lines[0] == "design_id,rank,variance"
        assert len(lines) == 11
        rows = [line.split(",") for line in lines[1:]]
        assert [(row[0], row[1]) for row in rows[:2]] == [("a", "1"), ("a", "2")]
        assert float(rows[0][2]) == pytest.approx(0.15625)
        assert float(rows[-1][2]) == pytest.approx(0.1875)


class TestPackagedDesignCatalog:
    """Bundled designs."""

    def test_names(self, catalog: PackagedDesignCatalog) -> None:
        assert "seven_run_a_optimal" in catalog.names()
        assert "blocked_32_run" in catalog.names()

    def test_blocked_design(self, catalog: PackagedDesignCatalog) -> None:
        """Eight blocks of four runs."""
        design = catalog.load("blocked_32_run")
        assert design.settings.shape == (32, 6)
        assert design.block_of is not None
        np.testing.assert_array_equal(np.bincount(design.block_of), [4] * 8)

    def test_unknown_design(self, catalog: PackagedDesignCatalog) -> None:
        with pytest.raises(InvalidInputError):
            catalog.load("no_such_design")
