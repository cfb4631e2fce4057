"""Integration tests for the screenopt command line.

Each test runs the CLI in-process against real files under tmp_path and
checks the exit code, standard streams and written artefacts.
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path

import pytest

from screenopt.adapters.design_catalog import PackagedDesignCatalog
from screenopt.api.cli import EXIT_INPUT, EXIT_OK, EXIT_SEARCH, EXIT_SINGULAR, run
from screenopt.errors import RankDeficitWarning
from screenopt.settings import Settings
from tests.conftest import half_fraction, make_design, write_design_file


def _model(tmp_path: Path, document: dict[str, object]) -> Path:
    path = tmp_path / "model.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def _run(argv: list[str], settings: Settings) -> tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(argv, settings, stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture
def seven_run_files(tmp_path: Path, catalog: PackagedDesignCatalog) -> tuple[Path, Path, Path]:
    """The seven-run A- and D-optimal designs on disk with a five-factor main-effect model."""
    a_path = write_design_file(tmp_path / "a_opt.csv", catalog.load("seven_run_a_optimal"))
    d_path = write_design_file(tmp_path / "d_opt.csv", catalog.load("seven_run_d_optimal_plus_plus"))
    return a_path, d_path, _model(tmp_path, {"k": 5})


class TestConstruct:
    def test_writes_design_and_report(self, tmp_path: Path, settings: Settings) -> None:
        """Four runs, three factors: the D-optimal value is log 4^4."""
        model = _model(tmp_path, {"k": 3})
        design_path = tmp_path / "best.csv"
        report_path = tmp_path / "report.json"
        code, stdout, _ = _run(
            [
                "construct",
                "--n", "4",
                "--model", str(model),
                "--criterion", "D",
                "--domain", "pm1",
                "--starts", "10",
                "--out", str(design_path),
                "--report", str(report_path),
            ],
            settings,
        )
        assert code == EXIT_OK
        assert stdout == ""
        assert design_path.read_text(encoding="utf-8").splitlines()[0] == "x1,x2,x3"
        report = json.loads(report_path.read_text(encoding="utf-8"))
        assert report["criterion"]["value"] == pytest.approx(math.log(256.0))
        assert len(report["per_start"]) == 10

    def test_report_to_stdout(self, tmp_path: Path, settings: Settings) -> None:
        model = _model(tmp_path, {"k": 2})
        code, stdout, _ = _run(
            ["construct", "--n", "4", "--model", str(model), "--criterion", "A", "--starts", "5"],
            settings,
        )
        assert code == EXIT_OK
        assert json.loads(stdout)["criterion"]["family"] == "A"

    def test_too_few_runs(self, tmp_path: Path, settings: Settings) -> None:
        """Two runs cannot estimate four parameters: every start fails."""
        model = _model(tmp_path, {"k": 3})
        with pytest.warns(RankDeficitWarning):
            code, _, stderr = _run(
                ["construct", "--n", "2", "--model", str(model), "--criterion", "D", "--starts", "3"],
                settings,
            )
        assert code == EXIT_SEARCH
        assert "ALL_STARTS_FAILED" in stderr

    def test_dual_rejects_explicit_domain(self, tmp_path: Path, settings: Settings) -> None:
        model = _model(tmp_path, {"k": 3})
        code, _, stderr = _run(
            ["construct", "--n", "5", "--model", str(model), "--criterion", "As", "--dual", "--domain", "pm1"],
            settings,
        )
        assert code == EXIT_INPUT
        assert "--dual" in stderr

    def test_invalid_model(self, tmp_path: Path, settings: Settings) -> None:
        model = _model(tmp_path, {"k": 0})
        code, _, stderr = _run(["construct", "--n", "4", "--model", str(model), "--criterion", "D"], settings)
        assert code == EXIT_INPUT
        assert stderr

    def test_unknown_criterion(self, tmp_path: Path, settings: Settings) -> None:
        model = _model(tmp_path, {"k": 2})
        code, _, _ = _run(["construct", "--n", "4", "--model", str(model), "--criterion", "E"], settings)
        assert code == EXIT_INPUT


class TestEvaluate:
    def test_power_in_normal_limit(self, seven_run_files: tuple[Path, Path, Path], settings: Settings) -> None:
        """Variance 5/32 at beta/sigma = 1 gives 0.7156 in the z-test limit."""
        a_path, _, model = seven_run_files
        code, stdout, _ = _run(
            ["evaluate", "--design", str(a_path), "--model", str(model), "--power", "1,1.0", "--df", "inf"],
            settings,
        )
        assert code == EXIT_OK
        report = json.loads(stdout)
        assert report["power"] == pytest.approx(0.7156, abs=5e-4)
        assert report["A_M"] == pytest.approx(0.84375)

    def test_singular_design(self, tmp_path: Path, settings: Settings) -> None:
        """The error report is still written to stdout."""
        design = write_design_file(tmp_path / "flat.csv", make_design([[1, 1], [1, 1], [1, 1], [1, 1]]))
        code, stdout, stderr = _run(
            ["evaluate", "--design", str(design), "--model", str(_model(tmp_path, {"k": 2}))],
            settings,
        )
        assert code == EXIT_SINGULAR
        assert "SINGULAR_DESIGN" in stderr
        assert json.loads(stdout)["error"]["code"] == "SINGULAR_DESIGN"

    def test_saturated_design_power(self, tmp_path: Path, settings: Settings) -> None:
        design = write_design_file(tmp_path / "half.csv", half_fraction())
        code, _, stderr = _run(
            ["evaluate", "--design", str(design), "--model", str(_model(tmp_path, {"k": 3})), "--power", "1,1.0"],
            settings,
        )
        assert code == EXIT_SINGULAR
        assert "NO_RESIDUAL_DF" in stderr

    def test_bad_power_query(self, seven_run_files: tuple[Path, Path, Path], settings: Settings) -> None:
        a_path, _, model = seven_run_files
        code, _, _ = _run(["evaluate", "--design", str(a_path), "--model", str(model), "--power", "one"], settings)
        assert code == EXIT_INPUT

    def test_missing_design(self, tmp_path: Path, settings: Settings) -> None:
        code, _, _ = _run(
            ["evaluate", "--design", str(tmp_path / "absent.csv"), "--model", str(_model(tmp_path, {"k": 2}))],
            settings,
        )
        assert code == EXIT_INPUT


class TestCompare:
    def test_variance_table(self, seven_run_files: tuple[Path, Path, Path], tmp_path: Path, settings: Settings) -> None:
        """Five ranked variances per design plus the header."""
        a_path, d_path, model = seven_run_files
        summary = tmp_path / "summary.json"
        code, stdout, _ = _run(
            [
                "compare",
                "--design", str(a_path),
                "--design", str(d_path),
                "--model", str(model),
                "--report", str(summary),
            ],
            settings,
        )
        assert code == EXIT_OK
        assert len(stdout.splitlines()) == 11
        pairs = json.loads(summary.read_text(encoding="utf-8"))["pairs"]
        assert pairs[0]["percent_smaller"] == pytest.approx(60.0)

    def test_needs_two_designs(self, seven_run_files: tuple[Path, Path, Path], settings: Settings) -> None:
        a_path, _, model = seven_run_files
        code, _, _ = _run(["compare", "--design", str(a_path), "--model", str(model)], settings)
        assert code == EXIT_INPUT


class TestReproduce:
    def test_fig1_check(self, settings: Settings) -> None:
        code, stdout, _ = _run(["reproduce", "--target", "fig1", "--check"], settings)
        assert code == EXIT_OK
        assert json.loads(stdout)["target"] == "fig1"

    def test_report_file(self, tmp_path: Path, settings: Settings) -> None:
        out = tmp_path / "blocked.json"
        code, stdout, _ = _run(["reproduce", "--target", "blocked", "--out", str(out)], settings)
        assert code == EXIT_OK
        assert stdout == ""
        assert json.loads(out.read_text(encoding="utf-8"))["checks"]


class TestVersion:
    def test_version(self, settings: Settings, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["--version"], settings) == EXIT_OK
        assert capsys.readouterr().out.startswith("screenopt ")
