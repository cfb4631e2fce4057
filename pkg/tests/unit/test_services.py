"""Unit tests for the construction and evaluation services.

All file access goes through mocked IDesignStore and IReportWriter ports.
"""

from __future__ import annotations

from pathlib import Path
from unittest.mock import MagicMock

import numpy as np
import pytest
from pytest_mock import MockerFixture

from screenopt.core.models import (
    CriterionConfig,
    CriterionFamily,
    Design,
    DomainMode,
    ModelSpec,
    PowerQuery,
    SearchConfig,
)
from screenopt.core.reports import ComparisonReport, DesignReport
from screenopt.core.services import ConstructionRequest, ConstructionService, EvaluationService, construction_service
from screenopt.core.services.construction_service import auto_domain_mode
from screenopt.errors import AllStartsFailedError, NoResidualDFError, SingularDesignError
from tests.conftest import half_fraction

_MODEL = Path("model.json")


def _request(**overrides: object) -> ConstructionRequest:
    fields: dict[str, object] = {
        "model_path": _MODEL,
        "n": 4,
        "criterion": CriterionConfig(family=CriterionFamily.D),
        "search": SearchConfig(starts=10, domain_mode=DomainMode.PM1),
    }
    fields.update(overrides)
    return ConstructionRequest(**fields)  # type: ignore[arg-type]


class TestConstructionService:
    """Model in, design and report out."""

    def test_constructs_and_writes(self, mock_store: MagicMock, mock_writer: MagicMock) -> None:
        """The best design is written and the report carries its diagnostics."""
        mock_store.read_model.return_value = ModelSpec.build(3)
        result = ConstructionService(mock_store, mock_writer).run(_request(design_out=Path("best.csv")))

        assert result.best_value.value == pytest.approx(np.log(256.0))
        mock_store.read_model.assert_called_once_with(_MODEL)
        mock_store.write_design.assert_called_once_with(Path("best.csv"), result.best_design)
        report, path = mock_writer.write_report.call_args.args
        assert path is None
        assert isinstance(report, DesignReport)
        assert report.criterion is not None
        assert report.criterion.family is CriterionFamily.D
        assert report.variances == pytest.approx([0.25, 0.25, 0.25])
        assert report.seed == 0
        assert len(report.per_start) == 10

    def test_design_not_written_without_path(self, mock_store: MagicMock, mock_writer: MagicMock) -> None:
        mock_store.read_model.return_value = ModelSpec.build(3)
        ConstructionService(mock_store, mock_writer).run(_request())
        mock_store.write_design.assert_not_called()

    def test_dual_protocol_records_rounds(
        self,
        mocker: MockerFixture,
        mock_store: MagicMock,
        mock_writer: MagicMock,
    ) -> None:
        """The protocol runs under the requested start cap and its batches appear in the report."""
        spy = mocker.spy(construction_service, "dual_protocol")
        mock_store.read_model.return_value = ModelSpec.build(3)
        request = _request(n=5, criterion=CriterionConfig(family=CriterionFamily.AS), dual=True, batch=3, start_cap=9)
        ConstructionService(mock_store, mock_writer).run(request)
        assert spy.call_args.kwargs["start_cap"] == 9
        report = mock_writer.write_report.call_args.args[0]
        assert [r.mode for r in report.rounds[:2]] == ["pm1_0", "continuous"]

    def test_search_failure_propagates(self, mock_store: MagicMock, mock_writer: MagicMock) -> None:
        """No report is written when every start fails."""
        mock_store.read_model.return_value = ModelSpec.build(3)
        with pytest.warns(UserWarning), pytest.raises(AllStartsFailedError):
            ConstructionService(mock_store, mock_writer).run(_request(n=2))
        mock_writer.write_report.assert_not_called()

    @pytest.mark.parametrize(
        ("family", "mode"),
        [
            (CriterionFamily.D, DomainMode.PM1),
            (CriterionFamily.BAYES_DS, DomainMode.PM1),
            (CriterionFamily.AS, DomainMode.CONTINUOUS),
            (CriterionFamily.BAYES_A, DomainMode.CONTINUOUS),
        ],
    )
    def test_auto_domain(self, family: CriterionFamily, mode: DomainMode) -> None:
        """D-family optima sit at the endpoints; A-family searches need the interval."""
        assert auto_domain_mode(CriterionConfig(family=family)) is mode


class TestEvaluationService:
    """Design files in, diagnostics out."""

    def test_evaluate(
        self,
        mock_store: MagicMock,
        mock_writer: MagicMock,
        a_optimal_seven_run: Design,
        main_effects_five: ModelSpec,
    ) -> None:
        mock_store.read_model.return_value = main_effects_five
        mock_store.read_design.return_value = a_optimal_seven_run
        report = EvaluationService(mock_store, mock_writer).evaluate(
            Path("a.csv"),
            _MODEL,
            power=PowerQuery(effect_index=0, beta_over_sigma=1.0, df=float("inf")),
        )
        assert report.a_m == pytest.approx(0.84375)
        assert report.power == pytest.approx(0.7156, abs=5e-4)
        mock_store.read_design.assert_called_once_with(Path("a.csv"), main_effects_five)
        written = mock_writer.write_report.call_args.args[0]
        assert written.error is None

    def test_singular_design_reports_error(self, mock_store: MagicMock, mock_writer: MagicMock) -> None:
        """A report with the error is written before the error is raised."""
        mock_store.read_model.return_value = ModelSpec.build(2)
        mock_store.read_design.return_value = Design(settings=np.ones((4, 2)))
        with pytest.raises(SingularDesignError):
            EvaluationService(mock_store, mock_writer).evaluate(Path("flat.csv"), _MODEL)
        written = mock_writer.write_report.call_args.args[0]
        assert written.error is not None
        assert written.error.code == "SINGULAR_DESIGN"

    def test_power_without_residual_df(self, mock_store: MagicMock, mock_writer: MagicMock) -> None:
        mock_store.read_model.return_value = ModelSpec.build(3)
        mock_store.read_design.return_value = half_fraction()
        with pytest.raises(NoResidualDFError):
            EvaluationService(mock_store, mock_writer).evaluate(
                Path("h.csv"),
                _MODEL,
                power=PowerQuery(effect_index=0, beta_over_sigma=1.0),
            )
        assert mock_writer.write_report.call_args.args[0].error.code == "NO_RESIDUAL_DF"

    def test_compare(
        self,
        mock_store: MagicMock,
        mock_writer: MagicMock,
        a_optimal_seven_run: Design,
        d_optimal_seven_run: Design,
        main_effects_five: ModelSpec,
    ) -> None:
        """Design ids come from the file stems; the summary JSON is optional."""
        mock_store.read_model.return_value = main_effects_five
        mock_store.read_design.side_effect = [a_optimal_seven_run, d_optimal_seven_run]
        table = EvaluationService(mock_store, mock_writer).compare(
            [Path("designs/a_opt.csv"), Path("designs/d_opt.csv")],
            _MODEL,
            report_out=Path("summary.json"),
        )
        assert [entry.design_id for entry in table.entries] == ["a_opt", "d_opt"]
        mock_writer.write_variance_table.assert_called_once_with(table, None)
        summary, path = mock_writer.write_report.call_args.args
        assert isinstance(summary, ComparisonReport)
        assert path == Path("summary.json")
        assert summary.pairs[0].percent_larger == 0.0
