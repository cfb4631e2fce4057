"""Evaluation service: diagnostics for one design file and comparisons across several."""

from __future__ import annotations

from pathlib import Path

from screenopt.core.diagnostics import compare_designs, diagnose
from screenopt.core.interfaces import IDesignStore, IReportWriter
from screenopt.core.models import ComparisonTable, DiagnosticsReport, PowerQuery
from screenopt.core.reports import ComparisonReport, DesignReport, ErrorDocument
from screenopt.errors import NoResidualDFError, SingularDesignError
from screenopt.observability import get_logger

logger = get_logger(__name__)


class EvaluationService:
    """Evaluate and compare designs read from files."""

    def __init__(self, store: IDesignStore, writer: IReportWriter) -> None:
        self._store = store
        self._writer = writer

    def evaluate(
        self,
        design_path: Path,
        model_path: Path,
        *,
        submodel: bool = False,
        power: PowerQuery | None = None,
        report_out: Path | None = None,
    ) -> DiagnosticsReport:
        """Diagnose one design and write its report.

        A singular design still produces a report, carrying the error, before
        the error is re-raised.

        Raises:
            SpecError: If either file is invalid or they disagree.
            SingularDesignError: If the fitted model is not estimable.
            NoResidualDFError: If power was requested with no residual df.
        """
        spec = self._store.read_model(model_path)
        design = self._store.read_design(design_path, spec)
        try:
            diagnostics = diagnose(design, spec, submodel=submodel, power=power)
        except (SingularDesignError, NoResidualDFError) as exc:
            logger.info("Design evaluation failed", design=str(design_path), error_code=exc.error_code.value)
            self._writer.write_report(DesignReport(error=ErrorDocument.from_error(exc)), report_out)
            raise
        self._writer.write_report(DesignReport().with_diagnostics(diagnostics), report_out)
        return diagnostics

    def compare(
        self,
        design_paths: list[Path],
        model_path: Path,
        *,
        table_out: Path | None = None,
        report_out: Path | None = None,
    ) -> ComparisonTable:
        """Compare designs by sorted submodel variances.

        The plot-ready variance CSV goes to ``table_out`` (standard output when
        None); the summary JSON is written only when ``report_out`` is given.
        """
        spec = self._store.read_model(model_path)
        designs = [(path.stem, self._store.read_design(path, spec)) for path in design_paths]
        table = compare_designs(designs, spec)
        self._writer.write_variance_table(table, table_out)
        if report_out is not None:
            self._writer.write_report(ComparisonReport.from_table(table), report_out)
        logger.info("Designs compared", designs=len(designs), pairs=len(table.pairs))
        return table
