"""JSON report documents for constructed, evaluated, compared and reproduced designs.

Services build these from core results; the report writer serializes them.
"""

from __future__ import annotations

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from screenopt import __version__
from screenopt.core.models import (
    ComparisonTable,
    CriterionFamily,
    CriterionValue,
    DiagnosticsReport,
    SearchResult,
)
from screenopt.errors import ErrorCode, ScreenoptError

Comparison = Literal["close", "at_most", "at_least", "below", "greater"]


def _finite(value: float | None) -> float | None:
    return value if value is None or math.isfinite(value) else None


class CriterionDocument(BaseModel):
    """One criterion value; ``exact`` is the nuisance-adjusted trace for s-restricted A criteria."""

    family: CriterionFamily
    value: float | None
    exact: float | None = None

    @classmethod
    def from_value(cls, value: CriterionValue) -> CriterionDocument:
        return cls(family=value.family, value=value.value, exact=value.exact)


class ErrorDocument(BaseModel):
    code: ErrorCode
    message: str

    @classmethod
    def from_error(cls, error: ScreenoptError) -> ErrorDocument:
        return cls(code=error.error_code, message=error.message)


class RoundDocument(BaseModel):
    mode: str
    seed: int
    starts: int
    best_value: float


class DesignReport(BaseModel):
    """JSON report for a constructed or evaluated design."""

    model_config = ConfigDict(populate_by_name=True)

    criterion: CriterionDocument | None = None
    variances: list[float] = Field(default_factory=list)
    variance_labels: list[str] = Field(default_factory=list)
    tr_ata: float | None = None
    a_m: float | None = Field(default=None, alias="A_M")
    ss_q: float | None = Field(default=None, alias="SS_Q")
    ss_mi: float | None = Field(default=None, alias="SS_MI")
    log_metrics: dict[str, float | None] | None = None
    criterion_values: dict[str, float | None] = Field(default_factory=dict)
    power: float | None = None
    per_start: list[float] = Field(default_factory=list)
    success_count_at_best: int | None = None
    failed_starts: int | None = None
    rounds: list[RoundDocument] = Field(default_factory=list)
    seed: int | None = None
    version: str = __version__
    error: ErrorDocument | None = None

    def with_diagnostics(self, report: DiagnosticsReport) -> DesignReport:
        """Copy of this report with the diagnostics fields filled in."""
        metrics = report.metrics
        update: dict[str, Any] = {
            "variances": [float(v) for v in report.variances],
            "variance_labels": list(report.variance_labels),
            "tr_ata": report.tr_ata,
            "criterion_values": {family.value: value for family, value in report.criterion_values.items()},
            "power": report.power,
        }
        if metrics is not None:
            update |= {
                "a_m": metrics.a_m,
                "ss_q": metrics.ss_q,
                "ss_mi": metrics.ss_mi,
                "log_metrics": {
                    "log_A_M": _finite(metrics.log_a_m),
                    "log_SS_Q": _finite(metrics.log_ss_q),
                    "log_SS_MI_plus_1": _finite(metrics.log_ss_mi_plus_one),
                },
            }
        return self.model_copy(update=update)

    @classmethod
    def from_search(cls, result: SearchResult, seed: int) -> DesignReport:
        return cls(
            criterion=CriterionDocument.from_value(result.best_value),
            per_start=list(result.per_start_values),
            success_count_at_best=result.success_count_at_best,
            failed_starts=result.failed_starts,
            rounds=[
                RoundDocument(mode=r.mode.value, seed=r.seed, starts=r.starts, best_value=r.best_value)
                for r in result.rounds
            ],
            seed=seed,
        )


class ComparisonEntryDocument(BaseModel):
    design_id: str
    sorted_variances: list[float] | None
    criterion_values: dict[str, float | None]
    tr_ata: float | None
    error: str | None = None


class PairDocument(BaseModel):
    first: str
    second: str
    differences: list[float]
    percent_smaller: float
    percent_equal: float
    percent_larger: float


class ComparisonReport(BaseModel):
    """Summary JSON of a design comparison."""

    entries: list[ComparisonEntryDocument]
    pairs: list[PairDocument]
    version: str = __version__

    @classmethod
    def from_table(cls, table: ComparisonTable) -> ComparisonReport:
        return cls(
            entries=[
                ComparisonEntryDocument(
                    design_id=entry.design_id,
                    sorted_variances=(
                        None if entry.sorted_variances is None else [float(v) for v in entry.sorted_variances]
                    ),
                    criterion_values={family.value: value for family, value in entry.criterion_values.items()},
                    tr_ata=entry.tr_ata,
                    error=entry.error,
                )
                for entry in table.entries
            ],
            pairs=[
                PairDocument(
                    first=pair.first,
                    second=pair.second,
                    differences=[float(v) for v in pair.differences],
                    percent_smaller=pair.percent_smaller,
                    percent_equal=pair.percent_equal,
                    percent_larger=pair.percent_larger,
                )
                for pair in table.pairs
            ],
        )


class CheckDocument(BaseModel):
    """One numeric reproduction check.

    ``close`` passes when |observed - expected| <= tolerance, ``at_most`` when
    observed <= expected + tolerance and ``at_least`` when observed >= expected - tolerance.
    ``below`` and ``greater`` are strict and ignore the tolerance. ``note`` says
    what is compared when the name alone does not.
    """

    name: str
    comparison: Comparison = "close"
    observed: float
    expected: float
    tolerance: float
    passed: bool
    note: str | None = None


class ReproductionReport(BaseModel):
    """Outputs and checks of one reproduction target."""

    target: str
    checks: list[CheckDocument] = Field(default_factory=list)
    data: dict[str, Any] = Field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
