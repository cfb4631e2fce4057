"""Report writer adapter.

Reports are pydantic documents rendered as indented JSON; comparison data
is emitted as plot-ready CSV. Anything without a path goes to standard
output, which carries reports only (log events go to standard error).
"""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path
from typing import TextIO

from pydantic import BaseModel

from screenopt.core.models import ComparisonTable
from screenopt.observability import get_logger

logger = get_logger(__name__)

_VARIANCE_HEADER: list[str] = ["design_id", "rank", "variance"]


class ReportWriter:
    """Write JSON reports and CSV tables to files or a text stream."""

    def __init__(self, stdout: TextIO | None = None, indent: int = 2) -> None:
        """Initialise the writer.

        Args:
            stdout: Stream used when no path is given; sys.stdout when omitted.
            indent: JSON indentation.
        """
        self._stdout = stdout if stdout is not None else sys.stdout
        self._indent = indent

    def _emit(self, text: str, path: Path | None) -> None:
        if path is None:
            self._stdout.write(text if text.endswith("\n") else text + "\n")
            return
        path.write_text(text, encoding="utf-8")
        logger.info("Report written", path=str(path), size=len(text))

    def write_report(self, report: BaseModel, path: Path | None) -> None:
        self._emit(report.model_dump_json(indent=self._indent, by_alias=True), path)

    def write_variance_table(self, table: ComparisonTable, path: Path | None) -> None:
        """One row per (design, rank); ranks are 1-based over ascending variances."""
        rows: list[list[object]] = []
        for entry in table.entries:
            if entry.sorted_variances is None:
                continue
            ranked = enumerate(entry.sorted_variances, start=1)
            rows.extend([entry.design_id, rank, repr(float(v))] for rank, v in ranked)
        self._emit(_to_csv(_VARIANCE_HEADER, rows), path)


def _to_csv(header: list[str], rows: list[list[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
