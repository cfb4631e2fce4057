"""Abstract interfaces (Protocol classes) for screenopt.

Services depend only on these protocols; the adapters package provides the
file-backed implementations and tests substitute mocks.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol, runtime_checkable

from pydantic import BaseModel

from screenopt.core.models import ComparisonTable, Design, ModelSpec


@runtime_checkable
class IDesignStore(Protocol):
    """Reads and writes design CSV files and model specification JSON files."""

    def read_design(self, path: Path, spec: ModelSpec | None = None) -> Design:
        """Load a design.

        Args:
            path: CSV file with header x1..xk and an optional block column.
            spec: When given, the factor count and block sizes are checked against it.

        Returns:
            The design with 0-based block labels.
        """
        ...

    def write_design(self, path: Path, design: Design) -> None:
        """Write a design with 17 significant digits and 1-based block labels."""
        ...

    def read_model(self, path: Path) -> ModelSpec:
        """Load and validate a model specification document."""
        ...


@runtime_checkable
class IReportWriter(Protocol):
    """Emits reports and plot-ready tables."""

    def write_report(self, report: BaseModel, path: Path | None) -> None:
        """Write a JSON report to ``path``, or to standard output when it is None."""
        ...

    def write_variance_table(self, table: ComparisonTable, path: Path | None) -> None:
        """Write one CSV row per (design, rank) with the sorted variance."""
        ...


@runtime_checkable
class IDesignCatalog(Protocol):
    """Designs bundled with the package."""

    def names(self) -> tuple[str, ...]:
        """Names of every bundled design."""
        ...

    def load(self, name: str) -> Design:
        """Load a bundled design by name.

        Raises:
            InvalidInputError: If no design has that name.
        """
        ...
