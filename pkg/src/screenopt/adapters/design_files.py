"""File adapter for design CSV files and model specification JSON files.

Design CSV: header ``x1,...,xk`` with an optional trailing ``block`` column,
one row per run, block labels 1-based. Settings are written with 17
significant digits so a written design re-reads to identical floats.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from screenopt.api.schemas import ModelSpecDocument
from screenopt.core.models import Design, ModelSpec
from screenopt.core.modelspec import resolve_blocks
from screenopt.errors import ErrorCode, InconsistentSpecError, InvalidInputError
from screenopt.observability import get_logger

logger = get_logger(__name__)

_BLOCK_COLUMN: str = "block"
_SIGNIFICANT_DIGITS: str = ".17g"


def _invalid(source: str, message: str) -> InvalidInputError:
    return InvalidInputError(message=f"{source}: {message}", error_code=ErrorCode.INVALID_INPUT)


def parse_design_text(text: str, source: str = "<design>") -> Design:
    """Parse design CSV text.

    Args:
        text: CSV content.
        source: Name used in error messages.

    Returns:
        Design with 0-based block labels when a block column is present.

    Raises:
        InvalidInputError: If the header or any cell is malformed.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise _invalid(source, "design file is empty")
    header = [cell.strip() for cell in rows[0]]
    has_block = header[-1] == _BLOCK_COLUMN
    factor_names = header[:-1] if has_block else header
    expected = [f"x{j + 1}" for j in range(len(factor_names))]
    if not factor_names or factor_names != expected:
        raise _invalid(source, f"header must be {','.join(expected or ['x1'])}[,block], got {','.join(header)}")

    settings: list[list[float]] = []
    blocks: list[int] = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise _invalid(source, f"line {line} has {len(row)} cells, expected {len(header)}")
        try:
            settings.append([float(cell) for cell in row[: len(factor_names)]])
            if has_block:
                blocks.append(int(row[-1]) - 1)
        except ValueError as exc:
            raise _invalid(source, f"line {line} is not numeric") from exc
    if not settings:
        raise _invalid(source, "design has no runs")
    if has_block and min(blocks) < 0:
        raise _invalid(source, "block labels are 1-based")
    block_of = np.asarray(blocks, dtype=np.int64) if has_block else None
    return Design(settings=np.asarray(settings, dtype=np.float64), block_of=block_of)


def format_design(design: Design) -> str:
    """Render a design as CSV text with 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = [f"x{j + 1}" for j in range(design.k)]
    if design.block_of is not None:
        header.append(_BLOCK_COLUMN)
    writer.writerow(header)
    for i, row in enumerate(design.settings):
        cells = [format(float(x) + 0.0, _SIGNIFICANT_DIGITS) for x in row]
        if design.block_of is not None:
            cells.append(str(int(design.block_of[i]) + 1))
        writer.writerow(cells)
    return buffer.getvalue()


class DesignFileStore:
    """Reads and writes designs and model specifications on the local filesystem."""

    def read_design(self, path: Path, spec: ModelSpec | None = None) -> Design:
        """Load a design CSV.

        Args:
            path: CSV file.
            spec: When given, the factor count, domains and block sizes are checked.

        Raises:
            InvalidInputError: If the file cannot be read or parsed.
            InconsistentSpecError: If the design does not match the model.
        """
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise _invalid(str(path), f"cannot read design file ({exc.strerror})") from exc
        design = parse_design_text(text, source=str(path))
        if spec is not None:
            if design.k != spec.k:
                raise InconsistentSpecError(
                    message=f"{path}: design has {design.k} factors, model expects {spec.k}.",
                    error_code=ErrorCode.INCONSISTENT_SPEC,
                )
            design.check_domains(spec.domains)
            resolve_blocks(design, spec)
        logger.debug("Design loaded", path=str(path), n=design.n, k=design.k)
        return design

    def write_design(self, path: Path, design: Design) -> None:
        path.write_text(format_design(design), encoding="utf-8")
        logger.info("Design written", path=str(path), n=design.n)

    def read_model(self, path: Path) -> ModelSpec:
        """Load a model specification JSON file.

        Raises:
            InvalidInputError: If the file cannot be read or fails schema validation.
            InconsistentSpecError: If the specification violates the model invariants.
        """
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise _invalid(str(path), f"cannot read model file ({exc.strerror})") from exc
        try:
            document = ModelSpecDocument.model_validate_json(text)
        except ValidationError as exc:
            raise _invalid(str(path), f"invalid model specification: {exc.errors()[0]['msg']}") from exc
        return document.to_model_spec()
