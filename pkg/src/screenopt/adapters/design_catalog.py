"""Bundled reference designs shipped as CSV data files inside the package."""

from __future__ import annotations

from importlib.resources import files
from importlib.resources.abc import Traversable

from screenopt.adapters.design_files import parse_design_text
from screenopt.core.models import Design
from screenopt.errors import ErrorCode, InvalidInputError


class PackagedDesignCatalog:
    """Loads designs from ``screenopt/data/<name>.csv``."""

    def __init__(self, root: Traversable | None = None) -> None:
        self._root = root if root is not None else files("screenopt") / "data"

    def names(self) -> tuple[str, ...]:
        return tuple(
            sorted(entry.name.removesuffix(".csv") for entry in self._root.iterdir() if entry.name.endswith(".csv")),
        )

    def load(self, name: str) -> Design:
        """Load a bundled design.

        Raises:
            InvalidInputError: If no bundled design has that name.
        """
        resource = self._root / f"{name}.csv"
        if not resource.is_file():
            raise InvalidInputError(
                message=f"No bundled design named {name!r}; available: {', '.join(self.names())}.",
                error_code=ErrorCode.INVALID_INPUT,
            )
        return parse_design_text(resource.read_text(encoding="utf-8"), source=name)
