"""Shared pytest fixtures for the screenopt test suite.

Provides design and model factories, the bundled reference designs, and
mock implementations of the file ports so service tests never touch disk.
"""

from pathlib import Path
from unittest.mock import MagicMock

import numpy as np
import pytest

from screenopt.adapters.design_catalog import PackagedDesignCatalog
from screenopt.adapters.design_files import format_design
from screenopt.core.interfaces import IDesignStore, IReportWriter
from screenopt.core.models import Design, FactorDomain, ModelSpec, NuisanceSpec
from screenopt.settings import Settings


# ---------------------------------------------------------------------------
# Test data factories
# ---------------------------------------------------------------------------


def make_design(rows: list[list[float]], block_of: list[int] | None = None) -> Design:
    """Create a Design from nested lists.

    Args:
        rows: One list of factor settings per run.
        block_of: Optional 0-based block label per run.

    Returns:
        Design with float settings.
    """
    return Design(
        settings=np.asarray(rows, dtype=np.float64),
        block_of=None if block_of is None else np.asarray(block_of, dtype=np.int64),
    )


def make_spec(
    k: int,
    order: int = 1,
    potential: str = "none",
    tau2_inv: float = 0.0,
    two_level: bool = False,
    blocks: list[int] | None = None,
) -> ModelSpec:
    """Create a ModelSpec with the common screening options.

    Args:
        k: Number of factors.
        order: Interaction order.
        potential: "none", "interactions" or "quadratics".
        tau2_inv: Prior precision of the potential terms.
        two_level: Declare every factor two-level instead of continuous.
        blocks: Run count per block; intercept nuisance when None.

    Returns:
        Validated ModelSpec.
    """
    domains = tuple(FactorDomain.TWO_LEVEL for _ in range(k)) if two_level else None
    return ModelSpec.build(
        k,
        order=order,
        potential=potential,  # type: ignore[arg-type]
        tau2_inv=tau2_inv,
        nuisance=NuisanceSpec.blocks(blocks) if blocks else None,
        domains=domains,
    )


def half_fraction() -> Design:
    """Four-run 2^(3-1) fraction with x3 = x1 x2."""
    return make_design([[-1, -1, 1], [1, -1, -1], [-1, 1, -1], [1, 1, 1]])


def write_design_file(path: Path, design: Design) -> Path:
    """Write a design CSV and return its path."""
    path.write_text(format_design(design), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Bundled designs
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def catalog() -> PackagedDesignCatalog:
    """Catalog of the designs shipped with the package."""
    return PackagedDesignCatalog()


@pytest.fixture
def a_optimal_seven_run(catalog: PackagedDesignCatalog) -> Design:
    """Seven-run, five-factor A-optimal main-effect design with two zero coordinates."""
    return catalog.load("seven_run_a_optimal")


@pytest.fixture
def d_optimal_seven_run(catalog: PackagedDesignCatalog) -> Design:
    """Seven-run, five-factor D-optimal design with every coordinate at +-1."""
    return catalog.load("seven_run_d_optimal_plus_plus")


@pytest.fixture
def main_effects_five() -> ModelSpec:
    """Five continuous factors, main effects plus intercept."""
    return ModelSpec.build(5)


@pytest.fixture
def settings() -> Settings:
    """Settings with a single worker thread."""
    return Settings(threads=1)


# ---------------------------------------------------------------------------
# Mock port fixtures
# ---------------------------------------------------------------------------


@pytest.fixture
def mock_store() -> MagicMock:
    """Mock IDesignStore."""
    return MagicMock(spec=IDesignStore)


@pytest.fixture
def mock_writer() -> MagicMock:
    """Mock IReportWriter."""
    return MagicMock(spec=IReportWriter)
