"""Construction service: builds an optimal design from a model file and writes it out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from screenopt.core.diagnostics import diagnose
from screenopt.core.interfaces import IDesignStore, IReportWriter
from screenopt.core.models import CriterionConfig, DomainMode, SearchConfig, SearchResult
from screenopt.core.reports import DesignReport, ErrorDocument
from screenopt.core.search import construct, dual_protocol
from screenopt.errors import SingularDesignError
from screenopt.observability import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ConstructionRequest:
    """Everything one construction run needs.

    Attributes:
        model_path: Model specification JSON file.
        n: Number of runs.
        criterion: Criterion to optimise.
        search: Search settings; ``domain_mode`` is replaced when ``auto_domain`` is set.
        auto_domain: Search D-family criteria over +-1 and A-family criteria over the continuous domain.
        dual: Run the alternating discrete/continuous protocol instead of a single batch.
        batch: Starts per protocol batch.
        start_cap: Total starts the protocol may spend.
        design_out: Where to write the design CSV; skipped when None.
        report_out: Where to write the JSON report; standard output when None.
    """

    model_path: Path
    n: int
    criterion: CriterionConfig
    search: SearchConfig
    auto_domain: bool = False
    dual: bool = False
    batch: int = 100
    start_cap: int = 1000
    design_out: Path | None = None
    report_out: Path | None = None


def auto_domain_mode(criterion: CriterionConfig) -> DomainMode:
    """+-1 for the D family, whose coordinate optimum is always an endpoint; continuous otherwise."""
    return DomainMode.PM1 if criterion.family.is_d_family else DomainMode.CONTINUOUS


class ConstructionService:
    """Reads the model, runs the search, and writes the design and report."""

    def __init__(self, store: IDesignStore, writer: IReportWriter) -> None:
        """Initialise with file ports.

        Args:
            store: Design and model file access.
            writer: Report output.
        """
        self._store = store
        self._writer = writer

    def run(self, request: ConstructionRequest) -> SearchResult:
        """Construct, canonicalise, diagnose and write out the best design.

        Returns:
            The search result.

        Raises:
            SpecError: If the model file is invalid or inconsistent with n.
            AllStartsFailedError: If no start produced a design.
        """
        spec = self._store.read_model(request.model_path)
        search_cfg = request.search
        if request.auto_domain:
            search_cfg = search_cfg.model_copy(update={"domain_mode": auto_domain_mode(request.criterion)})

        logger.info(
            "Construction started",
            n=request.n,
            family=request.criterion.family.value,
            domain=search_cfg.domain_mode.value,
            starts=search_cfg.starts,
            dual=request.dual,
        )
        if request.dual:
            result = dual_protocol(
                request.n,
                spec,
                request.criterion,
                request.batch,
                search_cfg,
                start_cap=request.start_cap,
            )
        else:
            result = construct(request.n, spec, request.criterion, search_cfg)

        report = DesignReport.from_search(result, seed=search_cfg.seed)
        try:
            report = report.with_diagnostics(diagnose(result.best_design, spec))
        except SingularDesignError as exc:
            logger.info("Constructed design does not estimate the primary model", reason=exc.message)
            report = report.model_copy(update={"error": ErrorDocument.from_error(exc)})

        if request.design_out is not None:
            self._store.write_design(request.design_out, result.best_design)
        self._writer.write_report(report, request.report_out)
        return result
