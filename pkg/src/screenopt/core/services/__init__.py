"""Services orchestrating the numerical core behind the file and report ports."""

from screenopt.core.services.construction_service import ConstructionRequest, ConstructionService
from screenopt.core.services.evaluation_service import EvaluationService
from screenopt.core.services.reproduction_service import ReproductionService, ReproductionTarget, SweepOptions

__all__ = [
    "ConstructionRequest",
    "ConstructionService",
    "EvaluationService",
    "ReproductionService",
    "ReproductionTarget",
    "SweepOptions",
]
