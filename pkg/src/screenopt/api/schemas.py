"""Pydantic schema for the model specification file.

File inputs are typed Pydantic models, never raw dicts. The report documents
live in screenopt.core.reports.
"""

from __future__ import annotations

import re
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from screenopt.core.models import FactorDomain, ModelSpec, NuisanceSpec, Term
from screenopt.errors import ErrorCode, InconsistentSpecError

_AUTO_TERMS = re.compile(r"^auto(?:_order_(\d+))?$")
_TERM_LABEL = re.compile(r"^x(\d+)(?:\^2|(?::x\d+)*)$")


def parse_term(descriptor: str | list[int]) -> Term:
    """Convert a 1-based term descriptor to a 0-based term.

    Accepts labels (``x1``, ``x1:x2``, ``x1^2``) or lists of 1-based factor
    indices (``[1, 2]``, ``[1, 1]`` for a quadratic).

    Raises:
        InconsistentSpecError: If the descriptor is malformed.
    """
    if isinstance(descriptor, str):
        label = descriptor.strip()
        if not _TERM_LABEL.match(label):
            raise InconsistentSpecError(
                message=f"Unrecognised term label {label!r}.",
                error_code=ErrorCode.INCONSISTENT_SPEC,
            )
        if label.endswith("^2"):
            j = int(label[1:-2]) - 1
            return (j, j)
        indices = [int(part[1:]) - 1 for part in label.split(":")]
    else:
        indices = [int(j) - 1 for j in descriptor]
    if not indices or min(indices) < 0:
        raise InconsistentSpecError(
            message=f"Term {descriptor!r} needs 1-based factor indices.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    return tuple(sorted(indices))


# ---------------------------------------------------------------------------
# Model specification document
# ---------------------------------------------------------------------------


class BlocksDocument(BaseModel):
    """Block nuisance: run count per block."""

    model_config = ConfigDict(extra="forbid")

    blocks: list[int] = Field(min_length=1)


class TauGroupsDocument(BaseModel):
    """Separate prior precisions for the interaction and quadratic groups."""

    model_config = ConfigDict(extra="forbid")

    interactions: float = Field(default=0.0, ge=0.0)
    quadratics: float = Field(default=0.0, ge=0.0)


class ModelSpecDocument(BaseModel):
    """Model specification file.

    ``terms`` is ``"auto"`` (all interactions up to ``order``), ``"auto_order_m"``
    (all interactions up to m), or an explicit list of term descriptors.
    """

    model_config = ConfigDict(extra="forbid")

    k: int = Field(ge=1)
    domains: list[FactorDomain] | None = None
    order: int = Field(default=1, ge=1)
    terms: str | list[str | list[int]] = "auto"
    quadratics: bool = False
    potential: Literal["none", "interactions", "quadratics"] | list[str | list[int]] = "none"
    nuisance: Literal["intercept"] | BlocksDocument = "intercept"
    tau2_inv: float | TauGroupsDocument = 0.0
    w: float = Field(default=1e-6, gt=0.0)

    @field_validator("nuisance", mode="before")
    @classmethod
    def normalise_nuisance(cls, value: Any) -> Any:
        """Accept ``{"intercept": ...}`` as the intercept nuisance."""
        if isinstance(value, dict) and set(value) == {"intercept"}:
            return "intercept"
        return value

    @field_validator("tau2_inv")
    @classmethod
    def check_tau(cls, value: float | TauGroupsDocument) -> float | TauGroupsDocument:
        if isinstance(value, float | int) and value < 0.0:
            raise ValueError("tau2_inv must be non-negative")
        return value

    @model_validator(mode="after")
    def check_domains(self) -> ModelSpecDocument:
        if self.domains is not None and len(self.domains) != self.k:
            raise ValueError(f"domains lists {len(self.domains)} factors, k is {self.k}")
        if isinstance(self.terms, str) and not _AUTO_TERMS.match(self.terms):
            raise ValueError(f"terms must be 'auto', 'auto_order_m' or a list, got {self.terms!r}")
        return self

    def to_model_spec(self) -> ModelSpec:
        """Build the validated ModelSpec.

        Raises:
            InconsistentSpecError: If the declared terms violate the model invariants.
        """
        if isinstance(self.terms, str):
            match = _AUTO_TERMS.match(self.terms)
            order = int(match.group(1)) if match and match.group(1) else self.order
            explicit: list[Term] | None = None
        else:
            order = 1
            explicit = [parse_term(descriptor) for descriptor in self.terms]
        potential: Literal["none", "interactions", "quadratics"] | list[Term]
        if isinstance(self.potential, str):
            potential = self.potential
        else:
            potential = [parse_term(descriptor) for descriptor in self.potential]
        nuisance = (
            NuisanceSpec.intercept() if isinstance(self.nuisance, str) else NuisanceSpec.blocks(self.nuisance.blocks)
        )
        tau = self.tau2_inv.model_dump() if isinstance(self.tau2_inv, TauGroupsDocument) else float(self.tau2_inv)
        spec = ModelSpec.build(
            self.k,
            order=order,
            quadratics=self.quadratics,
            potential=potential,
            nuisance=nuisance,
            tau2_inv=tau,
            w=self.w,
            domains=tuple(self.domains) if self.domains is not None else None,
            terms=explicit,
        )
        if not isinstance(self.terms, str) and self.order > spec.order:
            return ModelSpec(
                k=spec.k,
                domains=spec.domains,
                terms=spec.terms,
                primary=spec.primary,
                nuisance=spec.nuisance,
                tau2_inv=spec.tau2_inv,
                w=spec.w,
                order=self.order,
            )
        return spec

