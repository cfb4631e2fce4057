"""Domain types for screening-design construction and evaluation.

Array-carrying types (ModelSpec, Design, results) are frozen dataclasses;
validated configuration (criterion, search, power) uses pydantic models.
Factor indices are 0-based everywhere in the library.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations
from typing import Literal, NoReturn

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from screenopt.errors import DomainViolationError, ErrorCode, InconsistentSpecError

# A term is a sorted tuple of factor indices: (j,) main, (j, j') interaction, (j, j) quadratic.
Term = tuple[int, ...]

_DOMAIN_TOL: float = 1e-12
DEFAULT_NUISANCE_WEIGHT: float = 1e-6


# ---------------------------------------------------------------------------
# Factors and terms
# ---------------------------------------------------------------------------


class FactorDomain(StrEnum):
    """Admissible settings of a single factor on the coded [-1, 1] scale."""

    TWO_LEVEL = "2level"
    THREE_LEVEL = "3level"
    CONTINUOUS = "continuous"

    @property
    def levels(self) -> tuple[float, ...] | None:
        """Finite level set, or None for the continuous interval."""
        if self is FactorDomain.TWO_LEVEL:
            return (-1.0, 1.0)
        if self is FactorDomain.THREE_LEVEL:
            return (-1.0, 0.0, 1.0)
        return None

    def admits(self, value: float) -> bool:
        """Return True when value is a legal setting for this domain."""
        levels = self.levels
        if levels is None:
            return -1.0 - _DOMAIN_TOL <= value <= 1.0 + _DOMAIN_TOL
        return any(abs(value - level) <= _DOMAIN_TOL for level in levels)


class DomainMode(StrEnum):
    """Candidate sets used by the coordinate-exchange search."""

    PM1 = "pm1"
    PM1_0 = "pm1_0"
    CONTINUOUS = "continuous"
    PER_FACTOR = "per_factor"


class TermKind(StrEnum):
    """Kind of a model term."""

    MAIN = "main"
    INTERACTION = "interaction"
    QUADRATIC = "quadratic"


def term_kind(term: Term) -> TermKind:
    """Classify a term by its factor multiset."""
    if len(term) == 1:
        return TermKind.MAIN
    if len(term) == 2 and term[0] == term[1]:
        return TermKind.QUADRATIC
    return TermKind.INTERACTION


def term_label(term: Term) -> str:
    """Readable 1-based label: ``x1``, ``x1:x3`` or ``x2^2``."""
    if term_kind(term) is TermKind.QUADRATIC:
        return f"x{term[0] + 1}^2"
    return ":".join(f"x{j + 1}" for j in term)


def term_sort_key(term: Term) -> tuple[int, int, Term]:
    """Canonical ordering: mains, interactions by order then lexicographically, quadratics."""
    kind = term_kind(term)
    if kind is TermKind.MAIN:
        return (0, 1, term)
    if kind is TermKind.INTERACTION:
        return (1, len(term), term)
    return (2, 2, term)


# ---------------------------------------------------------------------------
# Nuisance structure
# ---------------------------------------------------------------------------


class NuisanceKind(StrEnum):
    """Nuisance parameters fitted alongside the effects of interest."""

    INTERCEPT = "intercept"
    BLOCKS = "blocks"


@dataclass(frozen=True)
class NuisanceSpec:
    """Intercept or block nuisance structure.

    Attributes:
        kind: INTERCEPT or BLOCKS.
        sizes: Run count per block (BLOCKS only).
    """

    kind: NuisanceKind = NuisanceKind.INTERCEPT
    sizes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is NuisanceKind.BLOCKS:
            if not self.sizes:
                raise InconsistentSpecError(
                    message="Block nuisance needs at least one block size.",
                    error_code=ErrorCode.INCONSISTENT_SPEC,
                )
            if any(size < 1 for size in self.sizes):
                raise InconsistentSpecError(
                    message=f"Every block size must be at least 1, got {list(self.sizes)}.",
                    error_code=ErrorCode.INCONSISTENT_SPEC,
                )
        elif self.sizes:
            raise InconsistentSpecError(
                message="Intercept nuisance does not take block sizes.",
                error_code=ErrorCode.INCONSISTENT_SPEC,
            )

    @classmethod
    def intercept(cls) -> NuisanceSpec:
        return cls(kind=NuisanceKind.INTERCEPT)

    @classmethod
    def blocks(cls, sizes: tuple[int, ...] | list[int]) -> NuisanceSpec:
        return cls(kind=NuisanceKind.BLOCKS, sizes=tuple(int(size) for size in sizes))

    @property
    def width(self) -> int:
        """Number of nuisance parameters b."""
        return len(self.sizes) if self.kind is NuisanceKind.BLOCKS else 1

    @property
    def labels(self) -> tuple[str, ...]:
        if self.kind is NuisanceKind.INTERCEPT:
            return ("intercept",)
        return tuple(f"block{h + 1}" for h in range(len(self.sizes)))

    def default_block_of(self, n: int) -> np.ndarray:
        """Sequential 0-based block labels for n runs: the first sizes[0] runs form block 0, and so on.

        Raises:
            InconsistentSpecError: If the block sizes do not sum to n.
        """
        if self.kind is NuisanceKind.INTERCEPT:
            return np.zeros(n, dtype=np.int64)
        if sum(self.sizes) != n:
            raise InconsistentSpecError(
                message=f"Block sizes {list(self.sizes)} sum to {sum(self.sizes)}, design has {n} runs.",
                error_code=ErrorCode.INCONSISTENT_SPEC,
            )
        return np.repeat(np.arange(len(self.sizes), dtype=np.int64), self.sizes)


# ---------------------------------------------------------------------------
# Model specification
# ---------------------------------------------------------------------------

PotentialSelector = Literal["interactions", "quadratics", "none"]


@dataclass(frozen=True)
class ModelSpec:
    """Model terms, primary/potential partition, and nuisance structure.

    Attributes:
        k: Number of factors.
        domains: Per-factor domain.
        terms: Terms in canonical order.
        primary: Per-term flag; False marks a potential term.
        nuisance: Intercept or block structure.
        tau2_inv: Per-term prior precision; zero on primary terms.
        w: Nuisance weight for weighted A criteria.
        order: Declared interaction order m.
    """

    k: int
    domains: tuple[FactorDomain, ...]
    terms: tuple[Term, ...]
    primary: tuple[bool, ...]
    nuisance: NuisanceSpec = field(default_factory=NuisanceSpec.intercept)
    tau2_inv: tuple[float, ...] = ()
    w: float = DEFAULT_NUISANCE_WEIGHT
    order: int = 1

    def __post_init__(self) -> None:
        if not self.tau2_inv:
            object.__setattr__(self, "tau2_inv", tuple(0.0 for _ in self.terms))
        self._validate()

    def _fail(self, message: str) -> NoReturn:
        raise InconsistentSpecError(message=message, error_code=ErrorCode.INCONSISTENT_SPEC)

    def _validate(self) -> None:
        if self.k < 1:
            self._fail(f"Factor count must be positive, got {self.k}.")
        if len(self.domains) != self.k:
            self._fail(f"Expected {self.k} factor domains, got {len(self.domains)}.")
        if len(self.primary) != len(self.terms) or len(self.tau2_inv) != len(self.terms):
            self._fail("primary and tau2_inv must have one entry per term.")
        if len(set(self.terms)) != len(self.terms):
            self._fail("Model terms must not repeat.")
        if list(self.terms) != sorted(self.terms, key=term_sort_key):
            self._fail("Model terms must be in canonical order (mains, interactions, quadratics).")
        if self.w <= 0.0:
            self._fail(f"Nuisance weight w must be positive, got {self.w}.")

        for term, is_primary, tau in zip(self.terms, self.primary, self.tau2_inv, strict=True):
            if not term or any(j < 0 or j >= self.k for j in term) or list(term) != sorted(term):
                self._fail(f"Term {term} must list sorted factor indices in [0, {self.k}).")
            kind = term_kind(term)
            if kind is TermKind.INTERACTION and len(set(term)) != len(term):
                self._fail(f"Term {term_label(term)} repeats a factor; only pure quadratics may.")
            if kind is TermKind.INTERACTION and len(term) > self.order:
                self._fail(f"Term {term_label(term)} exceeds the declared interaction order {self.order}.")
            if kind is TermKind.QUADRATIC and self.domains[term[0]] is FactorDomain.TWO_LEVEL:
                self._fail(f"Quadratic term {term_label(term)} needs a three-level or continuous factor.")
            if kind is TermKind.MAIN and not is_primary:
                self._fail(f"Main effect {term_label(term)} must be primary.")
            if tau < 0.0:
                self._fail(f"Prior precision for {term_label(term)} must be non-negative.")
            if is_primary and tau != 0.0:
                self._fail(f"Primary term {term_label(term)} cannot carry a prior precision.")

        mains = {term[0] for term in self.terms if len(term) == 1}
        missing = sorted(set(range(self.k)) - mains)
        if missing:
            labels = ", ".join(term_label((j,)) for j in missing)
            self._fail(f"Every factor needs its main-effect term; missing {labels}.")

    # ------------------------------------------------------------------
    # Builders
    # ------------------------------------------------------------------

    @classmethod
    def build(
        cls,
        k: int,
        *,
        order: int = 1,
        quadratics: bool = False,
        potential: PotentialSelector | list[Term] = "none",
        nuisance: NuisanceSpec | None = None,
        tau2_inv: float | Mapping[str, float] = 0.0,
        w: float = DEFAULT_NUISANCE_WEIGHT,
        domains: tuple[FactorDomain, ...] | None = None,
        terms: list[Term] | None = None,
    ) -> ModelSpec:
        """Build a spec with all interactions up to ``order`` and optional quadratics, or an exact term list.

        Args:
            k: Number of factors.
            order: Interaction order m (1 = main effects only).
            quadratics: Append a quadratic term for every non-two-level factor.
            potential: "interactions", "quadratics", "none", or an explicit term list.
            nuisance: Nuisance structure; intercept when omitted.
            tau2_inv: One prior precision for every potential term, or a mapping
                with "interactions" and "quadratics" keys.
            w: Nuisance weight.
            domains: Per-factor domains; continuous when omitted.
            terms: Exact model terms; ``order`` and ``quadratics`` are then ignored
                and every main effect must be listed.

        Returns:
            A validated ModelSpec in canonical term order.

        Raises:
            InconsistentSpecError: If the terms violate the model invariants, for
                instance an explicit list without some main effect.
        """
        factor_domains = domains if domains is not None else tuple(FactorDomain.CONTINUOUS for _ in range(k))
        selected: set[Term]
        if terms is not None:
            selected = {tuple(sorted(term)) for term in terms}
            order = 1
        else:
            selected = {(j,) for j in range(k)}
            for size in range(2, order + 1):
                selected.update(combinations(range(k), size))
            if quadratics:
                selected.update((j, j) for j in range(k) if factor_domains[j] is not FactorDomain.TWO_LEVEL)
        ordered = tuple(sorted(selected, key=term_sort_key))

        if isinstance(potential, str):
            if potential == "interactions":
                potential_set = {t for t in ordered if term_kind(t) is TermKind.INTERACTION}
            elif potential == "quadratics":
                potential_set = {t for t in ordered if term_kind(t) is TermKind.QUADRATIC}
            else:
                potential_set = set()
        else:
            potential_set = {tuple(sorted(t)) for t in potential}
            missing = potential_set - set(ordered)
            if missing:
                raise InconsistentSpecError(
                    message=f"Potential terms {sorted(missing)} are not model terms.",
                    error_code=ErrorCode.INCONSISTENT_SPEC,
                )

        if isinstance(tau2_inv, Mapping):
            tau_by_kind = {
                TermKind.INTERACTION: float(tau2_inv.get("interactions", 0.0)),
                TermKind.QUADRATIC: float(tau2_inv.get("quadratics", 0.0)),
            }
        else:
            tau_by_kind = {TermKind.INTERACTION: float(tau2_inv), TermKind.QUADRATIC: float(tau2_inv)}

        primary = tuple(t not in potential_set for t in ordered)
        taus = tuple(
            0.0 if is_primary else tau_by_kind.get(term_kind(t), 0.0)
            for t, is_primary in zip(ordered, primary, strict=True)
        )
        declared_order = max([order, *(len(t) for t in ordered if term_kind(t) is TermKind.INTERACTION)])
        return cls(
            k=k,
            domains=tuple(factor_domains),
            terms=ordered,
            primary=primary,
            nuisance=nuisance or NuisanceSpec.intercept(),
            tau2_inv=taus,
            w=w,
            order=declared_order,
        )

    def _subset(self, keep: list[int]) -> ModelSpec:
        return ModelSpec(
            k=self.k,
            domains=self.domains,
            terms=tuple(self.terms[t] for t in keep),
            primary=tuple(True for _ in keep),
            nuisance=self.nuisance,
            tau2_inv=tuple(0.0 for _ in keep),
            w=self.w,
            order=self.order,
        )

    def primary_only(self) -> ModelSpec:
        """Submodel holding only the primary terms (all of them primary)."""
        return self._subset(list(self.primary_indices))

    def main_effects_only(self) -> ModelSpec:
        """Main-effect submodel with the same nuisance structure."""
        return self._subset(list(self.main_indices))

    # ------------------------------------------------------------------
    # Derived views
    # ------------------------------------------------------------------

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def p(self) -> int:
        """Number of primary terms."""
        return sum(self.primary)

    @property
    def q(self) -> int:
        """Number of potential terms."""
        return self.term_count - self.p

    @property
    def b(self) -> int:
        """Number of nuisance parameters."""
        return self.nuisance.width

    @property
    def primary_indices(self) -> tuple[int, ...]:
        return tuple(t for t, is_primary in enumerate(self.primary) if is_primary)

    @property
    def potential_indices(self) -> tuple[int, ...]:
        return tuple(t for t, is_primary in enumerate(self.primary) if not is_primary)

    def indices_of(self, kind: TermKind) -> tuple[int, ...]:
        return tuple(t for t, term in enumerate(self.terms) if term_kind(term) is kind)

    @property
    def main_indices(self) -> tuple[int, ...]:
        return self.indices_of(TermKind.MAIN)

    @property
    def interaction_indices(self) -> tuple[int, ...]:
        return self.indices_of(TermKind.INTERACTION)

    @property
    def quadratic_indices(self) -> tuple[int, ...]:
        return self.indices_of(TermKind.QUADRATIC)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(term_label(term) for term in self.terms)

    @property
    def has_prior(self) -> bool:
        return any(tau > 0.0 for tau in self.tau2_inv)

    def has_quadratic_on(self, j: int) -> bool:
        return (j, j) in self.terms

    @property
    def is_interaction_model(self) -> bool:
        """True when no factor carries a quadratic term."""
        return not self.quadratic_indices


# ---------------------------------------------------------------------------
# Designs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Design:
    """An n x k matrix of coded factor settings with optional block labels.

    Attributes:
        settings: Read-only float array of shape (n, k).
        block_of: Optional read-only 0-based block label per run.
    """

    settings: np.ndarray
    block_of: np.ndarray | None = None

    def __post_init__(self) -> None:
        settings = np.array(self.settings, dtype=np.float64)
        if settings.ndim != 2 or settings.shape[0] < 1 or settings.shape[1] < 1:
            raise InconsistentSpecError(
                message=f"Design settings must be a non-empty n x k matrix, got shape {settings.shape}.",
                error_code=ErrorCode.INCONSISTENT_SPEC,
            )
        settings.setflags(write=False)
        object.__setattr__(self, "settings", settings)
        if self.block_of is not None:
            blocks = np.array(self.block_of, dtype=np.int64)
            if blocks.shape != (settings.shape[0],) or (blocks < 0).any():
                raise InconsistentSpecError(
                    message="block_of needs one non-negative label per run.",
                    error_code=ErrorCode.INCONSISTENT_SPEC,
                )
            blocks.setflags(write=False)
            object.__setattr__(self, "block_of", blocks)

    @property
    def n(self) -> int:
        return int(self.settings.shape[0])

    @property
    def k(self) -> int:
        return int(self.settings.shape[1])

    def with_setting(self, i: int, j: int, value: float) -> Design:
        """Copy of the design with one coordinate replaced."""
        settings = self.settings.copy()
        settings[i, j] = value
        return Design(settings=settings, block_of=self.block_of)

    def with_row(self, i: int, row: np.ndarray | list[float]) -> Design:
        """Copy of the design with one run replaced."""
        settings = self.settings.copy()
        settings[i] = np.asarray(row, dtype=np.float64)
        return Design(settings=settings, block_of=self.block_of)

    def check_domains(self, domains: tuple[FactorDomain, ...]) -> None:
        """Raise DomainViolationError when any setting lies outside its factor's domain."""
        for j, domain in enumerate(domains):
            for i, value in enumerate(self.settings[:, j]):
                if not domain.admits(float(value)):
                    raise DomainViolationError(
                        message=f"Run {i + 1}, factor x{j + 1}: {value} is outside the {domain.value} domain.",
                        error_code=ErrorCode.DOMAIN_VIOLATION,
                    )


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------


class Orientation(StrEnum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class CriterionFamily(StrEnum):
    """The D- and A-family criteria, plain, s-restricted, weighted and Bayesian."""

    D = "D"
    DS = "Ds"
    A = "A"
    AS = "As"
    AW = "AW"
    BAYES_D = "bayes-D"
    BAYES_DS = "bayes-Ds"
    BAYES_A = "bayes-A"
    BAYES_AS = "bayes-As"
    BAYES_AW = "bayes-AW"

    @property
    def is_bayes(self) -> bool:
        return self.value.startswith("bayes-")

    @property
    def is_d_family(self) -> bool:
        return self in _D_FAMILIES

    @property
    def is_weighted(self) -> bool:
        """True for criteria that down-weight nuisance positions by w."""
        return self in _WEIGHTED_FAMILIES

    @property
    def is_s_restricted(self) -> bool:
        return self in _S_FAMILIES

    @property
    def orientation(self) -> Orientation:
        return Orientation.MAXIMIZE if self.is_d_family else Orientation.MINIMIZE


_D_FAMILIES: frozenset[CriterionFamily] = frozenset(
    {CriterionFamily.D, CriterionFamily.DS, CriterionFamily.BAYES_D, CriterionFamily.BAYES_DS},
)
_WEIGHTED_FAMILIES: frozenset[CriterionFamily] = frozenset(
    {CriterionFamily.AW, CriterionFamily.AS, CriterionFamily.BAYES_AW, CriterionFamily.BAYES_AS},
)
_S_FAMILIES: frozenset[CriterionFamily] = frozenset(
    {CriterionFamily.DS, CriterionFamily.AS, CriterionFamily.BAYES_DS, CriterionFamily.BAYES_AS},
)


class CriterionConfig(BaseModel):
    """Criterion to optimise plus its weight parameter.

    Bayesian families read their prior precisions from the ModelSpec.
    """

    model_config = ConfigDict(frozen=True)

    family: CriterionFamily
    w: float = Field(default=DEFAULT_NUISANCE_WEIGHT, gt=0.0, description="Nuisance weight for weighted families")

    @property
    def uses_tau(self) -> bool:
        return self.family.is_bayes


class CriterionValue(BaseModel):
    """A criterion evaluation.

    ``value`` is the quantity the search optimises (log scale for the D family,
    the w-surrogate for s-restricted A criteria). ``exact`` carries the
    nuisance-adjusted beta-block trace for the s-restricted A criteria.
    """

    model_config = ConfigDict(frozen=True)

    family: CriterionFamily
    value: float
    orientation: Orientation
    exact: float | None = None

    @property
    def score(self) -> float:
        """Larger-is-better version of ``value``."""
        return self.value if self.orientation is Orientation.MAXIMIZE else -self.value


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


class SearchConfig(BaseModel):
    """Multi-start coordinate-exchange settings."""

    model_config = ConfigDict(frozen=True)

    starts: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    domain_mode: DomainMode = DomainMode.PER_FACTOR
    max_passes: int = Field(default=100, ge=1)
    improve_tol: float = Field(default=1e-10, gt=0.0)
    equal_tol: float = Field(default=1e-8, gt=0.0)
    refresh_every_pass: bool = True
    parallel_starts: int = Field(default=1, ge=1)
    start_attempts: int = Field(default=1000, ge=1)


@dataclass(frozen=True)
class ProtocolRound:
    """One batch of the discrete/continuous protocol."""

    mode: DomainMode
    seed: int
    starts: int
    best_value: float


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of a multi-start search.

    Attributes:
        best_design: Canonicalised best design.
        best_value: Criterion value of the best design.
        per_start_values: Final value of every successful start, in start order.
        passes_used: Total coordinate-exchange passes across starts.
        exchanges_made: Total accepted coordinate exchanges across starts.
        success_count_at_best: Starts whose value equals the best within equal_tol.
        failed_starts: Starts that could not produce a design.
        rounds: Batches run by the discrete/continuous protocol.
    """

    best_design: Design
    best_value: CriterionValue
    per_start_values: tuple[float, ...]
    passes_used: int
    exchanges_made: int
    success_count_at_best: int
    failed_starts: int = 0
    rounds: tuple[ProtocolRound, ...] = ()


@dataclass(frozen=True)
class SweepRow:
    """Success counts of the discrete and continuous batches for one (k, n).

    ``efficiency`` is the continuous incumbent relative to the discrete one;
    above 1 means the continuous search found the better design.
    """

    k: int
    n: int
    discrete_successes: int
    continuous_successes: int
    discrete_best: float
    continuous_best: float
    efficiency: float


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


class PowerQuery(BaseModel):
    """Two-sided t-test power request for one primary effect.

    ``effect_index`` is the 0-based position among the primary terms.
    ``df`` overrides the residual degrees of freedom; ``inf`` gives the z-test limit.
    """

    model_config = ConfigDict(frozen=True)

    effect_index: int = Field(ge=0)
    beta_over_sigma: float
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    df: float | None = Field(default=None, gt=0.0)


@dataclass(frozen=True)
class BiasVarianceMetrics:
    """Variance and bias surrogates for second-order screening models."""

    a_m: float
    ss_q: float
    ss_mi: float

    @property
    def log_a_m(self) -> float:
        return float(np.log(self.a_m))

    @property
    def log_ss_q(self) -> float:
        return float(np.log(self.ss_q)) if self.ss_q > 0.0 else float("-inf")

    @property
    def log_ss_mi_plus_one(self) -> float:
        return float(np.log1p(self.ss_mi))


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    """Variances, aliasing, scalar surrogates and criterion values for a design/model pair."""

    variances: np.ndarray
    variance_labels: tuple[str, ...]
    alias: np.ndarray
    alias_row_labels: tuple[str, ...]
    alias_col_labels: tuple[str, ...]
    tr_ata: float
    metrics: BiasVarianceMetrics | None
    criterion_values: dict[CriterionFamily, float | None]
    power: float | None = None

    @property
    def a_m(self) -> float | None:
        return None if self.metrics is None else self.metrics.a_m


@dataclass(frozen=True, eq=False)
class ComparisonEntry:
    """One design's row in a comparison table; ``error`` is set when it is not estimable."""

    design_id: str
    sorted_variances: np.ndarray | None
    criterion_values: dict[CriterionFamily, float | None]
    tr_ata: float | None
    error: str | None = None


@dataclass(frozen=True, eq=False)
class PairedComparison:
    """Paired differences of ascending-ordered variances, first minus second."""

    first: str
    second: str
    differences: np.ndarray
    percent_smaller: float
    percent_equal: float
    percent_larger: float


@dataclass(frozen=True)
class ComparisonTable:
    entries: tuple[ComparisonEntry, ...]
    pairs: tuple[PairedComparison, ...]


@dataclass(frozen=True)
class RowExchangeCandidate:
    """Criterion delta for replacing one run by a candidate row; None when the exchange is singular."""

    row: tuple[float, ...]
    delta: float | None
