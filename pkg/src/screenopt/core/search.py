"""Multi-start coordinate-exchange search.

Each start draws a random nonsingular design and sweeps its coordinates in
row-major order, applying the best exchange per coordinate whenever it
improves the criterion by more than improve_tol. Accepted exchanges update
the inverse information matrix with a rank-two update; the inverse is
rebuilt from a fresh factorization at the end of every pass. A start
converges when a full pass accepts no exchange.

Start i is seeded with seed + i, and results are reduced in start order, so
serial and threaded execution return identical results.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from screenopt.core.criteria import criterion_weights, evaluate, relative_efficiency
from screenopt.core.exchange import ExchangeContext, best_coord_continuous, best_coord_discrete
from screenopt.core.linalg import smw_rank2_inverse_update, sym_factorize
from screenopt.core.modelspec import build_matrices, prior_diagonal
from screenopt.core.models import (
    CriterionConfig,
    CriterionFamily,
    CriterionValue,
    Design,
    DomainMode,
    FactorDomain,
    ModelSpec,
    NuisanceKind,
    ProtocolRound,
    SearchConfig,
    SearchResult,
    SweepRow,
)
from screenopt.errors import (
    AllSingularError,
    AllStartsFailedError,
    CannotFindNonsingularStartError,
    ConvergenceWarning,
    ErrorCode,
    LinearAlgebraError,
    NotPositiveDefiniteError,
    RankDeficitWarning,
    ScreenoptError,
    SingularExchangeError,
)
from screenopt.observability import get_logger

logger = get_logger(__name__)

_SNAP_SLACK: float = 1e-9
_ENDPOINTS: tuple[float, float] = (-1.0, 1.0)

_START_FAILURES: tuple[type[ScreenoptError], ...] = (
    CannotFindNonsingularStartError,
    LinearAlgebraError,
    AllSingularError,
    SingularExchangeError,
)


# ---------------------------------------------------------------------------
# Domains and starts
# ---------------------------------------------------------------------------


def effective_levels(domain: FactorDomain, mode: DomainMode) -> tuple[float, ...] | None:
    """Candidate levels for a factor under a search mode; None means the interval [-1, 1].

    A mode never widens a factor's declared domain: two-level factors stay at
    +-1 and three-level factors never go continuous.
    """
    if mode is DomainMode.PER_FACTOR:
        return domain.levels
    if mode is DomainMode.PM1 or domain is FactorDomain.TWO_LEVEL:
        return _ENDPOINTS
    if mode is DomainMode.PM1_0:
        return (-1.0, 0.0, 1.0)
    return domain.levels


def estimable_minimum(spec: ModelSpec, bayes: bool) -> int:
    """Smallest run size that can give a nonsingular information matrix."""
    if bayes:
        unregularised = sum(1 for tau in spec.tau2_inv if tau == 0.0)
        return unregularised + spec.b
    return spec.term_count + spec.b


def random_start(
    n: int,
    spec: ModelSpec,
    domain_mode: DomainMode,
    rng: np.random.Generator,
    *,
    bayes: bool = False,
    attempts: int = 1000,
) -> Design:
    """Draw a random design whose information matrix is nonsingular.

    Args:
        n: Number of runs.
        spec: Model specification.
        domain_mode: Candidate sets for the draw.
        rng: Random generator owned by the caller.
        bayes: Test L'L + tau2_inv * K instead of L'L.
        attempts: Draws tried before giving up.

    Returns:
        A design with settings drawn uniformly from each factor's candidate set.

    Raises:
        CannotFindNonsingularStartError: If no draw is nonsingular, or n is below the estimable minimum.
    """
    block_of = None if spec.nuisance.kind is NuisanceKind.INTERCEPT else spec.nuisance.default_block_of(n)
    minimum = estimable_minimum(spec, bayes)
    if n < minimum:
        message = f"{n} runs cannot estimate {minimum} parameters."
        warnings.warn(message, RankDeficitWarning, stacklevel=2)
        logger.warning("Run size below estimable minimum", n=n, parameters=minimum)
        raise CannotFindNonsingularStartError(message=message, error_code=ErrorCode.NONSINGULAR_START_NOT_FOUND)

    levels = [effective_levels(domain, domain_mode) for domain in spec.domains]
    prior = prior_diagonal(spec) if bayes else None
    for _ in range(attempts):
        settings = np.column_stack(
            [rng.uniform(-1.0, 1.0, size=n) if lv is None else rng.choice(np.asarray(lv), size=n) for lv in levels],
        )
        design = Design(settings=settings, block_of=block_of)
        mats = build_matrices(design, spec)
        info = mats.L.T @ mats.L
        if prior is not None:
            info = info + np.diag(prior)
        try:
            sym_factorize(info)
        except NotPositiveDefiniteError:
            continue
        return design
    raise CannotFindNonsingularStartError(
        message=f"No nonsingular {n}-run start found in {attempts} draws.",
        error_code=ErrorCode.NONSINGULAR_START_NOT_FOUND,
    )


# ---------------------------------------------------------------------------
# Search state and passes
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class SearchState:
    """Mutable state of one coordinate-exchange run.

    ``value`` is the search objective: log|M| for the D family (constant
    offsets of the s-restricted variants do not change the search) and
    tr[W M^-1] for the A family.
    """

    settings: np.ndarray
    block_of: np.ndarray | None
    z: np.ndarray
    L: np.ndarray
    prior: np.ndarray
    weights: np.ndarray
    family: CriterionFamily
    D: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    value: float = 0.0
    passes: int = 0
    exchanges: int = 0

    @classmethod
    def from_design(cls, d: Design, spec: ModelSpec, cfg: CriterionConfig) -> SearchState:
        """Build a state and its inverse from scratch.

        Raises:
            NotPositiveDefiniteError: If the design's information matrix is singular.
        """
        mats = build_matrices(d, spec)
        prior = mats.k_diag if cfg.family.is_bayes else np.zeros(mats.L.shape[1])
        state = cls(
            settings=d.settings.copy(),
            block_of=None if d.block_of is None else d.block_of.copy(),
            z=mats.Z,
            L=mats.L.copy(),
            prior=prior,
            weights=criterion_weights(spec, cfg),
            family=cfg.family,
        )
        state.refresh()
        return state

    def refresh(self) -> None:
        """Recompute the inverse and objective from a fresh factorization."""
        fact = sym_factorize(self.L.T @ self.L + np.diag(self.prior))
        self.D = fact.inverse()
        if self.family.is_d_family:
            self.value = fact.logdet()
        else:
            self.value = float(self.weights @ np.diag(self.D))

    def design(self) -> Design:
        return Design(settings=self.settings.copy(), block_of=self.block_of)

    def regression(self, before: float) -> float:
        """How much worse the objective is than ``before`` (positive means worse)."""
        if self.family.is_d_family:
            return before - self.value
        return self.value - before


def _accepts(
    family: CriterionFamily,
    delta: float,
    value: float,
    improve_tol: float,
    snap: bool,
) -> bool:
    if family.is_d_family:
        if snap:
            return delta >= 1.0 - _SNAP_SLACK
        return delta > 1.0 and float(np.log(delta)) > improve_tol
    return delta > improve_tol * max(1.0, abs(value))


def cea_pass(
    state: SearchState,
    spec: ModelSpec,
    cfg: CriterionConfig,
    search_cfg: SearchConfig | None = None,
) -> tuple[SearchState, bool]:
    """One row-major sweep over every coordinate of the design.

    Args:
        state: Mutable search state, updated in place.
        spec: Model specification.
        cfg: Criterion being optimised.
        search_cfg: Domain mode and tolerances; defaults when omitted.

    Returns:
        The state and whether any exchange was accepted.
    """
    scfg = search_cfg or SearchConfig()
    family = cfg.family
    start_value = state.value
    levels = [effective_levels(domain, scfg.domain_mode) for domain in spec.domains]
    improved = False
    n, k = state.settings.shape

    for i in range(n):
        ctx: ExchangeContext | None = None
        for j in range(k):
            if ctx is None:
                ctx = ExchangeContext.build(state.D, state.settings[i], state.z[i], spec, state.weights)
            current = float(state.settings[i, j])
            candidates = levels[j]
            if candidates is None:
                move = best_coord_continuous(ctx, j, family)
            else:
                move = best_coord_discrete(ctx, j, candidates, family)
            if move.x == current:
                continue
            snap = (
                candidates is None
                and family.is_d_family
                and not spec.has_quadratic_on(j)
                and abs(current) != 1.0
            )
            if not _accepts(family, move.delta, state.value, scfg.improve_tol, snap):
                continue

            l_new = ctx.row_at(j, move.x)
            state.D = smw_rank2_inverse_update(state.D, l_new, ctx.l_old)
            state.L[i] = l_new
            state.settings[i, j] = move.x
            if family.is_d_family:
                state.value += float(np.log(move.delta))
            else:
                state.value -= move.delta
            state.exchanges += 1
            improved = True
            ctx = None

    if scfg.refresh_every_pass:
        state.refresh()
    regression = state.regression(start_value)
    if regression > scfg.improve_tol * max(1.0, abs(start_value)):
        logger.warning("Criterion regressed across a pass", family=family.value, regression=regression)
    state.passes += 1
    return state, improved


# ---------------------------------------------------------------------------
# Multi-start driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _StartOutcome:
    index: int
    design: Design
    value: CriterionValue
    passes: int
    exchanges: int


def _sorted_rows(columns: np.ndarray, blocks: np.ndarray) -> np.ndarray:
    order = np.lexsort([columns[:, j] for j in reversed(range(columns.shape[1]))] + [blocks])
    return np.column_stack([blocks[order], columns[order]]).ravel()


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    differ = np.flatnonzero(a != b)
    return bool(differ.size) and bool(a[differ[0]] < b[differ[0]])


def canonicalize(design: Design) -> Design:
    """Canonical representative under column sign flips and row order.

    Columns are oriented left to right: column j is negated when that makes
    the row-sorted matrix of columns 1..j lexicographically smaller. Runs are
    then sorted lexicographically within blocks (block order first). Every
    choice depends only on the multiset of runs, so the result does not
    depend on the input row order and canonicalizing twice changes nothing.
    """
    settings = design.settings.copy()
    blocks = design.block_of if design.block_of is not None else np.zeros(design.n, dtype=np.int64)
    for j in range(settings.shape[1]):
        flipped = settings[:, : j + 1].copy()
        flipped[:, j] = -flipped[:, j]
        if _lex_less(_sorted_rows(flipped, blocks), _sorted_rows(settings[:, : j + 1], blocks)):
            settings[:, j] = -settings[:, j]
    settings = settings + 0.0
    keys = [settings[:, j] for j in reversed(range(settings.shape[1]))] + [blocks]
    order = np.lexsort(keys)
    block_of = None if design.block_of is None else design.block_of[order]
    return Design(settings=settings[order], block_of=block_of)


def _canonical_key(design: Design) -> tuple[float, ...]:
    return tuple(float(x) for x in canonicalize(design).settings.ravel())


def run_start(
    index: int,
    n: int,
    spec: ModelSpec,
    cfg: CriterionConfig,
    search_cfg: SearchConfig,
) -> _StartOutcome:
    """Run one seeded start to convergence (or the pass cap)."""
    rng = np.random.default_rng(search_cfg.seed + index)
    design = random_start(
        n,
        spec,
        search_cfg.domain_mode,
        rng,
        bayes=cfg.family.is_bayes,
        attempts=search_cfg.start_attempts,
    )
    state = SearchState.from_design(design, spec, cfg)
    for _ in range(search_cfg.max_passes):
        state, improved = cea_pass(state, spec, cfg, search_cfg)
        if not improved:
            break
    else:
        warnings.warn(
            f"Start {index} stopped at the {search_cfg.max_passes}-pass cap.",
            ConvergenceWarning,
            stacklevel=2,
        )
        logger.warning("Start hit the pass cap", start=index, max_passes=search_cfg.max_passes)
    final = state.design()
    return _StartOutcome(
        index=index,
        design=final,
        value=evaluate(final, spec, cfg),
        passes=state.passes,
        exchanges=state.exchanges,
    )


def _reduce(
    outcomes: list[_StartOutcome],
    failed: int,
    equal_tol: float,
    rounds: tuple[ProtocolRound, ...] = (),
) -> SearchResult:
    best_score = max(outcome.value.score for outcome in outcomes)
    tolerance = equal_tol * max(1.0, abs(best_score))
    contenders = [outcome for outcome in outcomes if best_score - outcome.value.score <= tolerance]
    winner = min(contenders, key=lambda outcome: _canonical_key(outcome.design))
    return SearchResult(
        best_design=canonicalize(winner.design),
        best_value=winner.value,
        per_start_values=tuple(outcome.value.value for outcome in outcomes),
        passes_used=sum(outcome.passes for outcome in outcomes),
        exchanges_made=sum(outcome.exchanges for outcome in outcomes),
        success_count_at_best=len(contenders),
        failed_starts=failed,
        rounds=rounds,
    )


def _run_batch(
    n: int,
    spec: ModelSpec,
    criterion_cfg: CriterionConfig,
    search_cfg: SearchConfig,
) -> tuple[list[_StartOutcome], int, ScreenoptError | None]:
    def run(index: int) -> _StartOutcome | ScreenoptError:
        try:
            return run_start(index, n, spec, criterion_cfg, search_cfg)
        except _START_FAILURES as exc:
            logger.info("Start failed", start=index, error_code=exc.error_code.value, reason=exc.message)
            return exc

    indices = range(search_cfg.starts)
    workers = min(search_cfg.parallel_starts, search_cfg.starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, indices))
    else:
        results = [run(index) for index in indices]

    outcomes = [result for result in results if isinstance(result, _StartOutcome)]
    errors = [result for result in results if not isinstance(result, _StartOutcome)]
    return outcomes, len(errors), errors[-1] if errors else None


def construct(
    n: int,
    spec: ModelSpec,
    criterion_cfg: CriterionConfig,
    search_cfg: SearchConfig,
) -> SearchResult:
    """Run ``starts`` independent coordinate-exchange starts and keep the best design.

    Ties within equal_tol go to the lexicographically smallest canonical design.

    Raises:
        AllStartsFailedError: If no start produced a design.
    """
    outcomes, failed, last_error = _run_batch(n, spec, criterion_cfg, search_cfg)
    if not outcomes:
        raise AllStartsFailedError(
            message=f"All {search_cfg.starts} starts failed: {last_error.message if last_error else 'unknown'}",
            error_code=ErrorCode.ALL_STARTS_FAILED,
        ) from last_error
    result = _reduce(outcomes, failed, search_cfg.equal_tol)
    logger.info(
        "Construction finished",
        family=criterion_cfg.family.value,
        n=n,
        starts=search_cfg.starts,
        best=result.best_value.value,
        successes=result.success_count_at_best,
        failed=failed,
    )
    return result


# ---------------------------------------------------------------------------
# Discrete/continuous protocol
# ---------------------------------------------------------------------------


def _equal(first: float, second: float, tol: float) -> bool:
    return abs(first - second) <= tol * max(1.0, abs(first), abs(second))


def dual_protocol(
    n: int,
    spec: ModelSpec,
    criterion_cfg: CriterionConfig,
    batch: int,
    search_cfg: SearchConfig | None = None,
    *,
    start_cap: int = 1000,
) -> SearchResult:
    """Alternate discrete ({-1, 0, 1}) and continuous batches until neither improves.

    Both modes first run one equally seeded batch. While their best values
    differ, the mode holding the inferior value runs another batch with a
    fresh seed range; the protocol stops when that batch fails to beat the
    incumbent, when the two modes agree within equal_tol, or when the next
    batch would exceed ``start_cap`` total starts.

    Raises:
        AllStartsFailedError: If every start of the opening batches failed.
    """
    scfg = search_cfg or SearchConfig()
    if all(domain is FactorDomain.TWO_LEVEL for domain in spec.domains):
        two_level_cfg = scfg.model_copy(update={"starts": batch, "domain_mode": DomainMode.PM1})
        return construct(n, spec, criterion_cfg, two_level_cfg)

    modes = (DomainMode.PM1_0, DomainMode.CONTINUOUS)
    next_seed = {mode: scfg.seed for mode in modes}
    best: dict[DomainMode, SearchResult] = {}
    all_outcomes: list[SearchResult] = []
    rounds: list[ProtocolRound] = []

    def run_mode(mode: DomainMode) -> SearchResult:
        batch_cfg = scfg.model_copy(update={"starts": batch, "seed": next_seed[mode], "domain_mode": mode})
        result = construct(n, spec, criterion_cfg, batch_cfg)
        rounds.append(ProtocolRound(mode=mode, seed=next_seed[mode], starts=batch, best_value=result.best_value.value))
        logger.info("Protocol batch finished", mode=mode.value, seed=next_seed[mode], best=result.best_value.value)
        next_seed[mode] += batch
        all_outcomes.append(result)
        return result

    for mode in modes:
        best[mode] = run_mode(mode)
    total = 2 * batch

    while True:
        discrete, continuous = best[DomainMode.PM1_0], best[DomainMode.CONTINUOUS]
        if _equal(discrete.best_value.value, continuous.best_value.value, scfg.equal_tol):
            break
        discrete_behind = discrete.best_value.score < continuous.best_value.score
        inferior = DomainMode.PM1_0 if discrete_behind else DomainMode.CONTINUOUS
        superior = DomainMode.CONTINUOUS if inferior is DomainMode.PM1_0 else DomainMode.PM1_0
        if total + batch > start_cap:
            break
        challenger = run_mode(inferior)
        total += batch
        incumbent = best[superior].best_value
        if challenger.best_value.score - incumbent.score <= scfg.equal_tol * max(1.0, abs(incumbent.score)):
            if challenger.best_value.score > best[inferior].best_value.score:
                best[inferior] = challenger
            break
        best[inferior] = challenger

    winner = max(best.values(), key=lambda result: result.best_value.score)
    per_start = tuple(value for result in all_outcomes for value in result.per_start_values)
    tolerance = scfg.equal_tol * max(1.0, abs(winner.best_value.score))
    score_sign = 1.0 if winner.best_value.family.is_d_family else -1.0
    successes = sum(1 for value in per_start if winner.best_value.score - score_sign * value <= tolerance)
    return replace(
        winner,
        per_start_values=per_start,
        passes_used=sum(result.passes_used for result in all_outcomes),
        exchanges_made=sum(result.exchanges_made for result in all_outcomes),
        success_count_at_best=successes,
        failed_starts=sum(result.failed_starts for result in all_outcomes),
        rounds=tuple(rounds),
    )


# ---------------------------------------------------------------------------
# Success-count sweep
# ---------------------------------------------------------------------------


def sweep(
    k_values: list[int],
    n_values_for: dict[int, list[int]],
    criterion_cfg: CriterionConfig,
    batch: int,
    seed: int = 0,
    parallel_starts: int = 1,
    equal_tol: float = 1e-8,
) -> list[SweepRow]:
    """Count, per (k, n), how many starts of each mode reach the better incumbent.

    Args:
        k_values: Factor counts.
        n_values_for: Run sizes to try for each k.
        criterion_cfg: Criterion (normally As).
        batch: Starts per mode.
        seed: Seed shared by both modes.
        parallel_starts: Worker threads.
        equal_tol: Relative tolerance for counting a start as a success.

    Returns:
        One SweepRow per (k, n) that admits a nonsingular main-effect design.
    """
    rows: list[SweepRow] = []
    for k in k_values:
        spec = ModelSpec.build(k)
        for n in n_values_for.get(k, []):
            if n < estimable_minimum(spec, criterion_cfg.family.is_bayes):
                continue
            results = {}
            for mode in (DomainMode.PM1_0, DomainMode.CONTINUOUS):
                scfg = SearchConfig(starts=batch, seed=seed, domain_mode=mode, parallel_starts=parallel_starts)
                results[mode] = construct(n, spec, criterion_cfg, scfg)
            best_score = max(result.best_value.score for result in results.values())
            tolerance = equal_tol * max(1.0, abs(best_score))
            sign = 1.0 if criterion_cfg.family.is_d_family else -1.0

            def successes(result: SearchResult, best_score: float = best_score, tolerance: float = tolerance) -> int:
                return sum(1 for value in result.per_start_values if best_score - sign * value <= tolerance)

            rows.append(
                SweepRow(
                    k=k,
                    n=n,
                    discrete_successes=successes(results[DomainMode.PM1_0]),
                    continuous_successes=successes(results[DomainMode.CONTINUOUS]),
                    discrete_best=results[DomainMode.PM1_0].best_value.value,
                    continuous_best=results[DomainMode.CONTINUOUS].best_value.value,
                    efficiency=relative_efficiency(
                        results[DomainMode.CONTINUOUS].best_value,
                        results[DomainMode.PM1_0].best_value,
                        spec.term_count + spec.b,
                    ),
                ),
            )
            logger.info("Sweep cell finished", k=k, n=n)
    return rows


__all__ = [
    "SearchState",
    "canonicalize",
    "cea_pass",
    "construct",
    "dual_protocol",
    "effective_levels",
    "estimable_minimum",
    "random_start",
    "run_start",
    "sweep",
]
