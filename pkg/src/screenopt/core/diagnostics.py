"""Bias and variance diagnostics for a design under a model specification.

The fitted model is L1 = (F1 | Z): primary terms plus nuisance. Potential
terms F2 that are left out bias the fit by A beta2, where
A = (L1'L1)^-1 L1'F2 is the alias matrix.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from itertools import combinations

import numpy as np
from scipy import stats

from screenopt.core.criteria import criterion_weights, effect_variances, evaluate, information_matrix
from screenopt.core.exchange import ExchangeContext, delta_A_row, delta_D_row
from screenopt.core.linalg import sym_factorize
from screenopt.core.modelspec import build_matrices, model_row
from screenopt.core.models import (
    BiasVarianceMetrics,
    ComparisonEntry,
    ComparisonTable,
    CriterionConfig,
    CriterionFamily,
    Design,
    DiagnosticsReport,
    ModelSpec,
    PairedComparison,
    PowerQuery,
    RowExchangeCandidate,
)
from screenopt.errors import (
    ErrorCode,
    InvalidInputError,
    NoResidualDFError,
    NotPositiveDefiniteError,
    SingularDesignError,
    SingularExchangeError,
)
from screenopt.observability import get_logger

logger = get_logger(__name__)

_ZERO_TOL: float = 1e-10
_RANK_TOL: float = 1e-10


def _fitted_columns(spec: ModelSpec) -> list[int]:
    return list(spec.primary_indices) + list(range(spec.term_count, spec.term_count + spec.b))


def alias_matrix(d: Design, spec: ModelSpec) -> np.ndarray:
    """Alias matrix A = (L1'L1)^-1 L1'F2 of the primary-plus-nuisance fit.

    Args:
        d: Design.
        spec: Model specification; its potential terms form F2.

    Returns:
        (p + b) x q matrix with rows in primary-then-nuisance order.

    Raises:
        SingularDesignError: If L1 is not of full column rank.
    """
    mats = build_matrices(d, spec)
    l1 = mats.L[:, _fitted_columns(spec)]
    f2 = mats.L[:, list(spec.potential_indices)]
    try:
        fact = sym_factorize(l1.T @ l1)
    except NotPositiveDefiniteError as exc:
        raise SingularDesignError(
            message="The design cannot estimate the primary terms and nuisance.",
            error_code=ErrorCode.SINGULAR_DESIGN,
        ) from exc
    if f2.shape[1] == 0:
        return np.zeros((l1.shape[1], 0))
    return fact.solve(l1.T @ f2)


def tr_ata(alias: np.ndarray) -> float:
    """Sum of squared alias entries."""
    return float(np.sum(alias * alias))


def bias_variance_metrics(d: Design, spec: ModelSpec) -> BiasVarianceMetrics:
    """Main-effect variance total and the quadratic and main-by-interaction aliasing sums.

    A_M is the sum of main-effect variances under the main-effects-plus-nuisance
    fit. SS_Q sums squared off-diagonal entries of F_Q'F_Q and SS_MI sums
    squared entries of F_M'F_I, with F_M, F_I and F_Q the main-effect,
    interaction and quadratic columns of the model. Either sum is zero when
    its columns are absent.

    Raises:
        SingularDesignError: If the main-effect model is not estimable.
    """
    a_m = float(np.sum(effect_variances(d, spec.main_effects_only(), submodel=False)))
    f = build_matrices(d, spec).F
    f_m = f[:, list(spec.main_indices)]
    f_i = f[:, list(spec.interaction_indices)]
    f_q = f[:, list(spec.quadratic_indices)]

    gram_q = f_q.T @ f_q
    ss_q = float(np.sum(gram_q * gram_q) - np.sum(np.diag(gram_q) ** 2))
    cross = f_m.T @ f_i
    ss_mi = float(np.sum(cross * cross))
    return BiasVarianceMetrics(a_m=a_m, ss_q=max(ss_q, 0.0), ss_mi=ss_mi)


def power_from_variance(variance: float, beta_over_sigma: float, alpha: float, df: float) -> float:
    """Power of the two-sided level-alpha t-test with noncentrality beta/sigma / sqrt(variance).

    ``df = inf`` evaluates the normal limit.
    """
    ncp = beta_over_sigma / float(np.sqrt(variance))
    if np.isinf(df):
        z = float(stats.norm.isf(alpha / 2.0))
        return float(stats.norm.sf(z - ncp) + stats.norm.cdf(-z - ncp))
    t_crit = float(stats.t.isf(alpha / 2.0, df))
    if ncp == 0.0:
        return float(2.0 * stats.t.sf(t_crit, df))
    return float(stats.nct.sf(t_crit, df, ncp) + stats.nct.cdf(-t_crit, df, ncp))


def residual_df(d: Design, spec: ModelSpec) -> int:
    """n minus the rank of the primary-plus-nuisance model matrix."""
    l1 = build_matrices(d, spec).L[:, _fitted_columns(spec)]
    return d.n - int(np.linalg.matrix_rank(l1, tol=_RANK_TOL * max(1.0, float(np.max(np.abs(l1))))))


def t_test_power(d: Design, spec: ModelSpec, q: PowerQuery) -> float:
    """Power of the t-test of one primary effect under the submodel fit.

    Args:
        d: Design.
        spec: Model specification.
        q: Effect (0-based among primary terms), effect size, level and optional df override.

    Returns:
        Power in [alpha, 1).

    Raises:
        InvalidInputError: If the effect index is out of range.
        NoResidualDFError: If the fit leaves no residual degrees of freedom.
        SingularDesignError: If the submodel is not estimable.
    """
    if q.effect_index >= spec.p:
        raise InvalidInputError(
            message=f"Effect index {q.effect_index} is out of range for {spec.p} primary terms.",
            error_code=ErrorCode.INVALID_INPUT,
        )
    variance = float(effect_variances(d, spec, submodel=True)[q.effect_index])
    df = q.df if q.df is not None else float(residual_df(d, spec))
    if df < 1.0:
        raise NoResidualDFError(
            message=f"A {d.n}-run design leaves no residual degrees of freedom for the fitted model.",
            error_code=ErrorCode.NO_RESIDUAL_DF,
        )
    power = power_from_variance(variance, q.beta_over_sigma, q.alpha, df)
    logger.debug("Power computed", effect=q.effect_index, variance=variance, df=df, power=power)
    return power


def criterion_values(d: Design, spec: ModelSpec) -> dict[CriterionFamily, float | None]:
    """Value of every criterion family on the design; None where the family's matrix is singular."""
    values: dict[CriterionFamily, float | None] = {}
    for family in CriterionFamily:
        try:
            values[family] = evaluate(d, spec, CriterionConfig(family=family, w=spec.w)).value
        except SingularDesignError:
            values[family] = None
    return values


def diagnose(
    d: Design,
    spec: ModelSpec,
    *,
    submodel: bool = True,
    power: PowerQuery | None = None,
) -> DiagnosticsReport:
    """Assemble variances, alias matrix, surrogates, criterion values and optional power.

    Args:
        d: Design.
        spec: Model specification.
        submodel: Report primary-term variances under the primary fit; otherwise all term variances.
        power: Optional power query.

    Raises:
        SingularDesignError: If the fitted model is not estimable.
        NoResidualDFError: If power is requested but no residual df remain.
    """
    variances = effect_variances(d, spec, submodel=submodel)
    variance_labels = tuple(spec.labels[t] for t in spec.primary_indices) if submodel else spec.labels
    alias = alias_matrix(d, spec)
    try:
        metrics: BiasVarianceMetrics | None = bias_variance_metrics(d, spec)
    except SingularDesignError:
        logger.info("Main-effect model not estimable; surrogates omitted", n=d.n)
        metrics = None
    return DiagnosticsReport(
        variances=variances,
        variance_labels=variance_labels,
        alias=alias,
        alias_row_labels=tuple(spec.labels[t] for t in spec.primary_indices) + spec.nuisance.labels,
        alias_col_labels=tuple(spec.labels[t] for t in spec.potential_indices),
        tr_ata=tr_ata(alias),
        metrics=metrics,
        criterion_values=criterion_values(d, spec),
        power=None if power is None else t_test_power(d, spec, power),
    )


def _pair(first: ComparisonEntry, second: ComparisonEntry) -> PairedComparison:
    assert first.sorted_variances is not None and second.sorted_variances is not None
    differences = first.sorted_variances - second.sorted_variances
    count = differences.size
    smaller = int(np.sum(differences < -_ZERO_TOL))
    larger = int(np.sum(differences > _ZERO_TOL))
    return PairedComparison(
        first=first.design_id,
        second=second.design_id,
        differences=differences,
        percent_smaller=100.0 * smaller / count,
        percent_equal=100.0 * (count - smaller - larger) / count,
        percent_larger=100.0 * larger / count,
    )


def compare_designs(designs: Sequence[tuple[str, Design]], spec: ModelSpec) -> ComparisonTable:
    """Sorted submodel variances, criterion values and tr(A'A) per design, plus every ordered pair.

    Non-estimable designs keep their row with ``error`` set and take no part in pairs.
    """
    entries: list[ComparisonEntry] = []
    for design_id, design in designs:
        try:
            variances = np.sort(effect_variances(design, spec, submodel=True))
            trace = tr_ata(alias_matrix(design, spec))
        except SingularDesignError as exc:
            logger.info("Design not estimable", design=design_id)
            entries.append(
                ComparisonEntry(
                    design_id=design_id,
                    sorted_variances=None,
                    criterion_values={},
                    tr_ata=None,
                    error=exc.message,
                ),
            )
            continue
        entries.append(
            ComparisonEntry(
                design_id=design_id,
                sorted_variances=variances,
                criterion_values=criterion_values(design, spec),
                tr_ata=trace,
            ),
        )
    usable = [entry for entry in entries if entry.error is None]
    pairs = tuple(_pair(first, second) for first, second in combinations(usable, 2))
    return ComparisonTable(entries=tuple(entries), pairs=pairs)


def scan_row_exchanges(
    d: Design,
    spec: ModelSpec,
    cfg: CriterionConfig,
    i: int,
    candidates: Iterable[Sequence[float]],
) -> tuple[RowExchangeCandidate, ...]:
    """Row-exchange delta of the active criterion for replacing run i by each candidate row.

    D-family deltas are determinant ratios and A-family deltas are decreases
    of the weighted trace; singular exchanges report None.

    Raises:
        SingularDesignError: If the current design's information matrix is singular.
    """
    info = information_matrix(d, spec, bayes=cfg.family.is_bayes)
    try:
        inverse = sym_factorize(info).inverse()
    except NotPositiveDefiniteError as exc:
        raise SingularDesignError(
            message="The current design is singular for this criterion.",
            error_code=ErrorCode.SINGULAR_DESIGN,
        ) from exc
    z = build_matrices(d, spec).Z[i]
    ctx = ExchangeContext.build(inverse, d.settings[i], z, spec, criterion_weights(spec, cfg))

    scanned: list[RowExchangeCandidate] = []
    for candidate in candidates:
        row = np.asarray(candidate, dtype=np.float64)
        l_new = np.concatenate((model_row(row, spec), z))
        delta: float | None
        if cfg.family.is_d_family:
            ratio = delta_D_row(ctx, l_new)
            delta = ratio if ratio > _ZERO_TOL else None
        else:
            try:
                delta = delta_A_row(ctx, l_new)
            except SingularExchangeError:
                delta = None
        scanned.append(RowExchangeCandidate(row=tuple(float(x) for x in row), delta=delta))
    return tuple(scanned)
