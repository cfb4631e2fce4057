"""Model-row expansion and model matrices.

A term's value at a run is the product of the run's coordinates over the
term's factor multiset, so main effects give x_j, interactions x_j x_j'
and quadratics x_j^2. The model matrix is L = (F | Z) where F stacks the
expanded rows and Z holds the nuisance indicators (a column of ones for an
intercept, one indicator column per block otherwise).

For an interaction model, the entries of a row that involve factor j are
linear in x_j: l1(x) = x * f(1)(x_-j). ``partition_row`` exposes that split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from screenopt.core.models import Design, ModelSpec, NuisanceKind, TermKind, term_kind
from screenopt.errors import DomainViolationError, ErrorCode, InconsistentSpecError


@dataclass(frozen=True, eq=False)
class ModelMatrices:
    """F, Z, L = (F | Z), the prior-precision diagonal tau2_inv * K, and the weight diagonal W.

    K and W are returned as full diagonal matrices; ``k_diag`` and ``w_diag``
    hold the same diagonals as vectors.
    """

    F: np.ndarray
    Z: np.ndarray
    L: np.ndarray
    K: np.ndarray
    W: np.ndarray

    @property
    def k_diag(self) -> np.ndarray:
        return np.diag(self.K).copy()

    @property
    def w_diag(self) -> np.ndarray:
        return np.diag(self.W).copy()


@dataclass(frozen=True, eq=False)
class RowPartition:
    """Split of a model row around factor j.

    Attributes:
        f1_basis: Multiplier of x_j for every term containing j (quadratic excluded).
        l2: Remaining model-row entries followed by the nuisance row.
        f1_index_map: Positions in the full row (terms then nuisance) of the linear terms containing j.
        l2_index_map: Positions in the full row of the ``l2`` entries.
        quadratic_index_map: Position of the (j, j) term, empty when absent.
    """

    f1_basis: np.ndarray
    l2: np.ndarray
    f1_index_map: tuple[int, ...]
    l2_index_map: tuple[int, ...]
    quadratic_index_map: tuple[int, ...]


def _check_row(x: np.ndarray, spec: ModelSpec) -> None:
    if x.shape != (spec.k,):
        raise InconsistentSpecError(
            message=f"Expected a row of {spec.k} settings, got shape {x.shape}.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    for j, domain in enumerate(spec.domains):
        if not domain.admits(float(x[j])):
            raise DomainViolationError(
                message=f"Factor x{j + 1} = {x[j]} is outside the {domain.value} domain.",
                error_code=ErrorCode.DOMAIN_VIOLATION,
            )


def model_row(x: np.ndarray, spec: ModelSpec) -> np.ndarray:
    """Expand settings to model-term values without domain checks."""
    return np.array([np.prod(x[list(term)]) for term in spec.terms], dtype=np.float64)


def expand_row(x: np.ndarray | list[float], spec: ModelSpec) -> np.ndarray:
    """Expand one run's settings into its model row, in spec.terms order.

    Args:
        x: Settings of the k factors.
        spec: Model specification.

    Returns:
        Vector of length p + q.

    Raises:
        DomainViolationError: If a setting lies outside its factor's domain.
    """
    row = np.asarray(x, dtype=np.float64)
    _check_row(row, spec)
    return model_row(row, spec)


def term_columns(settings: np.ndarray, spec: ModelSpec) -> np.ndarray:
    """Model-term matrix F for a settings matrix, one column per term."""
    columns = [np.prod(settings[:, list(term)], axis=1) for term in spec.terms]
    return np.column_stack(columns) if columns else np.zeros((settings.shape[0], 0))


def resolve_blocks(d: Design, spec: ModelSpec) -> np.ndarray:
    """0-based block label per run, from the design when present or else from the block sizes.

    Raises:
        InconsistentSpecError: If the design's block labels disagree with the declared sizes.
    """
    if spec.nuisance.kind is NuisanceKind.INTERCEPT:
        return np.zeros(d.n, dtype=np.int64)
    expected = spec.nuisance.default_block_of(d.n)
    if d.block_of is None:
        return expected
    counts = np.bincount(d.block_of, minlength=spec.b)
    if counts.size != spec.b or tuple(int(c) for c in counts) != spec.nuisance.sizes:
        raise InconsistentSpecError(
            message=f"Design block sizes {counts.tolist()} do not match the declared {list(spec.nuisance.sizes)}.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    return np.asarray(d.block_of, dtype=np.int64)


def nuisance_matrix(d: Design, spec: ModelSpec) -> np.ndarray:
    """Nuisance matrix Z: ones for an intercept, block indicators otherwise."""
    if spec.nuisance.kind is NuisanceKind.INTERCEPT:
        return np.ones((d.n, 1))
    blocks = resolve_blocks(d, spec)
    z = np.zeros((d.n, spec.b))
    z[np.arange(d.n), blocks] = 1.0
    return z


def weight_diagonal(spec: ModelSpec, w: float | None = None) -> np.ndarray:
    """Diagonal of W: one on every term position, w on the nuisance positions."""
    weight = spec.w if w is None else w
    return np.concatenate((np.ones(spec.term_count), np.full(spec.b, weight)))


def prior_diagonal(spec: ModelSpec) -> np.ndarray:
    """Diagonal of tau2_inv * K: the prior precision on potential terms, zero elsewhere."""
    return np.concatenate((np.asarray(spec.tau2_inv, dtype=np.float64), np.zeros(spec.b)))


def build_matrices(d: Design, spec: ModelSpec) -> ModelMatrices:
    """Build F, Z, L, tau2_inv * K and W for a design.

    Raises:
        InconsistentSpecError: If the factor counts differ or blocks do not cover the runs.
        DomainViolationError: If a setting lies outside its factor's domain.
    """
    if d.k != spec.k:
        raise InconsistentSpecError(
            message=f"Design has {d.k} factors, model expects {spec.k}.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    d.check_domains(spec.domains)
    f = term_columns(d.settings, spec)
    z = nuisance_matrix(d, spec)
    return ModelMatrices(
        F=f,
        Z=z,
        L=np.hstack((f, z)),
        K=np.diag(prior_diagonal(spec)),
        W=np.diag(weight_diagonal(spec)),
    )


def partition_row(
    x: np.ndarray | list[float],
    j: int,
    spec: ModelSpec,
    z: np.ndarray | None = None,
) -> RowPartition:
    """Split a run's model row into the part linear in x_j and the rest.

    Args:
        x: Settings of the run.
        j: 0-based factor index.
        spec: Model specification.
        z: Nuisance row of the run; defaults to (1,) for an intercept model.

    Returns:
        RowPartition with f(1), l2 and the index maps.

    Raises:
        InconsistentSpecError: If z is omitted for a blocked model.
    """
    row = np.asarray(x, dtype=np.float64)
    if z is None:
        if spec.nuisance.kind is NuisanceKind.BLOCKS:
            raise InconsistentSpecError(
                message="partition_row needs the run's block indicator row for a blocked model.",
                error_code=ErrorCode.INCONSISTENT_SPEC,
            )
        z = np.ones(1)

    f1_positions: list[int] = []
    f1_basis: list[float] = []
    quadratic_positions: list[int] = []
    for t, term in enumerate(spec.terms):
        if j not in term:
            continue
        if term_kind(term) is TermKind.QUADRATIC:
            quadratic_positions.append(t)
            continue
        others = [factor for factor in term if factor != j]
        f1_positions.append(t)
        f1_basis.append(float(np.prod(row[others])) if others else 1.0)

    full = np.concatenate((model_row(row, spec), np.asarray(z, dtype=np.float64)))
    excluded = set(f1_positions) | set(quadratic_positions)
    l2_positions = tuple(t for t in range(full.size) if t not in excluded)
    return RowPartition(
        f1_basis=np.asarray(f1_basis),
        l2=full[list(l2_positions)],
        f1_index_map=tuple(f1_positions),
        l2_index_map=l2_positions,
        quadratic_index_map=tuple(quadratic_positions),
    )
