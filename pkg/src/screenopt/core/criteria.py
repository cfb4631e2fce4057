"""D- and A-family criterion evaluation.

With M = L'L (plus tau2_inv * K for the Bayesian families):

    D,  bayes-D     log|M|
    Ds, bayes-Ds    log|M| - log|Z'Z|     (= log|F'(I - P_Z)F| for the non-Bayesian case)
    A,  bayes-A     tr[M^-1]
    AW, bayes-AW    tr[W M^-1]            (W = diag(1, ..., 1, w, ..., w))
    As, bayes-As    tr[W M^-1] with the surrogate weight w, plus the exact beta-block trace

D-family values stay on the log scale. sigma^2 is fixed at 1.
"""

from __future__ import annotations

import numpy as np

from screenopt.core.linalg import SymFactorization, logdet, sym_factorize
from screenopt.core.modelspec import build_matrices, weight_diagonal
from screenopt.core.models import CriterionConfig, CriterionFamily, CriterionValue, Design, ModelSpec
from screenopt.errors import ErrorCode, NotPositiveDefiniteError, SingularDesignError


def information_matrix(d: Design, spec: ModelSpec, *, bayes: bool = True) -> np.ndarray:
    """Return L'L + tau2_inv * K, or plain L'L when ``bayes`` is False."""
    mats = build_matrices(d, spec)
    info = mats.L.T @ mats.L
    if bayes:
        info = info + mats.K
    return info


def _factorize(info: np.ndarray, what: str) -> SymFactorization:
    try:
        return sym_factorize(info)
    except NotPositiveDefiniteError as exc:
        raise SingularDesignError(
            message=f"The design cannot estimate every effect of the {what}.",
            error_code=ErrorCode.SINGULAR_DESIGN,
        ) from exc


def criterion_weights(spec: ModelSpec, cfg: CriterionConfig) -> np.ndarray:
    """Diagonal of the weight matrix a criterion applies to (L'L + tau2_inv K)^-1.

    Weighted and s-restricted families use cfg.w on the nuisance positions;
    the plain A families and the D family use the identity.
    """
    if cfg.family.is_weighted:
        return weight_diagonal(spec, cfg.w)
    return np.ones(spec.term_count + spec.b)


def evaluate(d: Design, spec: ModelSpec, cfg: CriterionConfig) -> CriterionValue:
    """Evaluate one criterion on a design.

    Args:
        d: Design to evaluate.
        spec: Model specification.
        cfg: Criterion family and weight.

    Returns:
        CriterionValue; s-restricted A criteria also carry the exact beta-block trace.

    Raises:
        SingularDesignError: If the relevant information matrix is not positive definite.
    """
    family = cfg.family
    mats = build_matrices(d, spec)
    info = mats.L.T @ mats.L
    if family.is_bayes:
        info = info + mats.K
    fact = _factorize(info, f"{family.value} criterion")

    if family.is_d_family:
        value = fact.logdet()
        if family.is_s_restricted:
            value -= logdet(mats.Z.T @ mats.Z)
        return CriterionValue(family=family, value=value, orientation=family.orientation)

    inverse = fact.inverse()
    diag = np.diag(inverse)
    value = float(np.dot(criterion_weights(spec, cfg), diag))
    exact = float(np.sum(diag[: spec.term_count])) if family.is_s_restricted else None
    return CriterionValue(family=family, value=value, orientation=family.orientation, exact=exact)


def effect_variances(
    d: Design,
    spec: ModelSpec,
    submodel: bool = False,
    *,
    bayes: bool = False,
) -> np.ndarray:
    """Diagonal of the beta block of the inverse information matrix, in term order.

    Args:
        d: Design.
        spec: Model specification.
        submodel: Fit only the primary terms (with the nuisance) and return their variances.
        bayes: Use the posterior precision L'L + tau2_inv * K instead of L'L.

    Returns:
        Variances of the fitted terms (primary terms when ``submodel`` is set).

    Raises:
        SingularDesignError: If the fitted model is not estimable.
    """
    mats = build_matrices(d, spec)
    term_positions = list(spec.primary_indices) if submodel else list(range(spec.term_count))
    columns = term_positions + list(range(spec.term_count, spec.term_count + spec.b))
    l1 = mats.L[:, columns]
    info = l1.T @ l1
    if bayes and not submodel:
        info = info + mats.K[np.ix_(columns, columns)]
    inverse = _factorize(info, "fitted model").inverse()
    return np.diag(inverse)[: len(term_positions)].copy()


def relative_efficiency(candidate: CriterionValue, reference: CriterionValue, p: int) -> float:
    """Efficiency of ``candidate`` relative to ``reference``; above 1 means candidate is better.

    A family: reference / candidate. D family (log scale): exp((candidate - reference) / p).
    """
    if candidate.family.is_d_family:
        return float(np.exp((candidate.value - reference.value) / p))
    return reference.value / candidate.value
