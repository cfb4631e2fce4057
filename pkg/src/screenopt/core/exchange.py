"""Closed-form row and coordinate exchange deltas and the coordinate solvers.

For the current inverse D of M = L'L + tau2_inv * K and the outgoing model
row l, let v = l'Dl and

    V = (1 - v) D + D l l' D
    U = (1 - v) DWD + D l l' DWD + DWD l l' D - phi_W D,   phi_W = l'DWDl

Replacing l by l~ multiplies |M| by

    delta_D(l~) = l~' V l~ + (1 - v)

and decreases tr[W M^-1] by

    delta_AW(l~) = (l~' U l~ - phi_W) / delta_D(l~).

For an interaction model the new row is affine in the coordinate x~ being
exchanged, l~ = base + x~ e, so both numerator and denominator are
quadratics in x~. The D family is maximised at an endpoint (the quadratic is
convex); the A family ratio is maximised by Dinkelbach's parametric method.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from screenopt.core.modelspec import model_row, partition_row
from screenopt.core.models import CriterionFamily, ModelSpec
from screenopt.errors import (
    AllSingularError,
    ErrorCode,
    InconsistentSpecError,
    NoConvergenceError,
    SingularExchangeError,
)
from screenopt.observability import get_logger

logger = get_logger(__name__)

SINGULAR_TOL: float = 1e-12
TIE_TOL: float = 1e-10
DINKELBACH_MAX_ITER: int = 100
DINKELBACH_TOL: float = 1e-10
GRID_POINTS: int = 41
_FLAT_TOL: float = 1e-13
_REFINE_XATOL: float = 1e-10


# ---------------------------------------------------------------------------
# Exchange context
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExchangeContext:
    """Cached quantities for exchanges in one run of the design.

    Attributes:
        D: Current inverse of L'L + tau2_inv * K.
        x: Current settings of the run.
        z: Nuisance row of the run.
        spec: Model specification.
        weights: Diagonal of W for the active criterion.
        l_old: Current model row (terms then nuisance).
        v: l_old' D l_old.
        phi_w: l_old' D W D l_old.
        V: Determinant-update matrix.
        U: Weighted-trace-update matrix.
    """

    D: np.ndarray
    x: np.ndarray
    z: np.ndarray
    spec: ModelSpec
    weights: np.ndarray
    l_old: np.ndarray
    v: float
    phi_w: float
    V: np.ndarray
    U: np.ndarray

    @classmethod
    def build(
        cls,
        d_inv: np.ndarray,
        x: np.ndarray,
        z: np.ndarray,
        spec: ModelSpec,
        weights: np.ndarray,
    ) -> ExchangeContext:
        """Precompute V, U, v and phi_W for the run with settings x and nuisance row z."""
        x = np.array(x, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        l_old = np.concatenate((model_row(x, spec), z))
        dl = d_inv @ l_old
        v = float(l_old @ dl)
        dwd = (d_inv * weights) @ d_inv
        dwdl = dwd @ l_old
        phi_w = float(l_old @ dwdl)
        v_matrix = (1.0 - v) * d_inv + np.outer(dl, dl)
        u_matrix = (1.0 - v) * dwd + np.outer(dl, dwdl) + np.outer(dwdl, dl) - phi_w * d_inv
        return cls(
            D=d_inv,
            x=x,
            z=z,
            spec=spec,
            weights=np.asarray(weights, dtype=np.float64),
            l_old=l_old,
            v=v,
            phi_w=phi_w,
            V=0.5 * (v_matrix + v_matrix.T),
            U=0.5 * (u_matrix + u_matrix.T),
        )

    def row_at(self, j: int, value: float) -> np.ndarray:
        """Full model row of the run with coordinate j set to value."""
        x = self.x.copy()
        x[j] = value
        return np.concatenate((model_row(x, self.spec), self.z))


@dataclass(frozen=True)
class QuadRatio:
    """Numerator and denominator quadratics of the coordinate objective in x~.

    numerator(x) = a_n x^2 + b_n x + c_n, denominator(x) = a_d x^2 + b_d x + c_d;
    the A-family delta is their ratio and the denominator is the D-family delta.
    """

    a_n: float
    b_n: float
    c_n: float
    a_d: float
    b_d: float
    c_d: float

    def numerator(self, x: float) -> float:
        return self.a_n * x * x + self.b_n * x + self.c_n

    def denominator(self, x: float) -> float:
        return self.a_d * x * x + self.b_d * x + self.c_d

    def ratio(self, x: float) -> float:
        return self.numerator(x) / self.denominator(x)

    def parametric(self, q: float) -> tuple[float, float, float]:
        """Coefficients (a(q), b(q), c(q)) of G_q(x) = numerator(x) - q * denominator(x)."""
        return (self.a_n - q * self.a_d, self.b_n - q * self.b_d, self.c_n - q * self.c_d)

    def g(self, q: float, x: float) -> float:
        a, b, c = self.parametric(q)
        return a * x * x + b * x + c


@dataclass(frozen=True)
class CoordinateMove:
    """Best coordinate found by a solver.

    Attributes:
        x: Proposed setting.
        delta: Criterion delta at x (determinant ratio for the D family, trace decrease for the A family).
        q: Converged Dinkelbach parameter, when the fractional solver produced x.
    """

    x: float
    delta: float
    q: float | None = None


# ---------------------------------------------------------------------------
# Delta formulas
# ---------------------------------------------------------------------------


def delta_D_row(ctx: ExchangeContext, l_new: np.ndarray) -> float:
    """Determinant ratio |M~| / |M| for replacing the run's model row by l_new."""
    return float(l_new @ ctx.V @ l_new + (1.0 - ctx.v))


def delta_A_row(ctx: ExchangeContext, l_new: np.ndarray) -> float:
    """Decrease of tr[W M^-1] for replacing the run's model row by l_new.

    Raises:
        SingularExchangeError: If the exchange makes the information matrix singular.
    """
    ratio = delta_D_row(ctx, l_new)
    if ratio <= SINGULAR_TOL:
        raise SingularExchangeError(
            message=f"Row exchange has determinant ratio {ratio:.3e}.",
            error_code=ErrorCode.SINGULAR_EXCHANGE,
        )
    return float((l_new @ ctx.U @ l_new - ctx.phi_w) / ratio)


def delta_D_coord(ctx: ExchangeContext, j: int, x_new: float) -> float:
    """Determinant ratio for setting coordinate j of the run to x_new."""
    return delta_D_row(ctx, ctx.row_at(j, x_new))


def delta_AW_coord(ctx: ExchangeContext, j: int, x_new: float) -> float:
    """Weighted-trace decrease for setting coordinate j of the run to x_new.

    Raises:
        SingularExchangeError: If the exchange makes the information matrix singular.
    """
    return delta_A_row(ctx, ctx.row_at(j, x_new))


def coordinate_delta(ctx: ExchangeContext, j: int, x_new: float, family: CriterionFamily) -> float:
    """Active criterion's delta: determinant ratio (D family) or trace decrease (A family)."""
    if family.is_d_family:
        return delta_D_coord(ctx, j, x_new)
    return delta_AW_coord(ctx, j, x_new)


def coordinate_ratio(ctx: ExchangeContext, j: int) -> QuadRatio:
    """Quadratic coefficients of the coordinate objective for factor j.

    Raises:
        InconsistentSpecError: If factor j carries a quadratic term (the row is not affine in x~).
    """
    if ctx.spec.has_quadratic_on(j):
        raise InconsistentSpecError(
            message=f"Factor x{j + 1} has a quadratic term; its coordinate objective is not a quadratic ratio.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    part = partition_row(ctx.x, j, ctx.spec, ctx.z)
    size = ctx.l_old.size
    e = np.zeros(size)
    e[list(part.f1_index_map)] = part.f1_basis
    base = np.zeros(size)
    base[list(part.l2_index_map)] = part.l2

    v_e = ctx.V @ e
    u_e = ctx.U @ e
    return QuadRatio(
        a_n=float(e @ u_e),
        b_n=float(2.0 * base @ u_e),
        c_n=float(base @ ctx.U @ base - ctx.phi_w),
        a_d=float(e @ v_e),
        b_d=float(2.0 * base @ v_e),
        c_d=float(base @ ctx.V @ base + 1.0 - ctx.v),
    )


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------


def _is_singular_candidate(ctx: ExchangeContext, j: int, x: float, family: CriterionFamily) -> tuple[bool, float]:
    if family.is_d_family:
        ratio = delta_D_coord(ctx, j, x)
        return ratio <= SINGULAR_TOL, ratio
    try:
        return False, delta_AW_coord(ctx, j, x)
    except SingularExchangeError:
        return True, float("-inf")


def best_coord_discrete(
    ctx: ExchangeContext,
    j: int,
    candidates: Iterable[float],
    family: CriterionFamily,
) -> CoordinateMove:
    """Enumerate candidate settings for coordinate j and return the best.

    Ties within 1e-10 keep the current coordinate when it is among them, and
    otherwise go to the candidate of smallest magnitude (then the smaller value).

    Raises:
        AllSingularError: If every candidate makes the design singular.
    """
    current = float(ctx.x[j])
    scored: list[tuple[float, float]] = []
    for candidate in candidates:
        singular, delta = _is_singular_candidate(ctx, j, float(candidate), family)
        if not singular:
            scored.append((float(candidate), delta))
    if not scored:
        raise AllSingularError(
            message=f"Every candidate for factor x{j + 1} makes the design singular.",
            error_code=ErrorCode.ALL_SINGULAR,
        )

    best = max(delta for _, delta in scored)
    tied = [(x, delta) for x, delta in scored if best - delta <= TIE_TOL]
    for x, delta in tied:
        if x == current:
            return CoordinateMove(x=x, delta=delta)
    x, delta = min(tied, key=lambda item: (abs(item[0]), item[0]))
    return CoordinateMove(x=x, delta=delta)


def _maximize_parametric(a: float, b: float, c: float) -> float | None:
    """Maximiser of a x^2 + b x + c on [-1, 1], or None when the quadratic is flat."""
    if a > _FLAT_TOL:
        return 1.0 if a + b + c >= a - b + c else -1.0
    if abs(a) <= _FLAT_TOL:
        if abs(b) <= _FLAT_TOL:
            return None
        return 1.0 if b > 0.0 else -1.0
    vertex = -b / (2.0 * a)
    if -1.0 <= vertex <= 1.0:
        return vertex
    return 1.0 if a + b + c >= a - b + c else -1.0


def dinkelbach_maximize(ratio: QuadRatio, current: float, q0: float = 0.0) -> tuple[float, float] | None:
    """Maximise numerator/denominator on [-1, 1] by Dinkelbach's parametric iteration.

    Args:
        ratio: Numerator and denominator coefficients.
        current: Current coordinate.
        q0: Starting parameter, the ratio at the current coordinate.

    Returns:
        (x*, q*) with G_q*(x*) = 0 at convergence. When G_q turns flat after an
        iterate, the ratio equals q everywhere and that iterate is returned.
        None when G_q is already flat at q0.

    Raises:
        NoConvergenceError: After the iteration cap, or when the denominator vanishes at an iterate.
    """
    q = q0
    last: float | None = None
    for _ in range(DINKELBACH_MAX_ITER):
        a, b, c = ratio.parametric(q)
        x = _maximize_parametric(a, b, c)
        if x is None:
            return None if last is None else (last, q)
        denominator = ratio.denominator(x)
        if denominator <= SINGULAR_TOL:
            raise NoConvergenceError(
                message="Fractional iteration reached a singular coordinate.",
                error_code=ErrorCode.NO_CONVERGENCE,
            )
        q_next = ratio.numerator(x) / denominator
        if abs(q_next - q) <= DINKELBACH_TOL:
            return x, q_next
        q, last = q_next, x
    raise NoConvergenceError(
        message=f"Fractional iteration did not converge in {DINKELBACH_MAX_ITER} steps.",
        error_code=ErrorCode.NO_CONVERGENCE,
    )


def _grid_refine(objective: Callable[[float], float], current: float) -> float:
    """Best point of a 41-point grid on [-1, 1], refined by bounded scalar minimisation."""
    grid = np.linspace(-1.0, 1.0, GRID_POINTS)
    values = np.array([objective(float(x)) for x in grid])
    best = int(np.argmax(values))
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, GRID_POINTS - 1)]
    result = minimize_scalar(
        lambda t: -objective(float(t)),
        bounds=(float(lower), float(upper)),
        method="bounded",
        options={"xatol": _REFINE_XATOL},
    )
    candidates = [float(grid[best]), float(np.clip(result.x, -1.0, 1.0)), current]
    return max(candidates, key=objective)


def _safe_objective(ctx: ExchangeContext, j: int, family: CriterionFamily) -> Callable[[float], float]:
    def objective(x: float) -> float:
        singular, delta = _is_singular_candidate(ctx, j, x, family)
        return float("-inf") if singular else delta

    return objective


def best_coord_continuous(ctx: ExchangeContext, j: int, family: CriterionFamily) -> CoordinateMove:
    """Best setting of coordinate j over [-1, 1].

    D family on an affine coordinate: the better endpoint. A family on an
    affine coordinate: Dinkelbach's method, falling back to a grid search
    with bounded refinement if it does not converge. Quadratic coordinates
    always use the grid search on the exactly evaluated delta.
    """
    current = float(ctx.x[j])
    if ctx.spec.has_quadratic_on(j):
        objective = _safe_objective(ctx, j, family)
        x = _grid_refine(objective, current)
        return CoordinateMove(x=x, delta=coordinate_delta(ctx, j, x, family))

    if family.is_d_family:
        return best_coord_discrete(ctx, j, (-1.0, 1.0), family)

    ratio = coordinate_ratio(ctx, j)
    try:
        solved = dinkelbach_maximize(ratio, current)
    except NoConvergenceError as exc:
        logger.warning("Fractional solver fell back to grid search", factor=j + 1, reason=exc.message)
        x = _grid_refine(_safe_objective(ctx, j, family), current)
        return CoordinateMove(x=x, delta=delta_AW_coord(ctx, j, x))

    if solved is None:
        logger.debug("Flat coordinate objective; keeping current setting", factor=j + 1, x=current)
        return CoordinateMove(x=current, delta=0.0)
    x, q = solved
    if q <= TIE_TOL:
        return CoordinateMove(x=current, delta=0.0, q=q)
    return CoordinateMove(x=x, delta=delta_AW_coord(ctx, j, x), q=q)
