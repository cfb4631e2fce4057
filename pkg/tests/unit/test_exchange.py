"""Unit tests for the exchange delta formulas and coordinate solvers.

Covers:
  - delta_D_row / delta_A_row against determinants and traces of refactorized matrices
  - coordinate_ratio against the row deltas
  - dinkelbach_maximize on ratios with known maximisers
  - best_coord_discrete tie-breaking and singular candidates
  - best_coord_continuous for the D family, the A family and quadratic coordinates
"""

from __future__ import annotations

import numpy as np
import pytest

from screenopt.core.criteria import criterion_weights
from screenopt.core.exchange import (
    ExchangeContext,
    QuadRatio,
    best_coord_continuous,
    best_coord_discrete,
    coordinate_delta,
    coordinate_ratio,
    delta_A_row,
    delta_AW_coord,
    delta_D_coord,
    delta_D_row,
    dinkelbach_maximize,
)
from screenopt.core.modelspec import build_matrices, expand_row
from screenopt.core.models import CriterionConfig, CriterionFamily, Design, ModelSpec
from screenopt.errors import AllSingularError, InconsistentSpecError
from tests.conftest import make_design

_RNG_SEED = 3


def _context(design: Design, spec: ModelSpec, i: int, cfg: CriterionConfig) -> ExchangeContext:
    mats = build_matrices(design, spec)
    info = mats.L.T @ mats.L
    if cfg.family.is_bayes:
        info = info + mats.K
    return ExchangeContext.build(np.linalg.inv(info), design.settings[i], mats.Z[i], spec, criterion_weights(spec, cfg))


def _random_design(n: int, k: int, seed: int = _RNG_SEED) -> Design:
    return Design(settings=np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, k)))


class TestRowDeltas:
    """Closed-form deltas against brute-force refactorization."""

    @pytest.mark.parametrize("tau2_inv", [0.0, 2.0])
    def test_delta_d_is_determinant_ratio(self, tau2_inv: float) -> None:
        """delta_D equals |M~| / |M|, with or without the prior."""
        spec = ModelSpec.build(3, order=2, potential="interactions", tau2_inv=tau2_inv)
        cfg = CriterionConfig(family=CriterionFamily.BAYES_D)
        design = _random_design(10, 3)
        ctx = _context(design, spec, 4, cfg)
        new_settings = np.array([0.3, -1.0, 0.8])
        l_new = np.concatenate((expand_row(new_settings, spec), [1.0]))

        mats = build_matrices(design, spec)
        after = build_matrices(design.with_row(4, new_settings), spec)
        ratio = np.linalg.det(after.L.T @ after.L + after.K) / np.linalg.det(mats.L.T @ mats.L + mats.K)
        assert delta_D_row(ctx, l_new) == pytest.approx(ratio, rel=1e-9)

    def test_delta_a_is_weighted_trace_decrease(self) -> None:
        """delta_AW equals tr[W M^-1] before minus after."""
        spec = ModelSpec.build(3, order=2)
        cfg = CriterionConfig(family=CriterionFamily.AW, w=0.5)
        design = _random_design(10, 3)
        ctx = _context(design, spec, 7, cfg)
        new_settings = np.array([-0.6, 0.1, 1.0])
        l_new = np.concatenate((expand_row(new_settings, spec), [1.0]))
        weights = criterion_weights(spec, cfg)

        def weighted_trace(d: Design) -> float:
            mats = build_matrices(d, spec)
            return float(weights @ np.diag(np.linalg.inv(mats.L.T @ mats.L)))

        expected = weighted_trace(design) - weighted_trace(design.with_row(7, new_settings))
        assert delta_A_row(ctx, l_new) == pytest.approx(expected, rel=1e-8)

    def test_unchanged_row(self) -> None:
        """Exchanging a row for itself leaves both criteria unchanged."""
        spec = ModelSpec.build(3, order=2)
        design = _random_design(9, 3)
        ctx = _context(design, spec, 0, CriterionConfig(family=CriterionFamily.A))
        assert delta_D_row(ctx, ctx.l_old) == pytest.approx(1.0)
        assert delta_A_row(ctx, ctx.l_old) == pytest.approx(0.0, abs=1e-12)


class TestCoordinateRatio:
    """Quadratic numerator and denominator in the exchanged coordinate."""

    @pytest.mark.parametrize("x", [-1.0, -0.37, 0.0, 0.5, 1.0])
    def test_ratio_matches_deltas(self, x: float) -> None:
        """N(x) / D(x) is the A delta and D(x) the determinant ratio."""
        spec = ModelSpec.build(4, order=2)
        design = _random_design(14, 4)
        ctx = _context(design, spec, 5, CriterionConfig(family=CriterionFamily.AS))
        ratio = coordinate_ratio(ctx, 2)
        assert ratio.denominator(x) == pytest.approx(delta_D_coord(ctx, 2, x), rel=1e-9)
        assert ratio.ratio(x) == pytest.approx(delta_AW_coord(ctx, 2, x), rel=1e-7, abs=1e-12)

    def test_quadratic_factor_rejected(self) -> None:
        """A factor with a quadratic term has no quadratic-ratio form."""
        spec = ModelSpec.build(2, quadratics=True)
        ctx = _context(_random_design(8, 2), spec, 0, CriterionConfig(family=CriterionFamily.A))
        with pytest.raises(InconsistentSpecError):
            coordinate_ratio(ctx, 1)

    def test_determinant_ratio_flat_on_a_optimal_design(
        self,
        a_optimal_seven_run: Design,
        main_effects_five: ModelSpec,
    ) -> None:
        """The fourth coordinate of the first run does not move the determinant."""
        ctx = _context(a_optimal_seven_run, main_effects_five, 0, CriterionConfig(family=CriterionFamily.AS))
        values = [delta_D_coord(ctx, 3, float(x)) for x in np.linspace(-1.0, 1.0, 9)]
        assert max(values) - min(values) < 1e-9


class TestDinkelbach:
    """Parametric maximisation of a ratio of quadratics on [-1, 1]."""

    def test_interior_maximum(self) -> None:
        """(-x^2 + x/2) / 1 peaks at x = 1/4 with value 1/16."""
        x, q = dinkelbach_maximize(QuadRatio(a_n=-1.0, b_n=0.5, c_n=0.0, a_d=0.0, b_d=0.0, c_d=1.0), 0.0)
        assert x == pytest.approx(0.25)
        assert q == pytest.approx(0.0625)

    def test_endpoint_maximum(self) -> None:
        """2x / (x^2 + 1) peaks at x = 1 with value 1."""
        solved = dinkelbach_maximize(QuadRatio(a_n=0.0, b_n=2.0, c_n=0.0, a_d=1.0, b_d=0.0, c_d=1.0), -0.5)
        assert solved == (1.0, 1.0)

    def test_flat_objective(self) -> None:
        """A zero numerator has no maximiser to report."""
        assert dinkelbach_maximize(QuadRatio(a_n=0.0, b_n=0.0, c_n=0.0, a_d=0.0, b_d=0.0, c_d=1.0), 0.3) is None

    def test_flat_after_first_step_keeps_the_iterate(self) -> None:
        """(2x^2 + 2) / (x^2 + 1) is 2 everywhere: the first iterate is kept once G_q goes flat."""
        solved = dinkelbach_maximize(QuadRatio(a_n=2.0, b_n=0.0, c_n=2.0, a_d=1.0, b_d=0.0, c_d=1.0), 0.0)
        assert solved == (1.0, 2.0)

    def test_agrees_with_dense_grid(self) -> None:
        """The fractional optimum is at least as good as every grid point."""
        ratio = QuadRatio(a_n=-0.4, b_n=0.3, c_n=-0.05, a_d=0.2, b_d=-0.1, c_d=1.0)
        x, q = dinkelbach_maximize(ratio, 0.0)
        grid = np.linspace(-1.0, 1.0, 2001)
        assert q >= max(ratio.ratio(float(t)) for t in grid) - 1e-9
        assert ratio.g(q, x) == pytest.approx(0.0, abs=1e-9)


class TestDiscreteSolver:
    """Enumeration over a finite candidate set."""

    def test_singular_candidate_set(self) -> None:
        """Moving x to -1 in the two-run design {+1, -1} duplicates a run."""
        spec = ModelSpec.build(1)
        design = make_design([[1.0], [-1.0]])
        for family in (CriterionFamily.D, CriterionFamily.A):
            ctx = _context(design, spec, 0, CriterionConfig(family=family))
            with pytest.raises(AllSingularError):
                best_coord_discrete(ctx, 0, (-1.0,), family)

    def test_saturated_context(self) -> None:
        """A saturated design has v = 1 at every run."""
        ctx = _context(make_design([[1.0], [-1.0]]), ModelSpec.build(1), 0, CriterionConfig(family=CriterionFamily.D))
        assert ctx.v == pytest.approx(1.0)

    def test_tie_keeps_current_coordinate(self, a_optimal_seven_run: Design, main_effects_five: ModelSpec) -> None:
        """A flat determinant ratio leaves the zero coordinate where it is."""
        ctx = _context(a_optimal_seven_run, main_effects_five, 0, CriterionConfig(family=CriterionFamily.D))
        move = best_coord_discrete(ctx, 3, (-1.0, 0.0, 1.0), CriterionFamily.D)
        assert move.x == 0.0

    def test_tie_without_current_prefers_negative_endpoint(
        self,
        a_optimal_seven_run: Design,
        main_effects_five: ModelSpec,
    ) -> None:
        """Equal endpoints resolve to the smaller value."""
        ctx = _context(a_optimal_seven_run, main_effects_five, 0, CriterionConfig(family=CriterionFamily.D))
        move = best_coord_discrete(ctx, 3, (1.0, -1.0), CriterionFamily.D)
        assert move.x == -1.0

    def test_best_candidate_has_largest_delta(self) -> None:
        """The returned move maximises the delta over the candidates."""
        spec = ModelSpec.build(3, order=2)
        design = _random_design(10, 3)
        ctx = _context(design, spec, 2, CriterionConfig(family=CriterionFamily.A))
        candidates = (-1.0, 0.0, 1.0)
        move = best_coord_discrete(ctx, 1, candidates, CriterionFamily.A)
        assert move.delta == pytest.approx(max(delta_AW_coord(ctx, 1, x) for x in candidates))


class TestContinuousSolver:
    """Best coordinate over [-1, 1]."""

    def test_d_family_returns_endpoint(self) -> None:
        """The determinant ratio is convex in an affine coordinate."""
        spec = ModelSpec.build(3, order=2)
        ctx = _context(_random_design(10, 3), spec, 1, CriterionConfig(family=CriterionFamily.D))
        move = best_coord_continuous(ctx, 0, CriterionFamily.D)
        assert move.x in (-1.0, 1.0)

    def test_a_family_matches_grid(self) -> None:
        """The fractional solver beats every point of a fine grid."""
        spec = ModelSpec.build(3, order=2)
        ctx = _context(_random_design(10, 3, seed=11), spec, 6, CriterionConfig(family=CriterionFamily.AS))
        move = best_coord_continuous(ctx, 2, CriterionFamily.AS)
        grid_best = max(delta_AW_coord(ctx, 2, float(x)) for x in np.linspace(-1.0, 1.0, 401))
        assert move.delta >= grid_best - 1e-9

    def test_a_optimal_coordinate_stays_at_zero(
        self,
        a_optimal_seven_run: Design,
        main_effects_five: ModelSpec,
    ) -> None:
        """The As optimum of the first run's fourth coordinate is its current value 0."""
        ctx = _context(a_optimal_seven_run, main_effects_five, 0, CriterionConfig(family=CriterionFamily.AS))
        move = best_coord_continuous(ctx, 3, CriterionFamily.AS)
        assert move.x == 0.0
        assert coordinate_ratio(ctx, 3).a_n < 0.0

    def test_quadratic_coordinate_uses_exact_delta(self) -> None:
        """With a quadratic term the solver still beats a coarse grid."""
        spec = ModelSpec.build(2, quadratics=True)
        ctx = _context(_random_design(9, 2), spec, 3, CriterionConfig(family=CriterionFamily.A))
        move = best_coord_continuous(ctx, 0, CriterionFamily.A)
        grid_best = max(coordinate_delta(ctx, 0, float(x), CriterionFamily.A) for x in np.linspace(-1.0, 1.0, 21))
        assert -1.0 <= move.x <= 1.0
        assert move.delta >= grid_best - 1e-9
