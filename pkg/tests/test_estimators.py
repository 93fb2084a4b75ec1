"""Tests for the sampling estimators and the step-size search."""

import math

import pytest

from blockgreedy.algorithms import (
    chernoff_samples,
    estimate_low_margin_fraction,
    estimate_span_fraction,
    find_delta,
    sample_budget,
)
from blockgreedy.algorithms.estimators import failure_target, grid_indices
from blockgreedy.errors import PreconditionError, SpecError
from blockgreedy.models import EstimatorConfig
from blockgreedy.oracles import (
    CoverageFunction,
    GraphicMatroid,
    ModularFunction,
    UniformMatroid,
)


class TestChernoffSamples:
    """Sample counts from the concentration bound."""

    def test_worked_value(self):
        """ceil(100 ln(200) / (1/3 * 0.1 * 10))."""
        assert chernoff_samples(100, 0.1, 10, 0.01) == 1590

    def test_linear_in_n(self):
        """Doubling n doubles m up to rounding."""
        single = chernoff_samples(100, 0.1, 10, 0.01)
        assert abs(chernoff_samples(200, 0.1, 10, 0.01) - 2 * single) <= 1

    def test_failure_near_one(self):
        """A lax failure target needs few samples."""
        assert chernoff_samples(10, 0.5, 10, 0.999) == math.ceil(
            10 * math.log(2 / 0.999) / (1 / 3 * 0.5 * 10)
        )

    def test_invalid_arguments(self):
        """eps and gamma must be positive, fail_prob inside (0, 1)."""
        with pytest.raises(SpecError):
            chernoff_samples(10, 0.0, 1.0, 0.1)
        with pytest.raises(SpecError):
            chernoff_samples(10, 0.1, 1.0, 1.0)

    def test_budget_cap(self):
        """sample_budget honours the configured cap."""
        cfg = EstimatorConfig(sample_cap=50)
        assert sample_budget(100, 0.1, 10, 0.01, cfg).m == 50
        uncapped = EstimatorConfig(sample_cap=None)
        assert sample_budget(100, 0.1, 10, 0.01, uncapped).m == 1590
        assert sample_budget(100, 0.1, 10, 0.01).m == 256

    def test_failure_target(self):
        """1 / n^3 by default, never above 1/2."""
        cfg = EstimatorConfig()
        assert failure_target(10, cfg) == pytest.approx(1e-3)
        assert failure_target(1, cfg) == 0.5


class TestSpanEstimate:
    """E|span(S)| estimates."""

    def test_zero_rate(self):
        """An empty sample spans nothing."""
        assert estimate_span_fraction(UniformMatroid(5, 2), 0.0, 100, seed=0) == 0.0

    def test_free_matroid(self):
        """In a free matroid span(S) = S, so the estimate is about delta n."""
        estimate = estimate_span_fraction(UniformMatroid(100, 100), 0.1, 40_000, seed=4)
        assert abs(estimate - 10.0) <= 0.6

    def test_fat_path_leg(self):
        """A leg of k parallel edges is spanned with probability 1 - (1 - delta)^k."""
        k, legs, delta = 4, 5, 0.1
        edges = [(leg, leg + 1) for leg in range(legs) for _ in range(k)]
        matroid = GraphicMatroid(legs + 1, edges)
        estimate = estimate_span_fraction(matroid, delta, 20_000, seed=2)
        expected = len(edges) * (1 - (1 - delta) ** k)
        assert abs(estimate - expected) <= 0.08 * len(edges)

    def test_one_round(self, engine):
        """All span queries form a single batch."""
        estimate_span_fraction(UniformMatroid(6, 2), 0.3, 50, seed=0, engine=engine)
        assert engine.meter.rounds == 1
        assert engine.meter.matroid_calls == 50

    def test_needs_samples(self):
        """m must be positive."""
        with pytest.raises(SpecError):
            estimate_span_fraction(UniformMatroid(3, 1), 0.1, 0, seed=0)


class TestLowMarginEstimate:
    """E|{e : f_S(e) < (1 - eps) lam}| estimates."""

    def test_modular_margins_never_drop(self):
        """Modular margins are constant."""
        f = ModularFunction([1.0] * 8)
        assert estimate_low_margin_fraction(f, 1.0, 0.1, 0.5, 500, seed=0) == 0.0

    def test_duplicate_sets(self):
        """Each duplicate loses its margin when the other is sampled."""
        f = CoverageFunction([1.0], [[0], [0]])
        estimate = estimate_low_margin_fraction(f, 1.0, 0.1, 0.5, 40_000, seed=3)
        assert abs(estimate - 1.0) <= 0.05

    def test_zero_rate(self):
        """With S empty margins are the singleton values."""
        f = CoverageFunction([1.0, 1.0], [[0], [0, 1]])
        assert estimate_low_margin_fraction(f, 1.0, 0.1, 0.0, 200, seed=1) == 0.0

    def test_two_queries_per_sample(self, engine):
        """Each sample costs f(S + e) and f(S), in one round."""
        f = ModularFunction([1.0] * 4)
        estimate_low_margin_fraction(f, 1.0, 0.1, 0.2, 30, seed=0, engine=engine)
        assert engine.meter.rounds == 1
        assert engine.meter.f_calls == 60

    def test_negative_lambda(self):
        """lambda must be non-negative."""
        with pytest.raises(SpecError):
            estimate_low_margin_fraction(ModularFunction([1.0]), -1.0, 0.1, 0.1, 5, 0)


class TestFindDelta:
    """Parallel grid search for the sampling rate."""

    def test_one_round(self, engine, fast_cfg):
        """The whole grid is estimated in one batch."""
        matroid, f = UniformMatroid(10, 10), ModularFunction([1.0] * 10)
        find_delta(matroid, f, 1.0, 0.2, fast_cfg, seed=0, engine=engine)
        assert engine.meter.rounds == 1

    def test_free_matroid_rate(self, fast_cfg):
        """The span condition binds at about 3 eps / 4."""
        rate = find_delta(
            UniformMatroid(10, 10), ModularFunction([1.0] * 10), 1.0, 0.2, fast_cfg
        )
        assert 0.0 < rate.delta <= 0.3
        assert rate.span_estimate <= 0.75 * 0.2 * 10

    def test_empty_ground(self, fast_cfg):
        """Nothing to sample."""
        rate = find_delta(UniformMatroid(0, 0), ModularFunction([]), 1.0, 0.2, fast_cfg)
        assert rate.delta == 0.0 and rate.fallback

    def test_lambda_check(self, fast_cfg):
        """An element worth more than lambda violates the precondition."""
        with pytest.raises(PreconditionError):
            find_delta(
                UniformMatroid(3, 3),
                ModularFunction([1.0, 5.0, 1.0]),
                1.0,
                0.2,
                fast_cfg,
                check_lambda=True,
            )

    def test_no_positive_element(self, fast_cfg):
        """A zero function has nothing to find."""
        with pytest.raises(PreconditionError):
            find_delta(
                UniformMatroid(3, 3),
                ModularFunction([0.0] * 3),
                1.0,
                0.2,
                fast_cfg,
                check_lambda=True,
            )

    def test_grid_thinning(self):
        """Thinned grids keep both ends and stay sorted."""
        indices = grid_indices(1000, 10)
        assert indices[0] == 1 and indices[-1] == 1000
        assert indices == sorted(set(indices))
        assert grid_indices(5, 10) == [1, 2, 3, 4, 5]
