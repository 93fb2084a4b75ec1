"""Tests for greedy sampling, pruning and residual sets."""

import pytest

from blockgreedy.algorithms import greedy_sample, prune, residual
from blockgreedy.engine import BatchEngine
from blockgreedy.errors import PreconditionError
from blockgreedy.models.generators import FatTailParams
from blockgreedy.oracles import CoverageFunction, ModularFunction, UniformMatroid
from blockgreedy.services import generate_instance

from .conftest import A, B, C


class TestPrune:
    """One-batch pruning of a sample."""

    def test_independent_sample_is_kept(self):
        """No spans and high margins keep everything."""
        matroid = UniformMatroid(3, 2)
        f = ModularFunction([1.0, 1.0, 1.0])
        assert prune(matroid, f, frozenset({0, 1}), 1.0, 0.1) == frozenset({0, 1})

    def test_triangle_prunes_everything(self, triangle):
        """Each edge of a cycle is spanned by the other two."""
        f = ModularFunction([1.0, 1.0, 1.0])
        assert prune(triangle, f, frozenset({0, 1, 2}), 1.0, 0.1) == frozenset()

    def test_duplicate_sets(self):
        """Duplicates add nothing to each other."""
        f = CoverageFunction([1.0], [[0], [0]])
        matroid = UniformMatroid(2, 2)
        assert prune(matroid, f, frozenset({0, 1}), 1.0, 0.1) == frozenset()

    def test_empty_sample(self, engine):
        """Pruning nothing costs no round."""
        matroid = UniformMatroid(2, 2)
        f = ModularFunction([1.0, 1.0])
        assert prune(matroid, f, frozenset(), 1.0, 0.1, engine=engine) == frozenset()
        assert engine.meter.rounds == 0


class TestResidual:
    """Surviving candidates after a sample."""

    def test_low_threshold_keeps_b(self, coverage, uniform_3_2):
        """f_A(B) = 1 clears 0.6, f_A(C) = 0 does not."""
        report = residual(uniform_3_2, coverage, frozenset({A}), 1.0, 0.4)
        assert report.survivors == frozenset({B})

    def test_high_threshold_keeps_nothing(self, coverage, uniform_3_2):
        """f_A(B) = 1 is below 1.2."""
        report = residual(uniform_3_2, coverage, frozenset({A}), 2.0, 0.4)
        assert report.survivors == frozenset()

    def test_empty_sample_keeps_everything(self, coverage, uniform_3_2):
        """With S empty the margins are the singleton values."""
        report = residual(uniform_3_2, coverage, frozenset(), 2.0, 0.5)
        assert report.survivors == frozenset({A, B, C})
        assert report.after == 3

    def test_spanning_sample(self, coverage, uniform_3_2):
        """A basis spans every other element."""
        report = residual(uniform_3_2, coverage, frozenset({A, C}), 0.1, 0.5)
        assert report.survivors == frozenset()
        assert report.spanned == 3

    def test_one_round(self, coverage, uniform_3_2, engine):
        """Span and value queries share a batch."""
        residual(uniform_3_2, coverage, frozenset({A}), 1.0, 0.4, engine=engine)
        assert engine.meter.rounds == 1

    def test_known_sample_value(self, coverage, uniform_3_2, engine):
        """A given f(S) is not queried again."""
        report = residual(
            uniform_3_2,
            coverage,
            frozenset({A}),
            1.0,
            0.4,
            engine=engine,
            sample_value=2.0,
        )
        assert report.sample_value == 2.0
        assert engine.meter.f_calls == 2


class TestGreedySample:
    """The three-round greedy block."""

    def test_free_matroid_keeps_sample(self, fast_cfg):
        """Constant margins and no spans: I = S."""
        matroid = UniformMatroid(6, 6)
        f = ModularFunction([1.0] * 6)
        for seed in range(5):
            block, _ = greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, seed)
            assert block.I == block.S

    def test_fat_tail_blocks(self, fast_cfg):
        """Blocks are independent, inside S, and survivors avoid span(S)."""
        matroid, f = generate_instance(FatTailParams(n=10, k=4))
        for seed in range(5):
            block, report = greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, seed)
            assert block.I <= block.S
            assert matroid.is_independent(block.I)
            assert not report.survivors & matroid.span(block.S)

    def test_at_most_three_rounds(self, fast_cfg):
        """delta search, prune, residual."""
        matroid, f = generate_instance(FatTailParams(n=10, k=4))
        for seed in range(5):
            with BatchEngine() as engine:
                greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, seed, engine)
                assert 1 <= engine.meter.rounds <= 3

    def test_deterministic(self, fast_cfg):
        """Same seed, same block."""
        matroid, f = generate_instance(FatTailParams(n=10, k=4))
        first, _ = greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, 5)
        second, _ = greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, 5)
        assert first == second

    def test_empty_draws_are_repeated(self, fast_cfg):
        """A lone element is sampled once redraws are allowed."""
        matroid, f = UniformMatroid(1, 1), ModularFunction([1.0])
        once = fast_cfg.model_copy(update={"empty_redraws": 0})
        drawn = [
            greedy_sample(matroid, f, 1.0, 0.2, once, seed)[0] for seed in range(20)
        ]
        assert any(not block.S for block in drawn)
        for seed in range(20):
            block, report = greedy_sample(matroid, f, 1.0, 0.2, fast_cfg, seed)
            assert block.S == frozenset({0})
            assert block.I == frozenset({0})
            assert report.survivors == frozenset()

    def test_empty_ground(self, engine):
        """Nothing to sample, nothing to meter."""
        block, report = greedy_sample(
            UniformMatroid(0, 0), ModularFunction([]), 1.0, 0.2, engine=engine
        )
        assert block.I == frozenset() and block.S == frozenset()
        assert report.survivors == frozenset()
        assert engine.meter.rounds == 0

    def test_negative_lambda(self):
        """lambda must be non-negative."""
        with pytest.raises(PreconditionError):
            greedy_sample(UniformMatroid(2, 1), ModularFunction([1.0, 1.0]), -1.0, 0.2)

    def test_lambda_below_values(self, fast_cfg):
        """An element above lambda is a precondition violation."""
        with pytest.raises(PreconditionError):
            greedy_sample(
                UniformMatroid(2, 1), ModularFunction([1.0, 3.0]), 1.0, 0.2, fast_cfg
            )
