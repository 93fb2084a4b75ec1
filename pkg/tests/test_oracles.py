"""Tests for set-function oracles and the multilinear extension."""

from itertools import combinations

import numpy as np
import pytest

from blockgreedy.algorithms import chernoff_samples
from blockgreedy.engine import Batch, BatchEngine
from blockgreedy.errors import SpecError
from blockgreedy.models.specs import CoverageSpec, CutSpec, ModularSpec
from blockgreedy.oracles import (
    ConcaveOfModularFunction,
    FractionalPoint,
    ModularFunction,
    SampleBudget,
    aux_beta,
    aux_monotone,
    aux_nonnegative,
    build_function,
    contract_function,
    marginal,
    multilinear_estimate,
    multilinear_exact,
)

from .conftest import A, B, C


def subsets(n):
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            yield frozenset(combo)


class TestFunctions:
    """Built-in function families."""

    def test_coverage_eval(self, coverage):
        """A and B together cover all three items."""
        assert coverage.eval(frozenset({A, B})) == 3.0
        assert coverage.eval(frozenset()) == 0.0

    def test_modular_eval(self):
        """Modular values are sums of weights."""
        f = build_function(ModularSpec(weights=[1.0, 2.0, 3.0]))
        assert f.eval(frozenset({0, 2})) == 4.0

    def test_cut_of_full_vertex_set_is_empty(self, edge_cut):
        """A single edge is cut by one endpoint, not by both."""
        assert edge_cut.eval(frozenset({0})) == 1.0
        assert edge_cut.eval(frozenset({0, 1})) == 0.0

    def test_flags(self, coverage, edge_cut):
        """Cut is the only non-monotone family."""
        assert coverage.is_monotone and coverage.is_nonnegative
        assert not edge_cut.is_monotone and edge_cut.is_nonnegative

    def test_batch_eval_matches_eval(self, coverage):
        """batch_eval agrees element-wise with eval."""
        queries = list(subsets(3))
        assert coverage.batch_eval(queries) == [coverage.eval(s) for s in queries]

    def test_calls_are_counted(self, coverage):
        """Every eval increments the call counter."""
        before = coverage.calls
        coverage.eval(frozenset({A}))
        coverage.eval(frozenset())
        assert coverage.calls == before + 2

    def test_negative_weights_rejected(self):
        """Negative weights are a spec error."""
        with pytest.raises(SpecError):
            build_function(ModularSpec(weights=[1.0, -1.0]))

    def test_coverage_unknown_item_rejected(self):
        """Covers must reference existing universe items."""
        with pytest.raises(SpecError):
            build_function(CoverageSpec(weights=[1.0], covers=[[0, 1]]))

    def test_cut_endpoint_out_of_range(self):
        """Edges must stay inside the vertex set."""
        with pytest.raises(SpecError):
            build_function(CutSpec(vertices=2, edges=[(0, 2, 1.0)]))

    @pytest.mark.parametrize(
        "f",
        [
            ModularFunction([0.5, 1.0, 2.0, 0.0, 3.0]),
            ConcaveOfModularFunction([0.5, 1.0, 2.0, 0.7, 3.0], 0.5),
        ],
    )
    def test_submodular_exhaustive(self, f):
        """f_S(e) >= f_T(e) for every S within T and e outside T."""
        for t in subsets(f.n):
            for size in range(len(t) + 1):
                for s in map(frozenset, combinations(sorted(t), size)):
                    for e in set(range(f.n)) - t:
                        small = f.eval(s | {e}) - f.eval(s)
                        large = f.eval(t | {e}) - f.eval(t)
                        assert small >= large - 1e-12

    def test_cut_submodular_exhaustive(self, four_cycle_cut):
        """The cut function of a 4-cycle is submodular."""
        f = four_cycle_cut
        for s in subsets(4):
            for t in subsets(4):
                union, meet = f.eval(s | t), f.eval(s & t)
                assert f.eval(s) + f.eval(t) >= union + meet - 1e-12


class TestMarginals:
    """Marginal values and contracted functions."""

    def test_marginal_of_covered_element(self, coverage):
        """C adds nothing once A is chosen."""
        assert marginal(coverage, frozenset({A}), frozenset({C})) == 0.0

    def test_marginal_of_empty_set(self, coverage):
        """Adding nothing is worth nothing."""
        assert marginal(coverage, frozenset({A, C}), frozenset()) == 0.0

    def test_marginal_can_be_negative(self, edge_cut):
        """Closing a cut edge loses its weight."""
        assert marginal(edge_cut, frozenset({0}), frozenset({1})) == -1.0

    def test_marginal_uses_two_evaluations(self, coverage):
        """A marginal costs exactly two queries."""
        before = coverage.calls
        marginal(coverage, frozenset({A}), frozenset({B}))
        assert coverage.calls == before + 2

    def test_contract_by_empty_set_is_identity(self, coverage):
        """f contracted by nothing is f."""
        assert contract_function(coverage, frozenset()) is coverage

    def test_contracted_values(self, coverage):
        """f_Q(U) = f(Q | U) - f(Q)."""
        assert contract_function(coverage, frozenset({A})).eval(frozenset({B})) == 1.0
        assert contract_function(coverage, frozenset({A, B})).eval(
            frozenset({C})
        ) == 0.0

    def test_nested_contraction_flattens(self, coverage):
        """Contracting twice equals contracting by the union."""
        once = contract_function(coverage, frozenset({A}))
        twice = contract_function(once, frozenset({B}), once.eval(frozenset({B})))
        assert twice.eval(frozenset({C})) == 0.0
        assert twice.eval(frozenset()) == 0.0

    def test_contracted_cut_is_not_nonnegative(self, edge_cut):
        """Contraction keeps non-negativity only for monotone functions."""
        contracted = contract_function(edge_cut, frozenset({0}))
        assert not contracted.is_nonnegative
        assert contracted.eval(frozenset({1})) == -1.0


class TestMultilinear:
    """Exact and sampled multilinear extension."""

    def test_zero_point(self, coverage):
        """F(0) = 0."""
        assert multilinear_exact(coverage, FractionalPoint.zeros(3)) == 0.0

    def test_indicator_point(self, coverage):
        """F at an indicator is f of the set."""
        x = FractionalPoint.indicator(3, {A, B})
        assert multilinear_exact(coverage, x) == pytest.approx(3.0)

    def test_half_half_point(self, coverage):
        """Per-item coverage probabilities 0.5 + 0.75 + 0.5."""
        x = FractionalPoint(np.array([0.5, 0.5, 0.0]))
        assert multilinear_exact(coverage, x) == pytest.approx(1.75)

    def test_entries_are_truncated(self):
        """Entries above 1 are clipped."""
        assert FractionalPoint(np.array([2.0, 0.5])).x.tolist() == [1.0, 0.5]

    def test_negative_entries_rejected(self):
        """Negative coordinates are invalid."""
        with pytest.raises(SpecError):
            FractionalPoint(np.array([-0.1]))

    def test_exact_limit(self):
        """Exact enumeration refuses large ground sets."""
        f = ModularFunction([1.0] * 21)
        with pytest.raises(SpecError):
            multilinear_exact(f, FractionalPoint.zeros(21))

    def test_estimate_integral_point(self, coverage):
        """An integral point has a degenerate distribution."""
        x = FractionalPoint.indicator(3, {B, C})
        assert multilinear_estimate(coverage, x, SampleBudget(m=5), seed=1) == 3.0

    def test_estimate_close_to_exact(self, coverage):
        """The sampled value approaches the exact one."""
        x = FractionalPoint(np.array([0.5, 0.5, 0.0]))
        estimate = multilinear_estimate(coverage, x, SampleBudget(m=20_000), seed=7)
        assert abs(estimate - 1.75) <= 0.03

    def test_estimate_modular(self):
        """Linearity of expectation for modular functions."""
        f = ModularFunction([1.0, 2.0])
        x = FractionalPoint(np.array([0.5, 0.5]))
        estimate = multilinear_estimate(f, x, SampleBudget(m=20_000), seed=3)
        assert abs(estimate - 1.5) <= 0.05

    def test_estimate_is_one_round(self, coverage, engine):
        """All samples go out in a single batch."""
        x = FractionalPoint(np.array([0.5, 0.5, 0.5]))
        multilinear_estimate(coverage, x, SampleBudget(m=50), seed=0, engine=engine)
        assert engine.meter.rounds == 1
        assert engine.meter.f_calls == 50

    def test_estimate_is_deterministic(self, coverage):
        """Same seed, same estimate."""
        x = FractionalPoint(np.array([0.3, 0.6, 0.2]))
        first = multilinear_estimate(coverage, x, SampleBudget(m=100), seed=11)
        assert multilinear_estimate(coverage, x, SampleBudget(m=100), seed=11) == first

    def test_estimate_concentrates(self, coverage):
        """With m from the Chernoff count, 99 of 100 seeds land near F(x)."""
        x = FractionalPoint(np.array([0.3, 0.6, 0.2]))
        exact = multilinear_exact(coverage, x)
        m = chernoff_samples(3, 0.25, 0.25, 0.01)
        budget = SampleBudget(m=m, eps_rel=0.25, gamma_add=0.25, fail_prob=0.01)
        hits = sum(
            abs(multilinear_estimate(coverage, x, budget, seed) - exact)
            <= 0.25 * exact + 0.25
            for seed in range(100)
        )
        assert hits >= 99

    def test_bad_budget(self):
        """A budget needs at least one sample."""
        with pytest.raises(SpecError):
            SampleBudget(m=0)


class TestAuxiliaryFunctions:
    """The g oracles used by amplification."""

    def test_aux_monotone_normalized(self, coverage):
        """g(empty) = 0 in both modes."""
        x = FractionalPoint(np.array([0.2, 0.4, 0.1]))
        assert aux_monotone(coverage, x, 3, None, 0).eval(frozenset()) == 0.0
        sampled = aux_monotone(coverage, x, 3, SampleBudget(m=10), 0)
        assert sampled.eval(frozenset()) == 0.0

    def test_aux_monotone_ell_one_is_f(self, coverage):
        """At x = 0 and ell = 1, g is f."""
        g = aux_monotone(coverage, FractionalPoint.zeros(3), 1, None, 0)
        for s in subsets(3):
            assert g.eval(s) == pytest.approx(coverage.eval(s))

    def test_aux_monotone_modular_step(self):
        """A linear F moves by w / ell."""
        f = ModularFunction([2.0])
        g = aux_monotone(f, FractionalPoint.zeros(1), 4, None, 0)
        assert g.eval(frozenset({0})) == pytest.approx(0.5)
        sampled = aux_monotone(f, FractionalPoint.zeros(1), 4, SampleBudget(m=4000), 5)
        assert abs(sampled.eval(frozenset({0})) - 0.5) <= 0.1

    def test_aux_monotone_rejects_cut(self, edge_cut):
        """Monotone amplification needs a monotone f."""
        with pytest.raises(SpecError):
            aux_monotone(edge_cut, FractionalPoint.zeros(2), 2, None, 0)

    def test_aux_monotone_repeatable(self, coverage):
        """A sampled g answers the same query the same way."""
        x = FractionalPoint(np.array([0.2, 0.4, 0.1]))
        g = aux_monotone(coverage, x, 3, SampleBudget(m=64), 9)
        assert g.eval(frozenset({A, C})) == g.eval(frozenset({A, C}))
        assert g.is_estimate

    def test_aux_nonnegative_without_blocks(self, coverage):
        """No blocks and ell = 1 reduce g to f."""
        g = aux_nonnegative(coverage, [], 0.5, 1, None, 0)
        for s in subsets(3):
            assert g.eval(s) == pytest.approx(coverage.eval(s))

    def test_aux_nonnegative_modular(self):
        """Inclusion probability 1/2 times weight 4."""
        f = ModularFunction([4.0])
        g = aux_nonnegative(f, [], 0.5, 2, None, 0)
        assert g.eval(frozenset({0})) == pytest.approx(2.0)
        sampled = aux_nonnegative(f, [], 0.5, 2, SampleBudget(m=4000), 1)
        assert abs(sampled.eval(frozenset({0})) - 2.0) <= 0.2

    def test_aux_nonnegative_blocks_discount(self, coverage):
        """Earlier blocks lower the gain of overlapping elements."""
        fresh = aux_nonnegative(coverage, [], 0.5, 2, None, 0)
        after = aux_nonnegative(coverage, [frozenset({A})], 0.5, 2, None, 0)
        assert after.eval(frozenset({C})) < fresh.eval(frozenset({C}))

    def test_aux_nonnegative_bad_alpha(self, coverage):
        """alpha must lie in (0, 1]."""
        with pytest.raises(SpecError):
            aux_nonnegative(coverage, [], 1.5, 2, None, 0)

    def test_exact_memo_under_threads(self, four_cycle_cut):
        """Concurrent queries on an exact g agree with serial evaluation."""
        blocks = [frozenset({0, 2})]
        g = aux_nonnegative(four_cycle_cut, blocks, 0.5, 2, None, 0)
        reference = aux_nonnegative(four_cycle_cut, blocks, 0.5, 2, None, 0)
        queries = [s for _ in range(8) for s in subsets(4)]
        batch = Batch()
        slots = [batch.value(g, s) for s in queries]
        with BatchEngine(workers=4) as engine:
            answers = engine.run(batch)
        for s, slot in zip(queries, slots, strict=True):
            assert answers[slot] == pytest.approx(reference.eval(s))
        assert g.calls == len(queries)

    def test_aux_beta_singleton(self, coverage):
        """A singleton is kept with probability beta."""
        g = aux_beta(coverage, 0.3, None, 0)
        assert g.eval(frozenset({A})) == pytest.approx(0.6)

    def test_aux_beta_cut_edge(self, edge_cut):
        """Exactly one endpoint survives with probability 1/2."""
        g = aux_beta(edge_cut, 0.5, None, 0)
        assert g.eval(frozenset({0, 1})) == pytest.approx(0.5)
        sampled = aux_beta(edge_cut, 0.5, SampleBudget(m=4000), 2)
        assert abs(sampled.eval(frozenset({0, 1})) - 0.5) <= 0.05

    def test_aux_beta_bounds(self, coverage):
        """beta must lie strictly between 0 and 1."""
        with pytest.raises(SpecError):
            aux_beta(coverage, 1.0, None, 0)
