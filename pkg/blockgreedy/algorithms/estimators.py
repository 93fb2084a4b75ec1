"""Chernoff-sized Monte Carlo estimators and the parallel step-size search."""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from loguru import logger

from blockgreedy.engine import Batch, BatchEngine, derive_rng
from blockgreedy.errors import PreconditionError, SpecError
from blockgreedy.models.specs import EstimatorConfig
from blockgreedy.oracles import (
    IndependenceOracle,
    SampleBudget,
    Subset,
    SubmodularOracle,
)

# Estimator accuracy used to size each grid point: relative error and the
# additive error as a fraction of eps * n.
GRID_RELATIVE_ERROR = 1.0 / 8.0
GRID_ADDITIVE_FRACTION = 1.0 / 32.0
ACCEPT_FRACTION = 3.0 / 4.0
TOLERANCE = 1e-12


@dataclass(frozen=True)
class SamplingRate:
    """Step size chosen by ``find_delta`` with the estimates that justified it."""

    delta: float
    index: int
    grid_points: int
    samples: int
    span_estimate: float
    margin_estimate: float
    fallback: bool


def chernoff_samples(
    n: int,
    eps: float,
    gamma: float,
    fail_prob: float,
    cfg: EstimatorConfig | None = None,
) -> int:
    """Smallest m with c * exp(-d * eps * gamma * m / n) <= fail_prob."""
    cfg = cfg or EstimatorConfig()
    if eps <= 0 or gamma <= 0:
        raise SpecError("eps and gamma must be positive")
    if not 0.0 < fail_prob < 1.0:
        raise SpecError("fail_prob must lie in (0, 1)")
    log_term = math.log(cfg.chernoff_c / fail_prob)
    return max(1, math.ceil(n * log_term / (cfg.chernoff_d * eps * gamma)))


def sample_budget(
    n: int,
    eps: float,
    gamma: float,
    fail_prob: float,
    cfg: EstimatorConfig | None = None,
) -> SampleBudget:
    """A SampleBudget sized by ``chernoff_samples`` and capped by ``cfg.sample_cap``."""
    cfg = cfg or EstimatorConfig()
    m = chernoff_samples(n, eps, gamma, fail_prob, cfg)
    if cfg.sample_cap is not None:
        m = min(m, cfg.sample_cap)
    return SampleBudget(m=m, eps_rel=eps, gamma_add=gamma, fail_prob=fail_prob)


def failure_target(n: int, cfg: EstimatorConfig) -> float:
    """1 / n^fail_poly_exp, kept inside (0, 1/2]."""
    return min(0.5, float(max(n, 1)) ** -cfg.fail_poly_exp)


def _draw_pairs(
    ground: Sequence[int], delta: float, m: int, rng: np.random.Generator
) -> list[tuple[Subset, int]]:
    items = np.asarray(ground, dtype=np.int64)
    kept = rng.random((m, items.size)) < delta
    picks = rng.integers(0, items.size, size=m)
    return [
        (frozenset(int(e) for e in items[row]), int(items[pick]))
        for row, pick in zip(kept, picks, strict=True)
    ]


class _SpanPlan:
    def __init__(self, matroid: IndependenceOracle, pairs: list[tuple[Subset, int]]):
        self.pairs = pairs
        self.matroid = matroid
        self.slots: list[int] = []

    def queue(self, batch: Batch) -> None:
        self.slots = [batch.spans(self.matroid, s, e) for s, e in self.pairs]

    def estimate(self, answers: Sequence[Any], n: int) -> float:
        hits = sum(1 for slot in self.slots if answers[slot])
        return n * hits / len(self.pairs)


class _MarginPlan:
    def __init__(
        self,
        f: SubmodularOracle,
        pairs: list[tuple[Subset, int]],
        threshold: float,
    ):
        self.f = f
        self.pairs = pairs
        self.threshold = threshold
        self.slots: list[tuple[int, int]] = []

    def queue(self, batch: Batch) -> None:
        self.slots = [
            (batch.value(self.f, s | {e}), batch.value(self.f, s - {e}))
            for s, e in self.pairs
        ]

    def estimate(self, answers: Sequence[Any], n: int) -> float:
        low = 0
        for with_e, without_e in self.slots:
            margin = float(answers[with_e]) - float(answers[without_e])
            if margin < self.threshold - TOLERANCE:
                low += 1
        return n * low / len(self.pairs)


def estimate_span_fraction(
    matroid: IndependenceOracle,
    delta: float,
    m: int,
    seed: int,
    engine: BatchEngine | None = None,
) -> float:
    """Estimate E|span(S)| for S ~ delta N from m span-membership queries."""
    if m < 1:
        raise SpecError("m must be at least 1")
    ground = sorted(matroid.ground)
    if not ground:
        return 0.0
    engine = engine or BatchEngine()
    plan = _SpanPlan(matroid, _draw_pairs(ground, delta, m, derive_rng(seed)))
    batch = Batch()
    plan.queue(batch)
    return plan.estimate(engine.run(batch, phase="span_estimate"), len(ground))


def estimate_low_margin_fraction(
    f: SubmodularOracle,
    lam: float,
    eps: float,
    delta: float,
    m: int,
    seed: int,
    engine: BatchEngine | None = None,
    ground: Sequence[int] | None = None,
) -> float:
    """Estimate E|{e : f_{S - e}(e) < (1 - eps) lam}| for S ~ delta N.

    Each of the m samples costs two queries; a sampled element is measured
    against the rest of the sample, as in pruning.

    ``ground`` defaults to every element of f.
    """
    if m < 1:
        raise SpecError("m must be at least 1")
    if lam < 0:
        raise SpecError("lambda must be non-negative")
    items = sorted(f.ground.elements if ground is None else ground)
    if not items:
        return 0.0
    engine = engine or BatchEngine()
    pairs = _draw_pairs(items, delta, m, derive_rng(seed))
    plan = _MarginPlan(f, pairs, (1.0 - eps) * lam)
    batch = Batch()
    plan.queue(batch)
    return plan.estimate(engine.run(batch, phase="margin_estimate"), len(items))


def grid_indices(top: int, max_points: int | None) -> list[int]:
    """Indices 1..top, thinned geometrically to ``max_points`` when set."""
    if top < 1:
        return [1]
    if max_points is None or top <= max_points:
        return list(range(1, top + 1))
    thinned = np.unique(np.rint(np.geomspace(1, top, max_points)).astype(int))
    return [int(i) for i in thinned]


def grid_samples(n: int, eps: float, cfg: EstimatorConfig) -> int:
    """Samples per grid point for the configured accuracy and failure target."""
    gamma = GRID_ADDITIVE_FRACTION * eps * n
    budget = sample_budget(
        n, GRID_RELATIVE_ERROR, gamma, failure_target(n, cfg), cfg
    )
    return budget.m


def find_delta(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    lam: float,
    eps: float,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
    *,
    check_lambda: bool = False,
    lambda_slack: float = 0.0,
) -> SamplingRate:
    """Pick the largest grid step whose span and low-margin estimates stay small.

    Every grid point is estimated in a single batch. With ``check_lambda`` the
    singleton values are queried in the same batch and any element worth more
    than ``lam + lambda_slack`` raises PreconditionError.
    """
    cfg = cfg or EstimatorConfig()
    engine = engine or BatchEngine()
    ground = sorted(matroid.ground)
    n = len(ground)
    if n == 0:
        return SamplingRate(0.0, 0, 0, 0, 0.0, 0.0, True)

    c = cfg.grid_constant
    k = max(1, matroid.rank_of_matroid)
    top = min(math.ceil(16 * k / (c * eps)), math.floor(4 * n / (c * eps)))
    indices = grid_indices(top, cfg.max_grid_points)
    m = grid_samples(n, eps, cfg)
    step = c * eps / (4 * n)

    batch = Batch()
    singles = (
        [batch.value(f, frozenset({e})) for e in ground] if check_lambda else []
    )
    plans: list[tuple[int, _SpanPlan, _MarginPlan]] = []
    for i in indices:
        delta = i * step
        span_plan = _SpanPlan(
            matroid, _draw_pairs(ground, delta, m, derive_rng(seed, i, 0))
        )
        margin_plan = _MarginPlan(
            f, _draw_pairs(ground, delta, m, derive_rng(seed, i, 1)), (1.0 - eps) * lam
        )
        span_plan.queue(batch)
        margin_plan.queue(batch)
        plans.append((i, span_plan, margin_plan))
    answers = engine.run(batch, phase="delta_search")

    if check_lambda:
        values = [float(answers[slot]) for slot in singles]
        worst = int(np.argmax(values))
        if values[worst] > lam + lambda_slack + TOLERANCE * max(1.0, lam):
            raise PreconditionError(
                f"element {ground[worst]} has value {values[worst]:.6g} "
                f"above lambda {lam:.6g}"
            )
        if values[worst] <= 0:
            raise PreconditionError("no element has positive value")

    limit = ACCEPT_FRACTION * eps * n
    best: SamplingRate | None = None
    for i, span_plan, margin_plan in plans:
        span_est = span_plan.estimate(answers, n)
        margin_est = margin_plan.estimate(answers, n)
        if span_est <= limit and margin_est <= limit:
            best = SamplingRate(
                i * step, i, len(indices), m, span_est, margin_est, False
            )
    if best is None:
        _, span_plan, margin_plan = plans[0]
        best = SamplingRate(
            step,
            1,
            len(indices),
            m,
            span_plan.estimate(answers, n),
            margin_plan.estimate(answers, n),
            True,
        )
        logger.debug("no grid point qualified; falling back to delta_1={}", step)
    logger.debug(
        "delta search n={} k={} points={} m={} -> delta={:.4g} (i={})",
        n,
        k,
        len(indices),
        m,
        best.delta,
        best.index,
    )
    return best
