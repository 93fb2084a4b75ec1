"""Greedy sampling: one random greedy block (I, S) in at most three rounds."""

from dataclasses import dataclass

from loguru import logger

from blockgreedy.engine import (
    Batch,
    BatchEngine,
    bernoulli_subset,
    derive_rng,
    derive_seed,
)
from blockgreedy.errors import PreconditionError
from blockgreedy.models.specs import EstimatorConfig
from blockgreedy.oracles import IndependenceOracle, Subset, SubmodularOracle, as_subset

from .estimators import TOLERANCE, SamplingRate, find_delta


@dataclass(frozen=True)
class GreedyBlock:
    """Random pair (I, S) with I a subset of S and I independent."""

    I: Subset  # noqa: E741
    S: Subset
    lam: float
    eps: float
    delta: float = 0.0


@dataclass(frozen=True)
class ResidualReport:
    """Elements still worth about (1 - eps) lam after S, outside span(S)."""

    survivors: Subset
    before: int
    spanned: int
    sample_value: float = 0.0

    @property
    def after(self) -> int:
        return len(self.survivors)


def margin_band(
    f: SubmodularOracle, lam: float, eps: float, cfg: EstimatorConfig
) -> float:
    """Comparison slack for estimated oracles; zero for exact ones."""
    if not f.is_estimate:
        return 0.0
    return 2.0 * cfg.margin_band * eps * lam


def _slack(lam: float) -> float:
    return TOLERANCE * max(1.0, abs(lam))


def _prune(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    sample: Subset,
    lam: float,
    eps: float,
    cfg: EstimatorConfig,
    engine: BatchEngine,
) -> tuple[Subset, float]:
    if not sample:
        return frozenset(), 0.0
    members = sorted(sample)
    batch = Batch()
    whole = batch.value(f, sample)
    slots = [
        (batch.value(f, sample - {e}), batch.spans(matroid, sample - {e}, e))
        for e in members
    ]
    answers = engine.run(batch, phase="prune")
    value = float(answers[whole])
    threshold = (1.0 - eps) * lam - margin_band(f, lam, eps, cfg) - _slack(lam)
    kept = frozenset(
        e
        for e, (without_e, spanned) in zip(members, slots, strict=True)
        if not answers[spanned] and value - float(answers[without_e]) >= threshold
    )
    return kept, value


def prune(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    sample: Subset,
    lam: float,
    eps: float,
    cfg: EstimatorConfig | None = None,
    engine: BatchEngine | None = None,
) -> Subset:
    """Keep the e in S with f_{S-e}(e) >= (1 - eps) lam and e outside span(S - e)."""
    kept, _ = _prune(
        matroid,
        f,
        as_subset(sample),
        lam,
        eps,
        cfg or EstimatorConfig(),
        engine or BatchEngine(),
    )
    return kept


def residual(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    sample: Subset,
    lam: float,
    eps: float,
    cfg: EstimatorConfig | None = None,
    engine: BatchEngine | None = None,
    *,
    sample_value: float | None = None,
) -> ResidualReport:
    """Survivors {e outside span(S) : f_S(e) >= (1 - eps) lam} in one batch."""
    cfg = cfg or EstimatorConfig()
    engine = engine or BatchEngine()
    sample = as_subset(sample)
    candidates = sorted(matroid.ground - sample)
    batch = Batch()
    whole = batch.value(f, sample) if sample_value is None else None
    slots = [
        (batch.value(f, sample | {e}), batch.spans(matroid, sample, e))
        for e in candidates
    ]
    answers = engine.run(batch, phase="residual")
    if whole is not None:
        value = float(answers[whole])
    else:
        value = float(sample_value or 0.0)
    threshold = (1.0 - eps) * lam + margin_band(f, lam, eps, cfg) - _slack(lam)
    spanned = sum(1 for _, slot in slots if answers[slot])
    survivors = frozenset(
        e
        for e, (with_e, span_slot) in zip(candidates, slots, strict=True)
        if not answers[span_slot] and float(answers[with_e]) - value >= threshold
    )
    return ResidualReport(
        survivors=survivors,
        before=len(matroid.ground),
        spanned=spanned + len(sample & matroid.ground),
        sample_value=value,
    )


def greedy_sample(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    lam: float,
    eps: float,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
) -> tuple[GreedyBlock, ResidualReport]:
    """Sample S ~ delta N, prune it to an independent I and report the residual.

    Rounds: step-size search (with the lambda check), prune, residual. An
    empty draw is repeated at the same delta without extra rounds.
    """
    cfg = cfg or EstimatorConfig()
    engine = engine or BatchEngine()
    if lam < 0:
        raise PreconditionError(f"lambda must be non-negative, got {lam}")
    if not matroid.ground:
        empty = frozenset[int]()
        return GreedyBlock(empty, empty, lam, eps), ResidualReport(empty, 0, 0)

    rate: SamplingRate = find_delta(
        matroid,
        f,
        lam,
        eps,
        cfg,
        derive_seed(seed, 0),
        engine,
        check_lambda=True,
        lambda_slack=2.0 * margin_band(f, lam, eps, cfg),
    )
    rng = derive_rng(seed, 1)
    members = sorted(matroid.ground)
    sample = bernoulli_subset(rng, members, rate.delta)
    # S is drawn conditioned on being non-empty, up to cfg.empty_redraws retries
    redraws = 0
    while not sample and rate.delta > 0 and redraws < cfg.empty_redraws:
        sample = bernoulli_subset(rng, members, rate.delta)
        redraws += 1
    kept, value = _prune(matroid, f, sample, lam, eps, cfg, engine)
    report = residual(matroid, f, sample, lam, eps, cfg, engine, sample_value=value)
    logger.debug(
        "greedy sample lam={:.4g} n={} delta={:.4g} |S|={} |I|={} survivors={}",
        lam,
        len(matroid.ground),
        rate.delta,
        len(sample),
        len(kept),
        report.after,
    )
    return GreedyBlock(kept, sample, lam, eps, rate.delta), report
