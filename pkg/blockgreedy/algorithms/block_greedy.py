"""Threshold-descending block greedy over contracted residual systems."""

import math
from dataclasses import dataclass, field

from loguru import logger

from blockgreedy.engine import Batch, BatchEngine, derive_seed
from blockgreedy.errors import SpecError
from blockgreedy.models.specs import EstimatorConfig
from blockgreedy.oracles import (
    IndependenceOracle,
    Subset,
    SubmodularOracle,
    contract_function,
)

from .greedy_sample import GreedyBlock, ResidualReport, greedy_sample, residual


def threshold_schedule(lambda_max: float, lambda_min: float, eps: float) -> list[float]:
    """Geometric thresholds lambda_max * (1 - eps)^j, j = 0, 1, ...

    The schedule stops at the first value <= lambda_min and is empty when
    lambda_max < lambda_min.
    """
    if lambda_min <= 0:
        raise SpecError("lambda_min must be positive")
    if not 0.0 < eps < 1.0:
        raise SpecError("eps must lie in (0, 1)")
    if lambda_max < 0:
        raise SpecError("lambda_max must be non-negative")
    schedule: list[float] = []
    if lambda_max < lambda_min:
        return schedule
    j = 0
    while True:
        lam = lambda_max * (1.0 - eps) ** j
        schedule.append(lam)
        if lam <= lambda_min:
            return schedule
        j += 1


@dataclass(frozen=True)
class ThresholdCheck:
    """The fresh residual computed when a threshold is entered."""

    lam: float
    survivors: int
    rounds: int


@dataclass(frozen=True)
class BlockCall:
    """One greedy_sample call: |N'| before it, the block it drew, its rounds."""

    lam: float
    candidates: int
    delta: float
    sampled: int
    kept: int
    survivors: int
    rounds: int


@dataclass
class BlockGreedyResult:
    """I = union of the kept parts of every non-empty greedy block."""

    I: Subset  # noqa: E741
    blocks: list[GreedyBlock] = field(default_factory=list)
    trace: list[BlockCall] = field(default_factory=list)
    checks: list[ThresholdCheck] = field(default_factory=list)
    union_S: Subset = frozenset()
    lambda_max: float = 0.0
    lambda_min: float = 0.0
    calls: int = 0
    initial_rounds: int = 0

    @property
    def rounds(self) -> int:
        """Rounds accounted for by the trace."""
        return (
            self.initial_rounds
            + sum(check.rounds for check in self.checks)
            + sum(call.rounds for call in self.trace)
        )


def default_lambda_min(lambda_max: float, eps: float, k: int) -> float:
    """eps * max_e f(e) / k, a valid floor since OPT >= max_e f(e)."""
    return eps * lambda_max / max(1, k)


def block_greedy(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    eps: float,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
    *,
    lambda_min: float | None = None,
) -> BlockGreedyResult:
    """Chain greedy blocks for every threshold of the schedule.

    For each lambda, greedy_sample runs on (M / S restricted to N', f_S) while
    N' = {e outside span(S) : f_S(e) >= (1 - eps) lambda} is non-empty, where S
    is the union of every block drawn so far. The survivors reported by one
    call are the N' of the next, so only the first test per threshold costs a
    round.
    """
    if not 0.0 < eps < 1.0:
        raise SpecError("eps must lie in (0, 1)")
    cfg = cfg or EstimatorConfig()
    engine = engine or BatchEngine()
    meter = engine.meter
    ground = sorted(matroid.ground)
    if not ground:
        return BlockGreedyResult(I=frozenset())

    start = meter.rounds
    batch = Batch()
    for e in ground:
        batch.value(f, frozenset({e}))
    singles = [float(v) for v in engine.run(batch, phase="singletons")]
    lambda_max = max(singles)
    result = BlockGreedyResult(I=frozenset(), initial_rounds=meter.rounds - start)
    if lambda_max <= 0:
        logger.debug("no element has positive value; nothing to select")
        return result

    k = max(1, matroid.rank_of_matroid)
    floor = lambda_min
    if floor is None:
        floor = default_lambda_min(lambda_max, eps, k)
    schedule = threshold_schedule(lambda_max, floor, eps)
    result.lambda_max = lambda_max
    result.lambda_min = floor

    kept: set[int] = set()
    union: Subset = frozenset()
    union_value = 0.0
    for lam in schedule:
        before = meter.rounds
        report: ResidualReport = residual(
            matroid, f, union, lam, eps, cfg, engine, sample_value=union_value
        )
        result.checks.append(ThresholdCheck(lam, report.after, meter.rounds - before))
        logger.info(
            "threshold lam={:.6g} survivors={} selected={}",
            lam,
            report.after,
            len(kept),
        )
        calls_here = 0
        while report.survivors:
            if calls_here >= cfg.max_block_calls:
                logger.warning(
                    "block call cap {} reached at lam={:.6g}; {} candidates left",
                    cfg.max_block_calls,
                    lam,
                    report.after,
                )
                break
            candidates = report.after
            view = matroid.contract(union).restrict(report.survivors)
            marginal_f = contract_function(f, union, union_value)
            before = meter.rounds
            block, report = greedy_sample(
                view,
                marginal_f,
                lam,
                eps,
                cfg,
                derive_seed(seed, result.calls),
                engine,
            )
            result.calls += 1
            calls_here += 1
            result.trace.append(
                BlockCall(
                    lam=lam,
                    candidates=candidates,
                    delta=block.delta,
                    sampled=len(block.S),
                    kept=len(block.I),
                    survivors=report.after,
                    rounds=meter.rounds - before,
                )
            )
            if not block.S:
                continue
            result.blocks.append(block)
            kept |= block.I
            union = union | block.S
            union_value += report.sample_value

    result.I = frozenset(kept)
    result.union_S = union
    logger.debug(
        "block greedy done: |I|={} |S|={} calls={} thresholds={}",
        len(result.I),
        len(union),
        result.calls,
        len(schedule),
    )
    return result


def expected_call_bound(n: int, k: int, eps: float) -> float:
    """log(n) * log(k) / eps^2, the scale of the expected number of calls."""
    return math.log(max(n, 2)) * math.log(max(k, 2)) / eps**2
