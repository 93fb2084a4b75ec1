"""Multilinear amplification wrappers around block greedy, and the beta scheme."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from loguru import logger

from blockgreedy.engine import BatchEngine, bernoulli_subset, derive_rng, derive_seed
from blockgreedy.errors import IncompatibleAlgorithmError, SpecError
from blockgreedy.models.specs import AmplifyConfig, EstimatorConfig
from blockgreedy.oracles import (
    FractionalPoint,
    IndependenceOracle,
    SampleBudget,
    Subset,
    SubmodularOracle,
    as_subset,
    aux_beta,
    aux_monotone,
    aux_nonnegative,
)

from .baselines import sample_scaled, sequential_greedy
from .block_greedy import BlockGreedyResult, block_greedy
from .estimators import failure_target, sample_budget
from .fractional import FractionalSolution

DEFAULT_ELL_FACTOR = 4.0
CALIBRATION_FRACTION = 0.125


@dataclass(frozen=True)
class MatchoidConstants:
    """beta maximizing beta (1 - beta) / (beta + p), and that maximum."""

    p: int
    beta: float
    ratio: float


def matchoid_constants(p: int) -> MatchoidConstants:
    """Constants of the beta scheme on a p-matchoid.

    beta = sqrt(p (p + 1)) - p maximizes beta (1 - beta) / (beta + p), and the
    maximum is 2p + 1 - 2 sqrt(p (p + 1)); p = 1 gives sqrt 2 - 1 and about 0.1716.
    """
    if p < 1:
        raise SpecError(f"p must be at least 1, got {p}")
    root = math.sqrt(p * (p + 1))
    return MatchoidConstants(p=p, beta=root - p, ratio=2 * p + 1 - 2 * root)


def default_ell(eps: float, factor: float = DEFAULT_ELL_FACTOR) -> int:
    return max(1, math.ceil(factor / eps))


@dataclass(frozen=True)
class _Calibration:
    budget: SampleBudget | None
    lambda_min: float | None
    opt_estimate: float | None
    rounds: int = 0


def _calibrate(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    eps: float,
    cfg: EstimatorConfig,
    amp: AmplifyConfig,
    engine: BatchEngine,
) -> _Calibration:
    """Size the auxiliary sample count and the lambda floor from a greedy OPT guess.

    The greedy run goes through ``engine``, so its rounds and f queries are
    metered. Its first pick is the best singleton, so the guess is never below
    max_e f(e).
    """
    if amp.exact:
        return _Calibration(None, None, None)
    if amp.samples is not None:
        return _Calibration(SampleBudget(m=amp.samples), None, None)
    before = engine.meter.rounds
    opt_estimate = f.eval(sequential_greedy(matroid, f, engine))
    rounds = engine.meter.rounds - before
    if opt_estimate <= 0:
        return _Calibration(SampleBudget(m=1), None, opt_estimate, rounds)
    k = max(1, matroid.rank_of_matroid)
    gamma = CALIBRATION_FRACTION * eps**2 * opt_estimate / k
    n = max(1, len(matroid.ground))
    budget = sample_budget(n, eps, gamma, failure_target(n, cfg), cfg)
    if amp.max_samples is not None and budget.m > amp.max_samples:
        budget = SampleBudget(
            m=amp.max_samples,
            eps_rel=budget.eps_rel,
            gamma_add=budget.gamma_add,
            fail_prob=budget.fail_prob,
        )
    logger.debug(
        "amplification calibrated: opt~{:.6g} k={} m={} lambda_min={:.6g}",
        opt_estimate,
        k,
        budget.m,
        gamma,
    )
    return _Calibration(budget, gamma, opt_estimate, rounds)


@dataclass
class MonotoneAmplification:
    """The convex combination built by monotone amplification."""

    solution: FractionalSolution
    ell: int
    results: list[BlockGreedyResult] = field(default_factory=list)
    round_meters: list[int] = field(default_factory=list)
    samples: int | None = None
    opt_estimate: float | None = None
    calibration_rounds: int = 0


@dataclass
class NonnegativeAmplification:
    """The sets I_1..I_ell of non-negative amplification."""

    sets: list[Subset]
    alpha: float
    ell: int
    results: list[BlockGreedyResult] = field(default_factory=list)
    round_meters: list[int] = field(default_factory=list)
    samples: int | None = None
    opt_estimate: float | None = None
    calibration_rounds: int = 0

    def fractional(self, n: int) -> FractionalSolution:
        """The point sum_i alpha I_i / ell as weighted parts."""
        return FractionalSolution.from_sets(n, self.sets, self.alpha / self.ell)


def amplify_monotone(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    eps: float,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
    amp: AmplifyConfig | None = None,
) -> MonotoneAmplification:
    """ell rounds of block greedy on g(S) = F(x + 1_S / ell) - F(x).

    Each round adds its independent set with weight 1 / ell to x.
    """
    if not (f.is_monotone and f.is_nonnegative):
        raise IncompatibleAlgorithmError(
            "amplify_monotone needs a monotone non-negative function; "
            "use amplify_nonnegative instead"
        )
    cfg = cfg or EstimatorConfig()
    amp = amp or AmplifyConfig()
    engine = engine or BatchEngine()
    ell = amp.ell or default_ell(eps)
    calibration = _calibrate(matroid, f, eps, cfg, amp, engine)
    x = FractionalPoint.zeros(f.n)
    outcome = MonotoneAmplification(
        solution=FractionalSolution(f.n),
        ell=ell,
        samples=calibration.budget.m if calibration.budget else None,
        opt_estimate=calibration.opt_estimate,
        calibration_rounds=calibration.rounds,
    )
    parts: list[tuple[Subset, float]] = []
    for i in range(ell):
        g = aux_monotone(f, x, ell, calibration.budget, derive_seed(seed, i, 0))
        before = engine.meter.rounds
        result = block_greedy(
            matroid,
            g,
            eps,
            cfg,
            derive_seed(seed, i, 1),
            engine,
            lambda_min=calibration.lambda_min,
        )
        outcome.results.append(result)
        outcome.round_meters.append(engine.meter.rounds - before)
        parts.append((result.I, 1.0 / ell))
        x = x.plus(result.I, 1.0 / ell)
        logger.info("amplification round {}/{}: |I|={}", i + 1, ell, len(result.I))
    outcome.solution = FractionalSolution(f.n, tuple(parts))
    return outcome


def amplify_nonnegative(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    eps: float,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
    amp: AmplifyConfig | None = None,
) -> NonnegativeAmplification:
    """ell rounds of block greedy on g(S) = E[f(J | S') - f(J)].

    J is the union of J_i ~ alpha I_i / ell over the earlier rounds and
    S' ~ S / ell. alpha defaults to 1 / (p + 1), so 1/2 on a single
    matroid; ``amp.alpha`` overrides it, e.g. with (1 - 3 eps) / 2.
    """
    if not f.is_nonnegative:
        raise IncompatibleAlgorithmError(
            "amplify_nonnegative needs a non-negative function"
        )
    cfg = cfg or EstimatorConfig()
    amp = amp or AmplifyConfig()
    engine = engine or BatchEngine()
    ell = amp.ell or default_ell(eps)
    alpha = amp.alpha if amp.alpha is not None else 1.0 / (matroid.p + 1)
    calibration = _calibrate(matroid, f, eps, cfg, amp, engine)
    outcome = NonnegativeAmplification(
        sets=[],
        alpha=alpha,
        ell=ell,
        samples=calibration.budget.m if calibration.budget else None,
        opt_estimate=calibration.opt_estimate,
        calibration_rounds=calibration.rounds,
    )
    for i in range(ell):
        g = aux_nonnegative(
            f, outcome.sets, alpha, ell, calibration.budget, derive_seed(seed, i, 0)
        )
        before = engine.meter.rounds
        result = block_greedy(
            matroid,
            g,
            eps,
            cfg,
            derive_seed(seed, i, 1),
            engine,
            lambda_min=calibration.lambda_min,
        )
        outcome.results.append(result)
        outcome.round_meters.append(engine.meter.rounds - before)
        outcome.sets.append(result.I)
        logger.info("amplification round {}/{}: |I|={}", i + 1, ell, len(result.I))
    return outcome


@dataclass(frozen=True)
class UnionSample:
    """J = union of the J_i; ``independent`` is None when no matroid was given."""

    J: Subset
    independent: bool | None


def sample_union(
    sets: Sequence[Iterable[int]],
    alpha: float,
    ell: int,
    seed: int,
    matroid: IndependenceOracle | None = None,
) -> UnionSample:
    """Keep each element of each I_i with probability alpha / ell; return the union."""
    if ell < 1:
        raise SpecError("ell must be at least 1")
    if alpha < 0:
        raise SpecError("alpha must be non-negative")
    keep = min(1.0, alpha / ell)
    rng = derive_rng(seed)
    union: set[int] = set()
    for subset in sets:
        union |= bernoulli_subset(rng, sorted(as_subset(subset)), keep)
    chosen = frozenset(union)
    flag = None if matroid is None else matroid.is_independent(chosen)
    return UnionSample(chosen, flag)


@dataclass
class BetaScaledResult:
    """J ~ beta I for the block-greedy output I on g(S) = F(beta 1_S)."""

    J: Subset
    I: Subset  # noqa: E741
    constants: MatchoidConstants
    result: BlockGreedyResult
    samples: int | None = None
    calibration_rounds: int = 0


def beta_scaled_solve(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    eps: float,
    p: int | None = None,
    cfg: EstimatorConfig | None = None,
    seed: int = 0,
    engine: BatchEngine | None = None,
    amp: AmplifyConfig | None = None,
) -> BetaScaledResult:
    """Run block greedy on F(beta 1_S) and keep each chosen element w.p. beta.

    p defaults to the matchoid parameter of ``matroid``.
    """
    if not f.is_nonnegative:
        raise IncompatibleAlgorithmError(
            "the beta scheme needs a non-negative function"
        )
    cfg = cfg or EstimatorConfig()
    amp = amp or AmplifyConfig()
    engine = engine or BatchEngine()
    constants = matchoid_constants(p if p is not None else matroid.p)
    calibration = _calibrate(matroid, f, eps, cfg, amp, engine)
    g = aux_beta(f, constants.beta, calibration.budget, derive_seed(seed, 0))
    result = block_greedy(
        matroid,
        g,
        eps,
        cfg,
        derive_seed(seed, 1),
        engine,
        lambda_min=calibration.lambda_min,
    )
    chosen = sample_scaled(result.I, constants.beta, derive_seed(seed, 2))
    return BetaScaledResult(
        J=chosen,
        I=result.I,
        constants=constants,
        result=result,
        samples=calibration.budget.m if calibration.budget else None,
        calibration_rounds=calibration.rounds,
    )
