"""Experiment runner, report writers and run persistence."""

import csv
import io
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import aiofiles
import numpy as np
from loguru import logger
from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession

from blockgreedy.algorithms import (
    FractionalSolution,
    amplify_monotone,
    amplify_nonnegative,
    beta_scaled_solve,
    block_greedy,
    brute_force_opt,
    expected_call_bound,
    sequential_greedy,
    swap_round,
)
from blockgreedy.config import (
    amplify_defaults,
    estimator_config_from_settings,
    settings,
)
from blockgreedy.engine import AdaptivityMeter, BatchEngine, derive_seed
from blockgreedy.errors import IncompatibleAlgorithmError, SpecError
from blockgreedy.models import ExperimentRun
from blockgreedy.models.reports import ExperimentConfig, RepetitionRecord, RunReport
from blockgreedy.oracles import (
    EXACT_LIMIT,
    IndependenceOracle,
    MatroidOracle,
    SampleBudget,
    Subset,
    SubmodularOracle,
)

from .instance_service import build_instance

CSV_COLUMNS = [
    "instance",
    "algorithm",
    "eps",
    "seed",
    "value",
    "rounds",
    "f_calls",
    "matroid_calls",
    "opt",
    "ratio",
]
FRACTIONAL_SAMPLES = 256
FRACTIONAL_EXACT_LIMIT = 14
ROUNDING_KEY = 7

OptMode = Literal["auto", "off"]
SweepParam = Literal["eps", "seed", "reps"]


@dataclass(frozen=True)
class _Outcome:
    solution: Subset
    f_evals: int
    calls: int | None = None
    fractional_value: float | None = None


def check_compatibility(config: ExperimentConfig, f: SubmodularOracle) -> None:
    """Reject algorithm/function pairs the algorithm has no guarantee for."""
    if config.algorithm == "amplify_monotone" and not f.is_monotone:
        raise IncompatibleAlgorithmError(
            f"amplify_monotone needs a monotone function, "
            f"got {config.function.kind}; use amplify_nonnegative"
        )
    if config.algorithm in ("amplify_nonnegative", "beta_scaled"):
        if not f.is_nonnegative:
            raise IncompatibleAlgorithmError(
                f"{config.algorithm} needs a non-negative function"
            )


def _round(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    x: FractionalSolution,
    seed: int,
) -> Subset:
    """Swap rounding on single matroids, the best part on matchoids."""
    if isinstance(matroid, MatroidOracle):
        return swap_round(matroid, x, derive_seed(seed, ROUNDING_KEY))
    best: Subset = frozenset()
    best_value = 0.0
    for subset, _ in x.parts:
        value = f.eval(subset)
        if value > best_value:
            best, best_value = subset, value
    return best


def _fractional_value(f: SubmodularOracle, x: FractionalSolution, seed: int) -> float:
    if f.n <= FRACTIONAL_EXACT_LIMIT:
        return x.value_exact(f)
    return x.value_estimate(f, SampleBudget(m=FRACTIONAL_SAMPLES), seed)


def _solve(
    config: ExperimentConfig,
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    seed: int,
    engine: BatchEngine,
) -> _Outcome:
    """Run the configured algorithm.

    ``f_evals`` counts every evaluation of f made by the algorithm, including
    the ones hidden inside auxiliary amplification oracles; rounding and the
    fractional value are not counted.
    """
    cfg = config.estimator or estimator_config_from_settings()
    amp = amplify_defaults(config.amplify, config.eps)
    eps = config.eps
    start = f.calls
    match config.algorithm:
        case "sequential":
            chosen = sequential_greedy(matroid, f, engine)
            return _Outcome(chosen, f.calls - start)
        case "block_greedy":
            result = block_greedy(matroid, f, eps, cfg, seed, engine)
            return _Outcome(result.I, f.calls - start, calls=result.calls)
        case "amplify_monotone":
            monotone = amplify_monotone(matroid, f, eps, cfg, seed, engine, amp)
            f_evals = f.calls - start
            x = monotone.solution
            return _Outcome(
                _round(matroid, f, x, seed),
                f_evals,
                calls=sum(r.calls for r in monotone.results),
                fractional_value=_fractional_value(f, x, seed),
            )
        case "amplify_nonnegative":
            amplified = amplify_nonnegative(matroid, f, eps, cfg, seed, engine, amp)
            f_evals = f.calls - start
            x = amplified.fractional(f.n)
            return _Outcome(
                _round(matroid, f, x, seed),
                f_evals,
                calls=sum(r.calls for r in amplified.results),
                fractional_value=_fractional_value(f, x, seed),
            )
        case "beta_scaled":
            scaled = beta_scaled_solve(
                matroid, f, eps, cfg=cfg, seed=seed, engine=engine, amp=amp
            )
            return _Outcome(scaled.J, f.calls - start, calls=scaled.result.calls)


def _mean_and_stderr(values: Sequence[float]) -> tuple[float, float]:
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        return float(data.mean()), 0.0
    return float(data.mean()), float(data.std(ddof=1) / math.sqrt(data.size))


def run_experiment(
    config: ExperimentConfig,
    *,
    workers: int | None = None,
    opt: OptMode = "auto",
) -> RunReport:
    """Run ``config.reps`` seeded repetitions and aggregate them.

    Repetition r uses seed derive_seed(config.seed, r). OPT is computed by
    brute force when opt is "auto" and the instance is small enough.
    """
    matroid, f = build_instance(config.instance)
    check_compatibility(config, f)
    n = len(matroid.ground)
    records: list[RepetitionRecord] = []
    for r in range(config.reps):
        seed = derive_seed(config.seed, r)
        meter = AdaptivityMeter()
        started = time.perf_counter()
        with BatchEngine(meter, workers or settings.workers) as engine:
            outcome = _solve(config, matroid, f, seed, engine)
        elapsed = time.perf_counter() - started
        snapshot = meter.snapshot()
        record = RepetitionRecord(
            seed=seed,
            value=f.eval(outcome.solution),
            rounds=snapshot.rounds,
            f_calls=outcome.f_evals,
            queries=snapshot.f_calls,
            matroid_calls=snapshot.matroid_calls,
            size=len(outcome.solution),
            feasible=matroid.is_independent(outcome.solution),
            calls=outcome.calls,
            fractional_value=outcome.fractional_value,
            wall_time=elapsed,
        )
        records.append(record)
        logger.info(
            "{} {} rep {}/{}: value={:.6g} rounds={} feasible={}",
            config.name,
            config.algorithm,
            r + 1,
            config.reps,
            record.value,
            record.rounds,
            record.feasible,
        )

    mean_value, stderr_value = _mean_and_stderr([rec.value for rec in records])
    mean_rounds, stderr_rounds = _mean_and_stderr([rec.rounds for rec in records])
    call_counts = [rec.calls for rec in records if rec.calls is not None]
    mean_calls = float(np.mean(call_counts)) if call_counts else None
    call_constant = None
    if mean_calls is not None:
        k = max(1, matroid.rank_of_matroid)
        call_constant = mean_calls / expected_call_bound(n, k, config.eps)

    opt_value = None
    if opt == "auto" and n <= min(settings.opt_limit, EXACT_LIMIT):
        opt_value = brute_force_opt(matroid, f).opt_value
    ratio = mean_value / opt_value if opt_value else None

    return RunReport(
        version=settings.report_version,
        instance=config.name,
        algorithm=config.algorithm,
        eps=config.eps,
        seed=config.seed,
        reps=config.reps,
        n=n,
        records=records,
        mean_value=mean_value,
        stderr_value=stderr_value,
        mean_rounds=mean_rounds,
        stderr_rounds=stderr_rounds,
        mean_f_calls=float(np.mean([rec.f_calls for rec in records])),
        mean_matroid_calls=float(np.mean([rec.matroid_calls for rec in records])),
        mean_calls=mean_calls,
        call_constant=call_constant,
        opt=opt_value,
        ratio=ratio,
    )


def sweep_configs(
    config: ExperimentConfig, param: SweepParam, values: Sequence[float]
) -> list[ExperimentConfig]:
    """One config per value of ``param``; each is validated again."""
    base = config.model_dump()
    configs = []
    for value in values:
        if param in ("seed", "reps"):
            if float(value) != int(value):
                raise SpecError(f"{param} values must be integers, got {value}")
            value = int(value)
        configs.append(ExperimentConfig.model_validate({**base, param: value}))
    return configs


def csv_rows(report: RunReport) -> list[list[str]]:
    """One row per repetition in CSV_COLUMNS order."""
    opt = "" if report.opt is None else repr(report.opt)
    rows = []
    for record in report.records:
        ratio = ""
        if report.opt:
            ratio = repr(record.value / report.opt)
        rows.append(
            [
                report.instance,
                report.algorithm,
                repr(report.eps),
                str(record.seed),
                repr(record.value),
                str(record.rounds),
                str(record.f_calls),
                str(record.matroid_calls),
                opt,
                ratio,
            ]
        )
    return rows


def render_csv(reports: Sequence[RunReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerows(csv_rows(report))
    return buffer.getvalue()


async def write_csv(reports: Sequence[RunReport], path: str) -> None:
    async with aiofiles.open(path, mode="w", encoding="utf-8", newline="") as file:
        await file.write(render_csv(reports))


async def write_report(
    report: RunReport, path: str, include_timings: bool = False
) -> None:
    async with aiofiles.open(path, mode="w", encoding="utf-8") as file:
        await file.write(report.to_json(include_timings))


class ExperimentService:
    """Stores run reports and lists them back."""

    def __init__(self, session: AsyncSession):
        self.session = session

    async def save_report(self, report: RunReport) -> ExperimentRun:
        run = ExperimentRun(
            instance=report.instance,
            algorithm=report.algorithm,
            eps=report.eps,
            seed=report.seed,
            reps=report.reps,
            mean_value=report.mean_value,
            stderr_value=report.stderr_value,
            mean_rounds=report.mean_rounds,
            opt=report.opt,
            ratio=report.ratio,
            report_json=report.to_json(),
        )
        self.session.add(run)
        try:
            await self.session.commit()
        except Exception:
            await self.session.rollback()
            raise
        await self.session.refresh(run)
        logger.info("stored run {} ({} on {})", run.id, run.algorithm, run.instance)
        return run

    async def list_runs(self, limit: int = 20) -> list[ExperimentRun]:
        """Most recent runs first."""
        query = (
            select(ExperimentRun)
            .order_by(ExperimentRun.created_at.desc(), ExperimentRun.id.desc())
            .limit(limit)
        )
        result = await self.session.execute(query)
        return list(result.scalars().all())
