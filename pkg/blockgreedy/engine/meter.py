"""Adaptive-round metering and the batch execution engine."""

import threading
from collections import Counter
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import TracebackType
from typing import Any, Literal, Protocol

from loguru import logger

from blockgreedy.errors import NestedBatchError


class SupportsEval(Protocol):
    """Anything that evaluates a set function."""

    def eval(self, subset: frozenset[int]) -> float: ...


class SupportsSpan(Protocol):
    """Anything that answers span and independence queries."""

    def spans(self, subset: frozenset[int], element: int) -> bool: ...

    def is_independent(self, subset: frozenset[int]) -> bool: ...


class SupportsRank(Protocol):
    """Single matroids also answer rank queries."""

    def rank(self, subset: frozenset[int]) -> int: ...


@dataclass(frozen=True)
class MeterSnapshot:
    """Immutable copy of the meter counters."""

    rounds: int
    f_calls: int
    matroid_calls: int
    phases: dict[str, int] = field(default_factory=dict)

    def __sub__(self, other: "MeterSnapshot") -> "MeterSnapshot":
        phases = Counter(self.phases)
        phases.subtract(other.phases)
        return MeterSnapshot(
            rounds=self.rounds - other.rounds,
            f_calls=self.f_calls - other.f_calls,
            matroid_calls=self.matroid_calls - other.matroid_calls,
            phases={k: v for k, v in phases.items() if v},
        )


class AdaptivityMeter:
    """Counts adaptive rounds and oracle queries; safe to share between threads."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._rounds = 0
        self._f_calls = 0
        self._matroid_calls = 0
        self._phases: Counter[str] = Counter()

    @property
    def rounds(self) -> int:
        return self._rounds

    @property
    def f_calls(self) -> int:
        return self._f_calls

    @property
    def matroid_calls(self) -> int:
        return self._matroid_calls

    def record_batch(self, f_calls: int, matroid_calls: int, phase: str) -> bool:
        """Account for one submitted batch. Empty batches are not rounds."""
        if f_calls < 0 or matroid_calls < 0:
            raise ValueError("query counts must be non-negative")
        if f_calls + matroid_calls == 0:
            return False
        with self._lock:
            self._rounds += 1
            self._f_calls += f_calls
            self._matroid_calls += matroid_calls
            self._phases[phase] += 1
        return True

    def snapshot(self) -> MeterSnapshot:
        """Return a consistent copy of the counters."""
        with self._lock:
            return MeterSnapshot(
                rounds=self._rounds,
                f_calls=self._f_calls,
                matroid_calls=self._matroid_calls,
                phases=dict(self._phases),
            )


@dataclass(frozen=True)
class _Query:
    kind: Literal["f", "matroid"]
    run: Callable[[], Any]


class Batch:
    """A set of mutually independent oracle queries forming one adaptive round.

    Each ``add`` method returns the position of its answer in the list that
    ``BatchEngine.run`` returns.
    """

    def __init__(self) -> None:
        self._queries: list[_Query] = []

    def __len__(self) -> int:
        return len(self._queries)

    @property
    def f_count(self) -> int:
        return sum(1 for q in self._queries if q.kind == "f")

    @property
    def matroid_count(self) -> int:
        return sum(1 for q in self._queries if q.kind == "matroid")

    def _add(self, kind: Literal["f", "matroid"], run: Callable[[], Any]) -> int:
        self._queries.append(_Query(kind, run))
        return len(self._queries) - 1

    def value(self, f: SupportsEval, subset: frozenset[int]) -> int:
        """Queue ``f(subset)``."""
        return self._add("f", lambda: f.eval(subset))

    def spans(
        self, matroid: SupportsSpan, subset: frozenset[int], element: int
    ) -> int:
        """Queue the membership test ``element in span(subset)``."""
        return self._add("matroid", lambda: matroid.spans(subset, element))

    def independent(self, matroid: SupportsSpan, subset: frozenset[int]) -> int:
        """Queue an independence test."""
        return self._add("matroid", lambda: matroid.is_independent(subset))

    def rank(self, matroid: SupportsRank, subset: frozenset[int]) -> int:
        """Queue a rank query."""
        return self._add("matroid", lambda: matroid.rank(subset))

    def queries(self) -> list[Callable[[], Any]]:
        return [q.run for q in self._queries]


class BatchEngine:
    """Executes batches on a worker pool and meters each one as a single round."""

    def __init__(self, meter: AdaptivityMeter | None = None, workers: int = 1):
        if workers < 1:
            raise ValueError("workers must be at least 1")
        self.meter = meter if meter is not None else AdaptivityMeter()
        self.workers = workers
        self._pool: ThreadPoolExecutor | None = None
        self._state_lock = threading.Lock()
        self._active = False

    def __enter__(self) -> "BatchEngine":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()

    def close(self) -> None:
        """Shut the worker pool down."""
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def run(self, batch: Batch, phase: str = "batch") -> list[Any]:
        """Execute every query of ``batch`` and return the answers in order."""
        if len(batch) == 0:
            return []
        with self._state_lock:
            if self._active:
                raise NestedBatchError(
                    f"batch for phase '{phase}' submitted inside a running batch"
                )
            self._active = True
        try:
            self.meter.record_batch(batch.f_count, batch.matroid_count, phase)
            logger.debug(
                "batch phase={} f={} matroid={}",
                phase,
                batch.f_count,
                batch.matroid_count,
            )
            jobs = batch.queries()
            if self.workers == 1 or len(jobs) == 1:
                return [job() for job in jobs]
            if self._pool is None:
                self._pool = ThreadPoolExecutor(max_workers=self.workers)
            return list(self._pool.map(lambda job: job(), jobs))
        finally:
            with self._state_lock:
                self._active = False


def record_batch(meter: AdaptivityMeter, batch: Batch, phase: str = "batch") -> bool:
    """Meter ``batch`` without executing it; returns whether a round was counted."""
    return meter.record_batch(batch.f_count, batch.matroid_count, phase)
