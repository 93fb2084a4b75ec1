"""Multilinear extension (exact and sampled) and the auxiliary functions g.

The Monte Carlo auxiliary oracles draw sample j of every query from the
stream ``(seed, j)``, so one oracle instance is a fixed average of m
submodular functions: repeated queries agree and the estimate itself stays
normalized and submodular.
"""

import threading
import weakref
from abc import abstractmethod
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from blockgreedy.engine import Batch, BatchEngine, derive_rng
from blockgreedy.errors import SpecError

from .base import Subset, as_subset
from .functions import SubmodularOracle

EXACT_LIMIT = 20


@dataclass(frozen=True, eq=False)
class FractionalPoint:
    """A vector x in [0, 1]^N; entries above 1 are truncated on construction."""

    x: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.x, dtype=float, copy=True)
        if values.ndim != 1:
            raise SpecError("a fractional point is a one-dimensional vector")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise SpecError("fractional point entries must be finite and >= 0")
        values = np.minimum(values, 1.0)
        values.setflags(write=False)
        object.__setattr__(self, "x", values)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @classmethod
    def zeros(cls, n: int) -> "FractionalPoint":
        return cls(np.zeros(n))

    @classmethod
    def indicator(
        cls, n: int, subset: Iterable[int], weight: float = 1.0
    ) -> "FractionalPoint":
        values = np.zeros(n)
        values[sorted(as_subset(subset))] = weight
        return cls(values)

    def plus(self, subset: Iterable[int], weight: float) -> "FractionalPoint":
        """Return x + weight * 1_subset (truncated)."""
        values = self.x.copy()
        values[sorted(as_subset(subset))] += weight
        return FractionalPoint(values)


@dataclass(frozen=True)
class SampleBudget:
    """Sample count m with the accuracy target it was sized for."""

    m: int
    eps_rel: float = 0.1
    gamma_add: float = 1.0
    fail_prob: float = 0.01

    def __post_init__(self) -> None:
        if self.m < 1:
            raise SpecError("a sample budget needs m >= 1")
        if self.eps_rel <= 0 or self.gamma_add <= 0:
            raise SpecError("sample budget error targets must be positive")
        if not 0.0 < self.fail_prob < 1.0:
            raise SpecError("sample budget failure probability must lie in (0, 1)")


_tables: "weakref.WeakKeyDictionary[SubmodularOracle, np.ndarray]" = (
    weakref.WeakKeyDictionary()
)
_tables_lock = threading.RLock()


def _mask_subset(mask: int, n: int) -> Subset:
    return frozenset(e for e in range(n) if mask >> e & 1)


def _value_table(f: SubmodularOracle) -> np.ndarray:
    """f on every subset, indexed by bitmask; cached per oracle instance."""
    with _tables_lock:
        table = _tables.get(f)
        if table is None:
            table = np.array([f.eval(_mask_subset(m, f.n)) for m in range(1 << f.n)])
            _tables[f] = table
        return table


def multilinear_exact(f: SubmodularOracle, x: FractionalPoint) -> float:
    """F(x) by full enumeration of the 2^n subsets."""
    if f.n > EXACT_LIMIT:
        raise SpecError(f"exact multilinear extension needs n <= {EXACT_LIMIT}")
    if x.n != f.n:
        raise SpecError("fractional point and function disagree on n")
    table = _value_table(f)
    masks = np.arange(1 << f.n)
    weights = np.ones(masks.size)
    for e in range(f.n):
        weights *= np.where(masks >> e & 1, x.x[e], 1.0 - x.x[e])
    return float(weights @ table)


def _sample(rng: np.random.Generator, x: np.ndarray) -> Subset:
    return frozenset(int(e) for e in np.flatnonzero(rng.random(x.size) < x))


def multilinear_estimate(
    f: SubmodularOracle,
    x: FractionalPoint,
    budget: SampleBudget,
    seed: int,
    engine: BatchEngine | None = None,
) -> float:
    """Mean of f over m samples S ~ x, all evaluated in one batch."""
    samples = [_sample(derive_rng(seed, j), x.x) for j in range(budget.m)]
    if engine is None:
        return float(np.mean(f.batch_eval(samples)))
    batch = Batch()
    for sample in samples:
        batch.value(f, sample)
    return float(np.mean(engine.run(batch, phase="multilinear")))


class _AuxiliaryFunction(SubmodularOracle):
    """Shared plumbing: exact mode when ``budget`` is None, Monte Carlo otherwise.

    Exact values are memoized; the memo is shared by the engine's worker
    threads and guarded by a lock.
    """

    def __init__(
        self,
        f: SubmodularOracle,
        budget: SampleBudget | None,
        *,
        monotone: bool,
        nonnegative: bool,
    ):
        super().__init__(f.n, monotone=monotone, nonnegative=nonnegative)
        self.f = f
        self.budget = budget
        self.is_estimate = budget is not None
        if budget is None and f.n > EXACT_LIMIT:
            raise SpecError(f"exact auxiliary functions need n <= {EXACT_LIMIT}")
        self._memo: dict[Subset, float] = {}
        self._memo_lock = threading.Lock()

    def _value(self, subset: Subset) -> float:
        if self.budget is not None:
            return self._compute(subset)
        # exact values are pure functions of the subset
        with self._memo_lock:
            value = self._memo.get(subset)
        if value is None:
            value = self._compute(subset)
            with self._memo_lock:
                value = self._memo.setdefault(subset, value)
        return value

    @abstractmethod
    def _compute(self, subset: Subset) -> float: ...


class AuxMonotone(_AuxiliaryFunction):
    """g(S) = F(x + 1_S / ell) - F(x)."""

    def __init__(
        self,
        f: SubmodularOracle,
        x: FractionalPoint,
        ell: int,
        budget: SampleBudget | None,
        seed: int,
    ):
        super().__init__(f, budget, monotone=True, nonnegative=True)
        self.x = x
        self.ell = ell
        if budget is None:
            self.base_value = multilinear_exact(f, x)
            return
        upper = np.minimum(x.x + 1.0 / ell, 1.0)
        self.bases: list[Subset] = []
        self.steps: list[Subset] = []
        for j in range(budget.m):
            draws = derive_rng(seed, j).random(f.n)
            self.bases.append(frozenset(int(e) for e in np.flatnonzero(draws < x.x)))
            step = (draws >= x.x) & (draws < upper)
            self.steps.append(frozenset(int(e) for e in np.flatnonzero(step)))
        self.base_values = [f.eval(base) for base in self.bases]

    def _compute(self, subset: Subset) -> float:
        if self.budget is None:
            point = self.x.plus(subset, 1.0 / self.ell)
            return multilinear_exact(self.f, point) - self.base_value
        total = 0.0
        for base, step, base_value in zip(
            self.bases, self.steps, self.base_values, strict=True
        ):
            added = subset & step
            if added:
                total += self.f.eval(base | added) - base_value
        return total / len(self.bases)


class AuxNonnegative(_AuxiliaryFunction):
    """g(S) = E[f(J | S') - f(J)] with J_j ~ alpha I_j / ell and S' ~ S / ell."""

    def __init__(
        self,
        f: SubmodularOracle,
        blocks: Sequence[Subset],
        alpha: float,
        ell: int,
        budget: SampleBudget | None,
        seed: int,
    ):
        monotone = f.is_monotone
        super().__init__(
            f, budget, monotone=monotone, nonnegative=monotone and f.is_nonnegative
        )
        self.alpha = alpha
        self.ell = ell
        keep = alpha / ell
        if budget is None:
            counts = np.zeros(f.n)
            for block in blocks:
                counts[sorted(block)] += 1
            self.union_prob = 1.0 - (1.0 - keep) ** counts
            self.base_value = multilinear_exact(f, FractionalPoint(self.union_prob))
            return
        self.unions: list[Subset] = []
        self.steps: list[Subset] = []
        for j in range(budget.m):
            rng = derive_rng(seed, j)
            union: set[int] = set()
            for block in blocks:
                members = sorted(block)
                kept = rng.random(len(members)) < keep
                union.update(e for e, k in zip(members, kept, strict=True) if k)
            self.unions.append(frozenset(union))
            draws = rng.random(f.n)
            chosen = np.flatnonzero(draws < 1.0 / ell)
            self.steps.append(frozenset(int(e) for e in chosen))
        self.base_values = [f.eval(union) for union in self.unions]

    def _compute(self, subset: Subset) -> float:
        if self.budget is None:
            chosen = np.zeros(self.f.n)
            chosen[sorted(subset)] = 1.0 / self.ell
            joint = 1.0 - (1.0 - self.union_prob) * (1.0 - chosen)
            return multilinear_exact(self.f, FractionalPoint(joint)) - self.base_value
        total = 0.0
        for union, step, base_value in zip(
            self.unions, self.steps, self.base_values, strict=True
        ):
            added = subset & step
            if added:
                total += self.f.eval(union | added) - base_value
        return total / len(self.unions)


class AuxBeta(_AuxiliaryFunction):
    """g(S) = F(beta * 1_S)."""

    def __init__(
        self, f: SubmodularOracle, beta: float, budget: SampleBudget | None, seed: int
    ):
        super().__init__(
            f, budget, monotone=f.is_monotone, nonnegative=f.is_nonnegative
        )
        self.beta = beta
        if budget is None:
            return
        self.masks = [
            _sample(derive_rng(seed, j), np.full(f.n, beta)) for j in range(budget.m)
        ]

    def _compute(self, subset: Subset) -> float:
        if self.budget is None:
            point = FractionalPoint.indicator(self.f.n, subset, self.beta)
            return multilinear_exact(self.f, point)
        return sum(self.f.eval(subset & mask) for mask in self.masks) / len(self.masks)


def aux_monotone(
    f: SubmodularOracle,
    x: FractionalPoint,
    ell: int,
    budget: SampleBudget | None,
    seed: int,
) -> SubmodularOracle:
    """Auxiliary function of monotone amplification at point x."""
    if ell < 1:
        raise SpecError("ell must be at least 1")
    if not f.is_monotone:
        raise SpecError("aux_monotone requires a monotone function")
    return AuxMonotone(f, x, ell, budget, seed)


def aux_nonnegative(
    f: SubmodularOracle,
    blocks: Sequence[Subset],
    alpha: float,
    ell: int,
    budget: SampleBudget | None,
    seed: int,
) -> SubmodularOracle:
    """Auxiliary function of non-negative amplification after ``blocks``."""
    if ell < 1:
        raise SpecError("ell must be at least 1")
    if not 0.0 < alpha <= 1.0:
        raise SpecError("alpha must lie in (0, 1]")
    return AuxNonnegative(f, [as_subset(b) for b in blocks], alpha, ell, budget, seed)


def aux_beta(
    f: SubmodularOracle, beta: float, budget: SampleBudget | None, seed: int
) -> SubmodularOracle:
    """Auxiliary function F(beta * 1_S) of the beta-scaling scheme."""
    if not 0.0 < beta < 1.0:
        raise SpecError("beta must lie in (0, 1)")
    return AuxBeta(f, beta, budget, seed)
