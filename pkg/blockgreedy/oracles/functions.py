"""Submodular set-function oracles and their marginal views."""

from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from blockgreedy.errors import SpecError
from blockgreedy.models.specs import (
    ConcaveOfModularSpec,
    CoverageSpec,
    CutSpec,
    FunctionSpec,
    ModularSpec,
)

from .base import CallCounter, GroundSet, Subset, as_subset


def _index(subset: Subset) -> np.ndarray:
    return np.fromiter(sorted(subset), dtype=np.int64, count=len(subset))


class SubmodularOracle(CallCounter, ABC):
    """Normalized set function over dense ids with metered evaluation.

    Instances are immutable after construction, so concurrent ``eval`` calls
    are safe. ``is_estimate`` marks oracles whose values approximate another
    function (auxiliary amplification oracles); comparisons against them use a
    tolerance band.
    """

    is_estimate: bool = False

    def __init__(self, n: int, *, monotone: bool, nonnegative: bool):
        super().__init__()
        self.ground = GroundSet(n)
        self.is_monotone = monotone
        self.is_nonnegative = nonnegative

    @property
    def n(self) -> int:
        return self.ground.n

    def eval(self, subset: Subset) -> float:
        """Return f(subset); the empty set always maps to 0."""
        self._count()
        if not subset:
            return 0.0
        return self._value(subset)

    def batch_eval(self, subsets: Sequence[Subset]) -> list[float]:
        """Evaluate each subset; equal element-wise to ``eval``."""
        return [self.eval(subset) for subset in subsets]

    @abstractmethod
    def _value(self, subset: Subset) -> float: ...


class CoverageFunction(SubmodularOracle):
    """Total weight of the universe items covered by the chosen elements."""

    def __init__(self, weights: Sequence[float], covers: Sequence[Sequence[int]]):
        super().__init__(len(covers), monotone=True, nonnegative=True)
        self.weights = np.asarray(weights, dtype=float)
        self.covers = [np.asarray(sorted(set(c)), dtype=np.int64) for c in covers]

    def _value(self, subset: Subset) -> float:
        covered = np.zeros(self.weights.size, dtype=bool)
        for e in subset:
            covered[self.covers[e]] = True
        return float(self.weights[covered].sum())


class CutFunction(SubmodularOracle):
    """Weight of the edges with exactly one endpoint in the chosen vertex set."""

    def __init__(self, vertices: int, edges: Sequence[tuple[int, int, float]]):
        super().__init__(vertices, monotone=False, nonnegative=True)
        self.tails = np.asarray([u for u, _, _ in edges], dtype=np.int64)
        self.heads = np.asarray([v for _, v, _ in edges], dtype=np.int64)
        self.weights = np.asarray([w for _, _, w in edges], dtype=float)

    def _value(self, subset: Subset) -> float:
        inside = np.zeros(self.n, dtype=bool)
        inside[_index(subset)] = True
        crossing = inside[self.tails] != inside[self.heads]
        return float(self.weights[crossing].sum())


class ModularFunction(SubmodularOracle):
    """Sum of per-element weights."""

    def __init__(self, weights: Sequence[float]):
        super().__init__(len(weights), monotone=True, nonnegative=True)
        self.weights = np.asarray(weights, dtype=float)

    def _value(self, subset: Subset) -> float:
        return float(self.weights[_index(subset)].sum())


class ConcaveOfModularFunction(SubmodularOracle):
    """``(w(S)) ** q`` for non-negative weights and 0 < q <= 1."""

    def __init__(self, weights: Sequence[float], exponent: float):
        super().__init__(len(weights), monotone=True, nonnegative=True)
        self.weights = np.asarray(weights, dtype=float)
        self.exponent = exponent

    def _value(self, subset: Subset) -> float:
        total = float(self.weights[_index(subset)].sum())
        return float(total**self.exponent)


class ContractedFunction(SubmodularOracle):
    """The marginal function U -> f(Q | U) - f(Q)."""

    def __init__(
        self,
        base: SubmodularOracle,
        contracted: Subset,
        base_value: float | None = None,
    ):
        super().__init__(
            base.n,
            monotone=base.is_monotone,
            nonnegative=base.is_monotone and base.is_nonnegative,
        )
        self.base = base
        self.contracted = contracted
        self.is_estimate = base.is_estimate
        if base_value is None:
            base_value = base.eval(contracted)
        self.base_value = base_value

    def _value(self, subset: Subset) -> float:
        return self.base.eval(self.contracted | subset) - self.base_value


def marginal(f: SubmodularOracle, base: Subset, added: Subset) -> float:
    """Return f(base | added) - f(base) using exactly two evaluations."""
    return f.eval(as_subset(base) | as_subset(added)) - f.eval(as_subset(base))


def contract_function(
    f: SubmodularOracle, subset: Subset, value: float | None = None
) -> SubmodularOracle:
    """Return the oracle of f_Q; contracting by the empty set returns f itself.

    ``value`` is f(Q) when the caller already knows it, which saves a query.
    """
    subset = as_subset(subset)
    if not subset:
        return f
    if isinstance(f, ContractedFunction):
        total = None if value is None else f.base_value + value
        return ContractedFunction(f.base, f.contracted | subset, total)
    return ContractedFunction(f, subset, value)


def _check_weights(weights: Sequence[float], label: str) -> None:
    if any(w < 0 for w in weights):
        raise SpecError(f"{label} weights must be non-negative")
    if not all(np.isfinite(weights)):
        raise SpecError(f"{label} weights must be finite")


def build_function(spec: FunctionSpec) -> SubmodularOracle:
    """Construct the oracle described by ``spec``."""
    match spec:
        case CoverageSpec(weights=weights, covers=covers):
            _check_weights(weights, "coverage")
            for element, items in enumerate(covers):
                if any(item < 0 or item >= len(weights) for item in items):
                    raise SpecError(
                        f"coverage element {element} covers an unknown item"
                    )
            return CoverageFunction(weights, covers)
        case CutSpec(vertices=vertices, edges=edges):
            if vertices < 0:
                raise SpecError("cut vertex count must be non-negative")
            _check_weights([w for _, _, w in edges], "cut")
            for u, v, _ in edges:
                if not (0 <= u < vertices and 0 <= v < vertices):
                    raise SpecError(f"cut edge ({u}, {v}) has an endpoint out of range")
            return CutFunction(vertices, edges)
        case ModularSpec(weights=weights):
            _check_weights(weights, "modular")
            return ModularFunction(weights)
        case ConcaveOfModularSpec(weights=weights, exponent=exponent):
            _check_weights(weights, "concave_of_modular")
            if not 0.0 < exponent <= 1.0:
                raise SpecError("concave_of_modular exponent must lie in (0, 1]")
            return ConcaveOfModularFunction(weights, exponent)
    raise SpecError(f"unknown function kind: {getattr(spec, 'kind', spec)!r}")
