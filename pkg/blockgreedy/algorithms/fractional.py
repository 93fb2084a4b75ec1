"""Convex combinations of independent sets."""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from blockgreedy.engine import BatchEngine
from blockgreedy.errors import SpecError
from blockgreedy.oracles import (
    FractionalPoint,
    SampleBudget,
    Subset,
    SubmodularOracle,
    as_subset,
    multilinear_estimate,
    multilinear_exact,
)


@dataclass(frozen=True)
class FractionalSolution:
    """Weighted independent sets; x is the weighted sum of their indicators."""

    n: int
    parts: tuple[tuple[Subset, float], ...] = ()

    def __post_init__(self) -> None:
        if any(weight < 0 for _, weight in self.parts):
            raise SpecError("fractional part weights must be non-negative")
        if any(e < 0 or e >= self.n for subset, _ in self.parts for e in subset):
            raise SpecError("fractional part element out of range")

    @classmethod
    def from_sets(
        cls, n: int, sets: Iterable[Iterable[int]], weight: float
    ) -> "FractionalSolution":
        return cls(n, tuple((as_subset(s), weight) for s in sets))

    @property
    def total_weight(self) -> float:
        return float(sum(weight for _, weight in self.parts))

    @property
    def x(self) -> FractionalPoint:
        values = np.zeros(self.n)
        for subset, weight in self.parts:
            values[sorted(subset)] += weight
        return FractionalPoint(values)

    def value_exact(self, f: SubmodularOracle) -> float:
        return multilinear_exact(f, self.x)

    def value_estimate(
        self,
        f: SubmodularOracle,
        budget: SampleBudget,
        seed: int,
        engine: BatchEngine | None = None,
    ) -> float:
        return multilinear_estimate(f, self.x, budget, seed, engine)
