"""Ground sets and the abstract oracle interfaces."""

import threading
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

Subset = frozenset[int]


def as_subset(elements: Iterable[int]) -> Subset:
    """Normalize any iterable of element ids into a frozenset."""
    if isinstance(elements, frozenset):
        return elements
    return frozenset(int(e) for e in elements)


@dataclass(frozen=True)
class GroundSet:
    """Dense element ids 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("ground set size must be non-negative")

    @property
    def elements(self) -> range:
        return range(self.n)

    def as_subset(self) -> Subset:
        return frozenset(self.elements)


class CallCounter:
    """Thread-safe query counter shared by all oracles."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._calls = 0

    @property
    def calls(self) -> int:
        return self._calls

    def _count(self, amount: int = 1) -> None:
        with self._lock:
            self._calls += amount


class IndependenceOracle(CallCounter, ABC):
    """Span and independence oracle over a (possibly partial) ground set.

    Implemented by single matroids, their contraction/restriction views and
    by matchoids. Element ids are always the global ids of the instance.
    """

    p: int = 1

    def __init__(self, ground: Iterable[int]):
        super().__init__()
        self.ground: Subset = as_subset(ground)

    @property
    def n(self) -> int:
        return len(self.ground)

    @abstractmethod
    def spans(self, subset: Subset, element: int) -> bool:
        """Return whether ``element`` lies in ``span(subset)``."""

    @abstractmethod
    def is_independent(self, subset: Subset) -> bool:
        """Return whether ``subset`` is independent."""

    def span(self, subset: Subset) -> Subset:
        """Return every ground element spanned by ``subset``."""
        return frozenset(e for e in self.ground if self.spans(subset, e))

    @abstractmethod
    def contract(self, subset: Subset) -> "IndependenceOracle":
        """Return the contraction by ``subset``."""

    @abstractmethod
    def restrict(self, subset: Subset) -> "IndependenceOracle":
        """Return the restriction to ``subset``."""

    @cached_property
    def rank_of_matroid(self) -> int:
        """Size of a largest independent set (greedy proxy unless overridden)."""
        chosen: set[int] = set()
        for e in sorted(self.ground):
            if self.is_independent(frozenset(chosen | {e})):
                chosen.add(e)
        return len(chosen)
