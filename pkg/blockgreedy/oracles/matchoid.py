"""p-matchoids: independence systems assembled from matroids on sub-ground-sets."""

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from blockgreedy.errors import SpecError
from blockgreedy.models.specs import SingleMatroidSpec

from .base import IndependenceOracle, Subset, as_subset
from .matroids import MatroidOracle, build_matroid


@dataclass(frozen=True)
class ScopedMatroid:
    """A part of a matchoid: local id i of ``matroid`` is global id ``scope[i]``."""

    matroid: MatroidOracle
    scope: tuple[int, ...]

    @property
    def local_of(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.scope)}

    def to_local(self, subset: Iterable[int], local_of: dict[int, int]) -> Subset:
        return frozenset(local_of[e] for e in subset if e in local_of)

    def to_global(self, subset: Iterable[int]) -> Subset:
        return frozenset(self.scope[i] for i in subset)


class MatchoidOracle(IndependenceOracle):
    """Independent iff every part sees an independent set.

    ``span`` is the union of the part spans. Elements outside every scope are
    free: never spanned by other elements and always independent to add.
    """

    def __init__(self, parts: Sequence[ScopedMatroid], ground: Iterable[int]):
        super().__init__(ground)
        if not parts:
            raise SpecError("a matchoid needs at least one part")
        self.parts = list(parts)
        self._indices = [part.local_of for part in self.parts]
        membership = Counter(e for part in self.parts for e in part.scope)
        self.p = max((membership[e] for e in self.ground), default=0) or 1

    def _local(self, subset: Subset) -> list[Subset]:
        return [
            part.to_local(subset, index)
            for part, index in zip(self.parts, self._indices, strict=True)
        ]

    def is_independent(self, subset: Subset) -> bool:
        self._count()
        return all(
            part.matroid.is_independent(local)
            for part, local in zip(self.parts, self._local(subset), strict=True)
        )

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        if element in subset:
            return True
        for part, index in zip(self.parts, self._indices, strict=True):
            if element in index and part.matroid.spans(
                part.to_local(subset, index), index[element]
            ):
                return True
        return False

    def span(self, subset: Subset) -> Subset:
        self._count()
        spanned: set[int] = set(subset & self.ground)
        for part, local in zip(self.parts, self._local(subset), strict=True):
            spanned |= part.to_global(part.matroid.span(local))
        return frozenset(spanned) & self.ground

    def contract(self, subset: Subset) -> "MatchoidOracle":
        subset = as_subset(subset)
        ground = self.ground - self.span(subset)
        parts = [
            ScopedMatroid(part.matroid.contract(local), part.scope)
            for part, local in zip(self.parts, self._local(subset), strict=True)
        ]
        return MatchoidOracle(parts, ground)

    def restrict(self, subset: Subset) -> "MatchoidOracle":
        subset = as_subset(subset) & self.ground
        parts = [
            ScopedMatroid(part.matroid.restrict(local), part.scope)
            for part, local in zip(self.parts, self._local(subset), strict=True)
        ]
        return MatchoidOracle(parts, subset)

    def max_cardinality(self) -> int:
        """Greedy lower-bound proxy for the largest independent set size."""
        return self.rank_of_matroid


def build_matchoid(
    parts: Sequence[tuple[SingleMatroidSpec, Sequence[int]]], n: int | None = None
) -> MatchoidOracle:
    """Assemble a matchoid from ``(matroid spec, scope)`` pairs."""
    if not parts:
        raise SpecError("a matchoid needs at least one part")
    scoped: list[ScopedMatroid] = []
    for position, (spec, scope) in enumerate(parts):
        if len(set(scope)) != len(scope):
            raise SpecError(f"matchoid part {position} repeats an element in its scope")
        matroid = build_matroid(spec)
        if not isinstance(matroid, MatroidOracle):
            raise SpecError(f"matchoid part {position} must be a single matroid")
        if matroid.n != len(scope):
            raise SpecError(
                f"matchoid part {position} has {matroid.n} elements "
                f"but a scope of {len(scope)}"
            )
        scoped.append(ScopedMatroid(matroid, tuple(int(e) for e in scope)))
    largest = max((e for part in scoped for e in part.scope), default=-1)
    size = largest + 1 if n is None else n
    if any(e < 0 or e >= size for part in scoped for e in part.scope):
        raise SpecError("matchoid scope element out of range")
    return MatchoidOracle(scoped, range(size))
