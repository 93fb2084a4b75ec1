"""Matroid oracles: uniform, partition, graphic and their contraction views."""

from abc import abstractmethod
from collections import Counter
from collections.abc import Sequence
from functools import cached_property

from networkx.utils import UnionFind

from blockgreedy.errors import SpecError
from blockgreedy.models.specs import (
    GraphicSpec,
    MatchoidSpec,
    MatroidSpec,
    PartitionSpec,
    UniformSpec,
)

from .base import IndependenceOracle, Subset, as_subset


class MatroidOracle(IndependenceOracle):
    """A single matroid with a rank oracle; span and independence derive from rank."""

    p = 1

    @abstractmethod
    def rank(self, subset: Subset) -> int:
        """Size of a maximal independent subset of ``subset``."""

    def is_independent(self, subset: Subset) -> bool:
        return self.rank(subset) == len(subset)

    def spans(self, subset: Subset, element: int) -> bool:
        if element in subset:
            return True
        return self.rank(subset | {element}) == self.rank(subset)

    @cached_property
    def rank_of_matroid(self) -> int:
        return self.rank(self.ground)

    def contract(self, subset: Subset) -> "MatroidOracle":
        return ContractedMatroid(self, as_subset(subset))

    def restrict(self, subset: Subset) -> "MatroidOracle":
        return RestrictedMatroid(self, as_subset(subset))


class UniformMatroid(MatroidOracle):
    """Every set of at most k elements is independent."""

    def __init__(self, n: int, k: int):
        super().__init__(range(n))
        self.k = k

    def rank(self, subset: Subset) -> int:
        self._count()
        return min(len(subset), self.k)

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        return element in subset or len(subset) >= self.k

    def span(self, subset: Subset) -> Subset:
        self._count()
        return self.ground if len(subset) >= self.k else subset & self.ground


class PartitionMatroid(MatroidOracle):
    """At most ``capacities[b]`` elements from each block b."""

    def __init__(self, blocks: Sequence[Sequence[int]], capacities: Sequence[int]):
        self.block_of = {e: b for b, block in enumerate(blocks) for e in block}
        super().__init__(self.block_of)
        self.capacities = list(capacities)

    def _load(self, subset: Subset) -> Counter[int]:
        return Counter(self.block_of[e] for e in subset)

    def rank(self, subset: Subset) -> int:
        self._count()
        load = self._load(subset)
        return sum(min(count, self.capacities[b]) for b, count in load.items())

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        if element in subset:
            return True
        block = self.block_of[element]
        used = sum(1 for e in subset if self.block_of[e] == block)
        return used >= self.capacities[block]

    def span(self, subset: Subset) -> Subset:
        self._count()
        load = self._load(subset)
        full = {b for b, count in load.items() if count >= self.capacities[b]}
        full |= {b for b, cap in enumerate(self.capacities) if cap == 0}
        return subset | frozenset(e for e in self.ground if self.block_of[e] in full)


class GraphicMatroid(MatroidOracle):
    """Forests of a multigraph; element i is edge ``edges[i]``.

    Each query rebuilds a union-find over the edges of its argument.
    """

    def __init__(self, vertices: int, edges: Sequence[tuple[int, int]]):
        super().__init__(range(len(edges)))
        self.vertices = vertices
        self.edges = [(int(u), int(v)) for u, v in edges]

    def _forest(self, subset: Subset) -> tuple[UnionFind, int]:
        components = UnionFind()
        merged = 0
        for e in sorted(subset):
            u, v = self.edges[e]
            if components[u] != components[v]:
                components.union(u, v)
                merged += 1
        return components, merged

    def rank(self, subset: Subset) -> int:
        self._count()
        return self._forest(subset)[1]

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        if element in subset:
            return True
        components, _ = self._forest(subset)
        u, v = self.edges[element]
        return bool(components[u] == components[v])

    def span(self, subset: Subset) -> Subset:
        self._count()
        components, _ = self._forest(subset)
        closed = frozenset(
            e
            for e in self.ground
            if components[self.edges[e][0]] == components[self.edges[e][1]]
        )
        return subset | closed


class ContractedMatroid(MatroidOracle):
    """M / Q on the ground set N minus span(Q), with rank_Q(T) = r(Q | T) - r(Q)."""

    def __init__(self, base: MatroidOracle, contracted: Subset):
        super().__init__(base.ground - base.span(contracted))
        self.base = base
        self.contracted = contracted
        self.base_rank = base.rank(contracted)

    def rank(self, subset: Subset) -> int:
        self._count()
        return self.base.rank(self.contracted | (subset & self.ground)) - self.base_rank

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        return self.base.spans(self.contracted | subset, element)

    def span(self, subset: Subset) -> Subset:
        self._count()
        return self.base.span(self.contracted | subset) & self.ground

    def contract(self, subset: Subset) -> MatroidOracle:
        return ContractedMatroid(self.base, self.contracted | as_subset(subset))


class RestrictedMatroid(MatroidOracle):
    """M | S: same independent sets, ground set cut down to S."""

    def __init__(self, base: MatroidOracle, subset: Subset):
        super().__init__(subset & base.ground)
        self.base = base

    def rank(self, subset: Subset) -> int:
        self._count()
        return self.base.rank(subset & self.ground)

    def spans(self, subset: Subset, element: int) -> bool:
        self._count()
        return self.base.spans(subset & self.ground, element)

    def span(self, subset: Subset) -> Subset:
        self._count()
        return self.base.span(subset & self.ground) & self.ground

    def restrict(self, subset: Subset) -> MatroidOracle:
        return RestrictedMatroid(self.base, as_subset(subset) & self.ground)


def build_matroid(spec: MatroidSpec) -> IndependenceOracle:
    """Construct the oracle described by ``spec`` (matchoid specs included)."""
    match spec:
        case UniformSpec(n=n, k=k):
            if n < 0 or k < 0:
                raise SpecError("uniform matroid sizes must be non-negative")
            if k > n:
                raise SpecError(f"uniform matroid rank k={k} exceeds n={n}")
            return UniformMatroid(n, k)
        case PartitionSpec(blocks=blocks, capacities=capacities):
            if len(blocks) != len(capacities):
                raise SpecError("partition matroid needs one capacity per block")
            if any(cap < 0 for cap in capacities):
                raise SpecError("partition capacities must be non-negative")
            members = sorted(e for block in blocks for e in block)
            if members != list(range(len(members))):
                raise SpecError("partition blocks must partition 0..n-1")
            return PartitionMatroid(blocks, capacities)
        case GraphicSpec(vertices=vertices, edges=edges):
            if vertices < 0:
                raise SpecError("graphic matroid vertex count must be non-negative")
            for u, v in edges:
                if not (0 <= u < vertices and 0 <= v < vertices):
                    raise SpecError(f"edge ({u}, {v}) has an endpoint out of range")
            return GraphicMatroid(vertices, edges)
        case MatchoidSpec():
            from .matchoid import build_matchoid

            parts = [(part.matroid, part.scope) for part in spec.parts]
            return build_matchoid(parts, spec.n)
    raise SpecError(f"unknown matroid kind: {getattr(spec, 'kind', spec)!r}")


def rank(matroid: MatroidOracle, subset: Subset) -> int:
    """Rank of ``subset`` in a single matroid."""
    return matroid.rank(as_subset(subset))


def span(matroid: IndependenceOracle, subset: Subset) -> Subset:
    """Span of ``subset``; for matchoids, the union of the part spans."""
    return matroid.span(as_subset(subset))


def is_independent(matroid: IndependenceOracle, subset: Subset) -> bool:
    """Independence test."""
    return matroid.is_independent(as_subset(subset))


def contract(matroid: IndependenceOracle, subset: Subset) -> IndependenceOracle:
    """Contraction view M / Q."""
    return matroid.contract(as_subset(subset))


def restrict(matroid: IndependenceOracle, subset: Subset) -> IndependenceOracle:
    """Restriction view M | S."""
    return matroid.restrict(as_subset(subset))
