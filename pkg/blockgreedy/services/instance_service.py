"""Instance generators and instance/config file IO."""

import math
from typing import Any

import aiofiles
import networkx as nx
from loguru import logger
from pydantic import TypeAdapter

from blockgreedy.engine import derive_rng
from blockgreedy.errors import SpecError
from blockgreedy.models.generators import (
    BipartiteMatchoidParams,
    FatPathParams,
    FatTailParams,
    GeneratorSpec,
    RandomCoverageParams,
    RandomCutParams,
    RandomPartitionParams,
)
from blockgreedy.models.reports import ExperimentConfig
from blockgreedy.models.specs import (
    ConcaveOfModularSpec,
    CoverageSpec,
    CutSpec,
    GraphicSpec,
    InstanceSpec,
    MatchoidPart,
    MatchoidSpec,
    ModularSpec,
    PartitionSpec,
    UniformSpec,
)
from blockgreedy.oracles import (
    IndependenceOracle,
    SubmodularOracle,
    build_function,
    build_matroid,
)

generator_adapter: TypeAdapter[GeneratorSpec] = TypeAdapter(GeneratorSpec)

WEIGHT_DIGITS = 6


def parse_generator(kind: str, params: dict[str, Any]) -> GeneratorSpec:
    """Validate generator parameters given by name."""
    return generator_adapter.validate_python({**params, "kind": kind})


def _weights(values: Any) -> list[float]:
    return [round(float(v), WEIGHT_DIGITS) for v in values]


def _fat_path(params: FatPathParams) -> InstanceSpec:
    edges = [(leg, leg + 1) for leg in range(params.legs) for _ in range(params.k)]
    return InstanceSpec(
        name=f"fat_path_{params.legs}_{params.k}",
        matroid=GraphicSpec(vertices=params.legs + 1, edges=edges),
        function=ModularSpec(weights=[1.0] * len(edges)),
    )


def _fat_tail(params: FatTailParams) -> InstanceSpec:
    if params.k > params.n:
        raise SpecError(f"fat_tail needs k <= n, got k={params.k} n={params.n}")
    tail = params.n - params.k
    edges = [(0, 1)] * params.k + [(leg, leg + 1) for leg in range(1, tail + 1)]
    return InstanceSpec(
        name=f"fat_tail_{params.n}_{params.k}",
        matroid=GraphicSpec(vertices=tail + 2, edges=edges),
        function=ModularSpec(weights=[1.0] * len(edges)),
    )


def _random_coverage(params: RandomCoverageParams, seed: int) -> InstanceSpec:
    rng = derive_rng(seed)
    hits = rng.random((params.n, params.universe)) < params.density
    covers = [[int(i) for i in row.nonzero()[0]] for row in hits]
    rank = params.rank if params.rank is not None else round(math.sqrt(params.n))
    rank = max(1, rank)
    if rank > params.n:
        raise SpecError(f"rank {rank} exceeds n={params.n}")
    return InstanceSpec(
        name=f"random_coverage_{params.n}_{params.universe}",
        matroid=UniformSpec(n=params.n, k=rank),
        function=CoverageSpec(weights=[1.0] * params.universe, covers=covers),
    )


def _random_partition(params: RandomPartitionParams, seed: int) -> InstanceSpec:
    rng = derive_rng(seed)
    owner = rng.integers(0, params.blocks, size=params.n)
    blocks = [
        [e for e in range(params.n) if owner[e] == b] for b in range(params.blocks)
    ]
    capacities = [params.capacity] * params.blocks
    return InstanceSpec(
        name=f"random_partition_{params.n}_{params.blocks}",
        matroid=PartitionSpec(blocks=blocks, capacities=capacities),
        function=ConcaveOfModularSpec(
            weights=_weights(rng.uniform(0.1, 1.0, size=params.n)), exponent=0.5
        ),
    )


def _random_cut(params: RandomCutParams, seed: int) -> InstanceSpec:
    graph = nx.gnp_random_graph(params.n, params.edge_prob, seed=seed)
    edges = sorted((min(u, v), max(u, v), 1.0) for u, v in graph.edges())
    rank = params.rank if params.rank is not None else max(1, params.n // 2)
    if rank > params.n:
        raise SpecError(f"rank {rank} exceeds n={params.n}")
    return InstanceSpec(
        name=f"random_cut_{params.n}",
        matroid=UniformSpec(n=params.n, k=rank),
        function=CutSpec(vertices=params.n, edges=edges),
    )


def _bipartite_matchoid(params: BipartiteMatchoidParams, seed: int) -> InstanceSpec:
    if params.edges > params.a * params.b:
        raise SpecError(
            f"a bipartite graph on {params.a}+{params.b} vertices has at most "
            f"{params.a * params.b} edges"
        )
    graph = nx.bipartite.gnmk_random_graph(params.a, params.b, params.edges, seed=seed)
    pairs = sorted((min(u, v), max(u, v) - params.a) for u, v in graph.edges())
    left = [[e for e, (u, _) in enumerate(pairs) if u == i] for i in range(params.a)]
    right = [[e for e, (_, w) in enumerate(pairs) if w == j] for j in range(params.b)]
    scope = list(range(len(pairs)))
    parts = [
        MatchoidPart(
            matroid=PartitionSpec(blocks=left, capacities=[1] * params.a), scope=scope
        ),
        MatchoidPart(
            matroid=PartitionSpec(blocks=right, capacities=[1] * params.b), scope=scope
        ),
    ]
    weights = _weights(derive_rng(seed).uniform(0.1, 1.0, size=len(pairs)))
    return InstanceSpec(
        name=f"bipartite_matchoid_{params.a}_{params.b}_{params.edges}",
        matroid=MatchoidSpec(n=len(pairs), parts=parts),
        function=ModularSpec(weights=weights),
    )


def generate_instance_spec(spec: GeneratorSpec, seed: int = 0) -> InstanceSpec:
    """Deterministic instance description for ``spec`` and ``seed``."""
    match spec:
        case FatPathParams():
            instance = _fat_path(spec)
        case FatTailParams():
            instance = _fat_tail(spec)
        case RandomCoverageParams():
            instance = _random_coverage(spec, seed)
        case RandomPartitionParams():
            instance = _random_partition(spec, seed)
        case RandomCutParams():
            instance = _random_cut(spec, seed)
        case BipartiteMatchoidParams():
            instance = _bipartite_matchoid(spec, seed)
    logger.debug("generated instance {} (seed {})", instance.name, seed)
    return instance


def build_instance(
    instance: InstanceSpec,
) -> tuple[IndependenceOracle, SubmodularOracle]:
    """Oracles for an instance; the constraint must live inside f's ground set."""
    matroid = build_matroid(instance.matroid)
    f = build_function(instance.function)
    if any(e >= f.n for e in matroid.ground):
        raise SpecError(
            f"constraint has elements beyond the {f.n} elements of the function"
        )
    return matroid, f


def generate_instance(
    spec: GeneratorSpec, seed: int = 0
) -> tuple[IndependenceOracle, SubmodularOracle]:
    """Generate an instance and build its oracles."""
    return build_instance(generate_instance_spec(spec, seed))


async def save_instance(instance: InstanceSpec, path: str) -> None:
    async with aiofiles.open(path, mode="w", encoding="utf-8") as file:
        await file.write(instance.model_dump_json(indent=2))


async def load_instance(path: str) -> InstanceSpec:
    async with aiofiles.open(path, mode="r", encoding="utf-8") as file:
        content = await file.read()
    return InstanceSpec.model_validate_json(content)


async def load_experiment_config(path: str) -> ExperimentConfig:
    """Read a config file; a missing file is a spec error."""
    try:
        async with aiofiles.open(path, mode="r", encoding="utf-8") as file:
            content = await file.read()
    except FileNotFoundError as e:
        raise SpecError(f"config file {path} not found") from e
    return ExperimentConfig.model_validate_json(content)
