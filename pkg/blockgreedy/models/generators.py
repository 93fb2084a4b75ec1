"""Parameters of the built-in instance generators."""

from typing import Annotated, Literal

from pydantic import BaseModel, Field


class FatPathParams(BaseModel):
    """A path of ``legs`` edges, each repeated k times; unit modular weights."""

    kind: Literal["fat_path"] = "fat_path"
    legs: int = Field(..., ge=1)
    k: int = Field(..., ge=1)


class FatTailParams(BaseModel):
    """First leg with k parallel edges, then n - k single-edge legs."""

    kind: Literal["fat_tail"] = "fat_tail"
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=1)


class RandomCoverageParams(BaseModel):
    kind: Literal["random_coverage"] = "random_coverage"
    n: int = Field(..., ge=1)
    universe: int = Field(..., ge=1)
    density: float = Field(..., ge=0, le=1)
    rank: int | None = Field(None, ge=1)


class RandomPartitionParams(BaseModel):
    kind: Literal["random_partition"] = "random_partition"
    n: int = Field(..., ge=1)
    blocks: int = Field(..., ge=1)
    capacity: int = Field(1, ge=0)


class RandomCutParams(BaseModel):
    kind: Literal["random_cut"] = "random_cut"
    n: int = Field(..., ge=2)
    edge_prob: float = Field(..., ge=0, le=1)
    rank: int | None = Field(None, ge=1)


class BipartiteMatchoidParams(BaseModel):
    """Edges of a random bipartite graph under two degree-one partition matroids."""

    kind: Literal["bipartite_matchoid"] = "bipartite_matchoid"
    a: int = Field(..., ge=1)
    b: int = Field(..., ge=1)
    edges: int = Field(..., ge=1)


GeneratorSpec = Annotated[
    FatPathParams
    | FatTailParams
    | RandomCoverageParams
    | RandomPartitionParams
    | RandomCutParams
    | BipartiteMatchoidParams,
    Field(discriminator="kind"),
]
