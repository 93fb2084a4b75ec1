"""Pydantic specifications for functions, matroids, instances and algorithm options."""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field


class CoverageSpec(BaseModel):
    """Weighted coverage: element i covers the universe items in ``covers[i]``."""

    kind: Literal["coverage"] = "coverage"
    weights: list[float]
    covers: list[list[int]]

    @property
    def n(self) -> int:
        return len(self.covers)


class CutSpec(BaseModel):
    """Undirected weighted cut; elements are vertices."""

    kind: Literal["cut"] = "cut"
    vertices: int
    edges: list[tuple[int, int, float]]

    @property
    def n(self) -> int:
        return self.vertices


class ModularSpec(BaseModel):
    """Additive function with non-negative weights."""

    kind: Literal["modular"] = "modular"
    weights: list[float]

    @property
    def n(self) -> int:
        return len(self.weights)


class ConcaveOfModularSpec(BaseModel):
    """``(sum of weights in S) ** exponent`` with exponent in (0, 1]."""

    kind: Literal["concave_of_modular"] = "concave_of_modular"
    weights: list[float]
    exponent: float

    @property
    def n(self) -> int:
        return len(self.weights)


FunctionSpec = Annotated[
    CoverageSpec | CutSpec | ModularSpec | ConcaveOfModularSpec,
    Field(discriminator="kind"),
]


class UniformSpec(BaseModel):
    """Uniform matroid U(n, k)."""

    kind: Literal["uniform"] = "uniform"
    n: int
    k: int


class PartitionSpec(BaseModel):
    """Partition matroid; blocks must partition 0..n-1."""

    kind: Literal["partition"] = "partition"
    blocks: list[list[int]]
    capacities: list[int]

    @property
    def n(self) -> int:
        return sum(len(block) for block in self.blocks)


class GraphicSpec(BaseModel):
    """Graphic matroid of a multigraph; element i is ``edges[i]``."""

    kind: Literal["graphic"] = "graphic"
    vertices: int
    edges: list[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.edges)


SingleMatroidSpec = Annotated[
    UniformSpec | PartitionSpec | GraphicSpec,
    Field(discriminator="kind"),
]


class MatchoidPart(BaseModel):
    """One matroid of a matchoid; local element i is global element ``scope[i]``."""

    matroid: SingleMatroidSpec
    scope: list[int]


class MatchoidSpec(BaseModel):
    """p-matchoid built from matroids on sub-ground-sets."""

    kind: Literal["matchoid"] = "matchoid"
    n: int
    parts: list[MatchoidPart]


MatroidSpec = Annotated[
    UniformSpec | PartitionSpec | GraphicSpec | MatchoidSpec,
    Field(discriminator="kind"),
]


class InstanceSpec(BaseModel):
    """A constraint together with an objective over the same ground set."""

    name: str = "instance"
    matroid: MatroidSpec
    function: FunctionSpec


class EstimatorConfig(BaseModel):
    """Constants of the sampling estimators and the step-size search.

    ``sample_cap`` and ``max_grid_points`` bound the cost of one step-size
    search; set both to None for the uncapped Chernoff counts and the full
    grid. ``empty_redraws`` bounds how often an empty block is drawn again
    at the same delta; 0 draws S ~ delta N exactly once.
    """

    model_config = ConfigDict(frozen=True)

    chernoff_c: float = Field(2.0, gt=0)
    chernoff_d: float = Field(1.0 / 3.0, gt=0)
    fail_poly_exp: int = Field(3, gt=0)
    grid_constant: float = Field(0.25, gt=0)
    margin_band: float = Field(0.125, gt=0)
    sample_cap: int | None = Field(256, ge=1)
    max_grid_points: int | None = Field(16, ge=2)
    empty_redraws: int = Field(1024, ge=0)
    max_block_calls: int = Field(10_000, ge=1)


class AmplifyConfig(BaseModel):
    """Options of the amplification wrappers.

    ``ell`` defaults to ceil(4 / eps). ``samples`` is the Monte Carlo count m of
    the auxiliary function; left unset, m is calibrated from a greedy estimate
    of OPT and capped by ``max_samples``. ``exact`` replaces sampling with exact
    enumeration (n <= 20).
    """

    model_config = ConfigDict(frozen=True)

    ell: int | None = Field(None, ge=1)
    alpha: float | None = Field(None, gt=0, le=1)
    samples: int | None = Field(None, ge=1)
    max_samples: int | None = Field(None, ge=1)
    exact: bool = False
