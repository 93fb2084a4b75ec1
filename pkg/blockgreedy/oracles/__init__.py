"""Set-function, matroid and matchoid oracles."""

from .base import GroundSet, IndependenceOracle, Subset, as_subset
from .functions import (
    ConcaveOfModularFunction,
    ContractedFunction,
    CoverageFunction,
    CutFunction,
    ModularFunction,
    SubmodularOracle,
    build_function,
    contract_function,
    marginal,
)
from .matchoid import MatchoidOracle, ScopedMatroid, build_matchoid
from .matroids import (
    ContractedMatroid,
    GraphicMatroid,
    MatroidOracle,
    PartitionMatroid,
    RestrictedMatroid,
    UniformMatroid,
    build_matroid,
    contract,
    is_independent,
    rank,
    restrict,
    span,
)
from .multilinear import (
    EXACT_LIMIT,
    AuxBeta,
    AuxMonotone,
    AuxNonnegative,
    FractionalPoint,
    SampleBudget,
    aux_beta,
    aux_monotone,
    aux_nonnegative,
    multilinear_estimate,
    multilinear_exact,
)

__all__ = [
    "GroundSet",
    "IndependenceOracle",
    "Subset",
    "as_subset",
    "ConcaveOfModularFunction",
    "ContractedFunction",
    "CoverageFunction",
    "CutFunction",
    "ModularFunction",
    "SubmodularOracle",
    "build_function",
    "contract_function",
    "marginal",
    "MatchoidOracle",
    "ScopedMatroid",
    "build_matchoid",
    "ContractedMatroid",
    "GraphicMatroid",
    "MatroidOracle",
    "PartitionMatroid",
    "RestrictedMatroid",
    "UniformMatroid",
    "build_matroid",
    "contract",
    "is_independent",
    "rank",
    "restrict",
    "span",
    "EXACT_LIMIT",
    "AuxBeta",
    "AuxMonotone",
    "AuxNonnegative",
    "FractionalPoint",
    "SampleBudget",
    "aux_beta",
    "aux_monotone",
    "aux_nonnegative",
    "multilinear_estimate",
    "multilinear_exact",
]
