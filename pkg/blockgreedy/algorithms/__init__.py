"""Estimators, greedy sampling, block greedy, amplification and baselines."""

from .amplification import (
    BetaScaledResult,
    MatchoidConstants,
    MonotoneAmplification,
    NonnegativeAmplification,
    UnionSample,
    amplify_monotone,
    amplify_nonnegative,
    beta_scaled_solve,
    default_ell,
    matchoid_constants,
    sample_union,
)
from .baselines import (
    OptCertificate,
    brute_force_opt,
    sample_scaled,
    sequential_greedy,
    swap_round,
)
from .block_greedy import (
    BlockCall,
    BlockGreedyResult,
    ThresholdCheck,
    block_greedy,
    default_lambda_min,
    expected_call_bound,
    threshold_schedule,
)
from .estimators import (
    SamplingRate,
    chernoff_samples,
    estimate_low_margin_fraction,
    estimate_span_fraction,
    find_delta,
    sample_budget,
)
from .fractional import FractionalSolution
from .greedy_sample import (
    GreedyBlock,
    ResidualReport,
    greedy_sample,
    margin_band,
    prune,
    residual,
)

__all__ = [
    "BetaScaledResult",
    "MatchoidConstants",
    "MonotoneAmplification",
    "NonnegativeAmplification",
    "UnionSample",
    "amplify_monotone",
    "amplify_nonnegative",
    "beta_scaled_solve",
    "default_ell",
    "matchoid_constants",
    "sample_union",
    "OptCertificate",
    "brute_force_opt",
    "sample_scaled",
    "sequential_greedy",
    "swap_round",
    "BlockCall",
    "BlockGreedyResult",
    "ThresholdCheck",
    "block_greedy",
    "default_lambda_min",
    "expected_call_bound",
    "threshold_schedule",
    "SamplingRate",
    "chernoff_samples",
    "estimate_low_margin_fraction",
    "estimate_span_fraction",
    "find_delta",
    "sample_budget",
    "FractionalSolution",
    "GreedyBlock",
    "ResidualReport",
    "greedy_sample",
    "margin_band",
    "prune",
    "residual",
]
