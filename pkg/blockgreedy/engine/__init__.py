"""Batch execution, round metering and deterministic seeding."""

from .meter import (
    AdaptivityMeter,
    Batch,
    BatchEngine,
    MeterSnapshot,
    record_batch,
)
from .seeding import bernoulli_subset, derive_rng, derive_seed

__all__ = [
    "AdaptivityMeter",
    "Batch",
    "BatchEngine",
    "MeterSnapshot",
    "record_batch",
    "bernoulli_subset",
    "derive_rng",
    "derive_seed",
]
