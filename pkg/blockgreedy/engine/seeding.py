"""Deterministic random streams keyed by a seed and a tuple of integer keys.

Every random draw in the library goes through ``derive_rng`` so that a run is
reproducible from its top-level seed, independently of execution order.
"""

from collections.abc import Iterable

import numpy as np


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Return a generator for the stream identified by ``(seed, *keys)``."""
    return np.random.default_rng(np.random.SeedSequence([seed, *keys]))


def derive_seed(seed: int, *keys: int) -> int:
    """Return a fresh non-negative integer seed for the stream ``(seed, *keys)``."""
    state = np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint32)
    return int(state[0])


def bernoulli_subset(
    rng: np.random.Generator, elements: Iterable[int], prob: float
) -> frozenset[int]:
    """Keep each element independently with probability ``prob``."""
    items = np.fromiter(elements, dtype=np.int64)
    if items.size == 0 or prob <= 0.0:
        return frozenset()
    if prob >= 1.0:
        return frozenset(int(e) for e in items)
    keep = rng.random(items.size) < prob
    return frozenset(int(e) for e in items[keep])
