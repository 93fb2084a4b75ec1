"""Sequential greedy, brute-force optimum, swap rounding and scaled sampling."""

from collections.abc import Iterable
from dataclasses import dataclass

from loguru import logger

from blockgreedy.engine import Batch, BatchEngine, bernoulli_subset, derive_rng
from blockgreedy.errors import IncompatibleAlgorithmError, SpecError
from blockgreedy.oracles import (
    EXACT_LIMIT,
    IndependenceOracle,
    MatroidOracle,
    Subset,
    SubmodularOracle,
    as_subset,
)

from .fractional import FractionalSolution

TIE_TOLERANCE = 1e-12


def sequential_greedy(
    matroid: IndependenceOracle,
    f: SubmodularOracle,
    engine: BatchEngine | None = None,
) -> Subset:
    """Add the feasible element of largest margin until none is positive.

    Each step costs two rounds: the independence tests of every candidate,
    then the values of the feasible ones. Ties go to the smallest id.
    """
    engine = engine or BatchEngine()
    chosen: Subset = frozenset()
    value = 0.0
    candidates = sorted(matroid.ground)
    while candidates:
        batch = Batch()
        slots = [batch.independent(matroid, chosen | {e}) for e in candidates]
        answers = engine.run(batch, phase="greedy_feasible")
        # chosen only grows, so a dependent extension never turns feasible again
        candidates = [
            e for e, slot in zip(candidates, slots, strict=True) if answers[slot]
        ]
        if not candidates:
            break
        batch = Batch()
        slots = [batch.value(f, chosen | {e}) for e in candidates]
        answers = engine.run(batch, phase="greedy_values")
        best, best_value = candidates[0], float(answers[slots[0]])
        for e, slot in zip(candidates[1:], slots[1:], strict=True):
            if float(answers[slot]) > best_value:
                best, best_value = e, float(answers[slot])
        if best_value - value <= 0:
            break
        chosen = chosen | {best}
        value = best_value
        candidates.remove(best)
    logger.debug(
        "sequential greedy picked {} elements, value {:.6g}", len(chosen), value
    )
    return chosen


@dataclass(frozen=True)
class OptCertificate:
    """Exhaustive optimum over the independent sets."""

    best_set: Subset
    opt_value: float
    enumerated_count: int


def _better(
    value: float, subset: tuple[int, ...], best: tuple[float, tuple[int, ...]]
) -> bool:
    best_value, incumbent = best
    if value > best_value + TIE_TOLERANCE:
        return True
    if value < best_value - TIE_TOLERANCE:
        return False
    return (len(subset), subset) < (len(incumbent), incumbent)


def brute_force_opt(matroid: IndependenceOracle, f: SubmodularOracle) -> OptCertificate:
    """Depth-first enumeration of the independent sets, pruning dependent branches.

    ``enumerated_count`` counts every set examined, the empty set and rejected
    (dependent) sets included. Ties go to the smaller set, then to the
    lexicographically smaller one.
    """
    ground = sorted(matroid.ground)
    if len(ground) > EXACT_LIMIT:
        raise SpecError(f"brute force needs n <= {EXACT_LIMIT}, got {len(ground)}")
    best: tuple[float, tuple[int, ...]] = (f.eval(frozenset()), ())
    examined = 1
    stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
    while stack:
        prefix, start = stack.pop()
        # push in reverse so that the lexicographically first branch pops first
        for position in range(len(ground) - 1, start - 1, -1):
            subset = (*prefix, ground[position])
            examined += 1
            if not matroid.is_independent(frozenset(subset)):
                continue
            value = f.eval(frozenset(subset))
            if _better(value, subset, best):
                best = (value, subset)
            stack.append((subset, position + 1))
    return OptCertificate(frozenset(best[1]), best[0], examined)


def _validate_parts(matroid: MatroidOracle, x: FractionalSolution) -> None:
    total = 0.0
    for subset, weight in x.parts:
        if not subset <= matroid.ground:
            raise SpecError("fractional part leaves the ground set")
        if not matroid.is_independent(subset):
            raise SpecError(f"fractional part {sorted(subset)} is not independent")
        total += weight
    if total > 1.0 + 1e-9:
        raise SpecError(f"fractional part weights sum to {total:.6g} > 1")


def swap_round(
    matroid: IndependenceOracle,
    x: FractionalSolution,
    seed: int,
) -> Subset:
    """Merge a convex combination of independent sets into one independent set.

    Parts are padded with virtual elements to bases of the truncated direct sum
    of M with a free matroid, and an all-virtual part carries any weight
    missing from 1. The bases are merged left to right by random symmetric
    exchanges; the virtual elements are dropped from the result.
    """
    if not isinstance(matroid, MatroidOracle):
        raise IncompatibleAlgorithmError("swap rounding needs a single matroid")
    _validate_parts(matroid, x)
    r = matroid.rank_of_matroid
    virtual_start = max(matroid.ground, default=-1) + 1
    virtual = list(range(virtual_start, virtual_start + r))

    def pad(subset: Subset) -> set[int]:
        return set(subset) | set(virtual[: r - len(subset)])

    def real(subset: set[int]) -> Subset:
        return frozenset(e for e in subset if e < virtual_start)

    residual_weight = 1.0 - x.total_weight
    bases = [(pad(s), w) for s, w in x.parts if w > 0]
    if residual_weight > 1e-12:
        bases.append((set(virtual), residual_weight))
    if not bases:
        return frozenset()

    rng = derive_rng(seed)
    current, current_weight = bases[0]
    for other, other_weight in bases[1:]:
        while current != other:
            i = min(current - other)
            swaps = [
                j
                for j in sorted(other - current)
                if matroid.is_independent(real(current - {i} | {j}))
                and matroid.is_independent(real(other - {j} | {i}))
            ]
            j = swaps[int(rng.integers(len(swaps)))]
            keep = current_weight / (current_weight + other_weight)
            if rng.random() < keep:
                other = other - {j} | {i}
            else:
                current = current - {i} | {j}
        current_weight += other_weight
    return real(current)


def sample_scaled(subset: Iterable[int], q: float, seed: int) -> Subset:
    """Keep each element independently with probability q."""
    if not 0.0 <= q <= 1.0:
        raise SpecError(f"sampling probability must lie in [0, 1], got {q}")
    return bernoulli_subset(derive_rng(seed), sorted(as_subset(subset)), q)
