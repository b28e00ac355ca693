"""Influence, sensitivity, and exact block sensitivity.

All probability-flavored quantities are returned as exact dyadic rationals
(Fraction with a 2^n denominator) so that identities against the spectral
route can be asserted with equality, not tolerance.

Block sensitivity is exact: candidate blocks are cut down to the ones with
no sensitive single-removal subset, then packed by branch and bound. Every
truly minimal sensitive block passes that local test and every candidate is
still sensitive, so the packing optimum over the candidates equals the
optimum over all sensitive blocks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._util import hamming_weight
from .errors import CapacityError, InputError
from .truthtable import TruthTable

BS_EXACT_MAX_VARS = 16  # the 2^16-input scan is a documented multi-minute job


class MaxSensitivity(NamedTuple):
    value: int
    witness: int  # input index achieving the max


@dataclass(frozen=True)
class BlockSensitivityResult:
    value: int
    exact: bool  # False only when a time budget expired; value is then a lower bound
    witness_input: int
    witness_blocks: tuple[int, ...]  # disjoint variable masks, each flips f at the witness
    inputs_scanned: int


@dataclass(frozen=True)
class MeasureReport:
    n: int
    influences: tuple[Fraction, ...]
    rho: Fraction
    avg_sensitivity: Fraction
    max_sensitivity: int
    max_sensitivity_witness: int
    block_sensitivity: BlockSensitivityResult | None
    bs_skipped_reason: str | None


def influence(t: TruthTable, i: int) -> Fraction:
    """Probability over uniform x that flipping bit i changes f(x)."""
    if not 0 <= i < t.n:
        raise InputError(f"variable index {i} out of range for n={t.n}")
    view = t.bits().reshape(-1, 2, 1 << i)
    pairs = int(np.count_nonzero(view[:, 0, :] != view[:, 1, :]))
    return Fraction(2 * pairs, t.size)


def influences(t: TruthTable) -> tuple[Fraction, ...]:
    return tuple(influence(t, i) for i in range(t.n))


def avg_influence(t: TruthTable) -> Fraction:
    return sum(influences(t), Fraction(0)) / t.n


def avg_sensitivity(t: TruthTable) -> Fraction:
    """Average over x of the sensitivity at x; equals avg_influence * n."""
    return sum(influences(t), Fraction(0))


def sensitivity_profile(t: TruthTable) -> np.ndarray:
    """int64 array: entry x is the number of sensitive coordinates at x."""
    bits = t.bits()
    sens = np.zeros(t.size, dtype=np.int64)
    for i in range(t.n):
        view = bits.reshape(-1, 2, 1 << i)
        diff = view[:, 0, :] != view[:, 1, :]
        sview = sens.reshape(-1, 2, 1 << i)
        sview[:, 0, :] += diff
        sview[:, 1, :] += diff
    return sens


def sensitivity_at(t: TruthTable, x) -> int:
    idx = t.index_of(x)
    fx = t.bit_at(idx)
    return sum(1 for i in range(t.n) if t.bit_at(idx ^ (1 << i)) != fx)


def max_sensitivity(t: TruthTable) -> MaxSensitivity:
    profile = sensitivity_profile(t)
    witness = int(np.argmax(profile))
    return MaxSensitivity(int(profile[witness]), witness)


def sensitive_coordinate_masks(t: TruthTable) -> np.ndarray:
    """int64 array: entry x is the bitmask of coordinates sensitive at x."""
    bits = t.bits()
    masks = np.zeros(t.size, dtype=np.int64)
    for i in range(t.n):
        view = bits.reshape(-1, 2, 1 << i)
        diff = (view[:, 0, :] != view[:, 1, :]).astype(np.int64) << i
        mview = masks.reshape(-1, 2, 1 << i)
        mview[:, 0, :] |= diff
        mview[:, 1, :] |= diff
    return masks


def _spread_table(free_coords: tuple[int, ...]) -> np.ndarray:
    """All subsets of the given coordinates as masks, indexed compactly."""
    m = len(free_coords)
    sub = np.arange(1 << m, dtype=np.int64)
    spread = np.zeros(1 << m, dtype=np.int64)
    for b, coord in enumerate(free_coords):
        spread |= ((sub >> b) & 1) << coord
    return spread


def _subcube_candidates(
    bits: np.ndarray, x: int, free_coords: tuple[int, ...], spread: np.ndarray
) -> list[int]:
    """Minimal-style sensitive blocks at x inside the insensitive coordinates.

    A truly minimal sensitive block of size >= 2 cannot contain a sensitive
    coordinate (that singleton would be a sensitive proper subset), so only
    subsets of the insensitive coordinates need enumeration. Blocks kept here
    are sensitive with no sensitive single-removal subset: a superset of the
    truly minimal ones, so the packing optimum is unchanged.
    """
    m = len(free_coords)
    if m == 0:
        return []
    sens = bits[spread ^ x] != bits[x]
    if not bool(sens.any()):
        return []
    keep = sens.copy()
    for b in range(m):
        kview = keep.reshape(-1, 2, 1 << b)
        sview = sens.reshape(-1, 2, 1 << b)
        kview[:, 1, :] &= ~sview[:, 0, :]
    survivors = np.nonzero(keep)[0]
    return [int(spread[j]) for j in survivors if j != 0]


def _size_bound(blocks: list[int], n: int) -> int:
    """Max packing size if only the block SIZES constrained anything."""
    sizes = sorted(hamming_weight(b) for b in blocks)
    free = n
    fit = 0
    for sz in sizes:
        if sz > free:
            break
        free -= sz
        fit += 1
    return fit


def _pack_blocks(blocks: list[int], n: int) -> tuple[int, tuple[int, ...]]:
    """Exact maximum disjoint packing by branch and bound.

    Blocks are ordered by size; the bound at a node is the current count plus
    the largest m such that the m smallest remaining block sizes fit in the
    free variables.
    """
    if not blocks:
        return 0, ()
    order = sorted(blocks, key=lambda b: (hamming_weight(b), b))
    sizes = [hamming_weight(b) for b in order]
    count = len(order)
    # suffix_sizes[i] = sorted sizes of order[i:], for the capacity bound
    best_count = 0
    best_sel: tuple[int, ...] = ()
    suffix_sorted: list[list[int]] = [None] * (count + 1)  # type: ignore[list-item]
    suffix_sorted[count] = []
    for i in range(count - 1, -1, -1):
        merged = suffix_sorted[i + 1] + [sizes[i]]
        merged.sort()
        suffix_sorted[i] = merged

    def capacity_bound(i: int, free: int) -> int:
        fit = 0
        for sz in suffix_sorted[i]:
            if sz > free:
                break
            free -= sz
            fit += 1
        return fit

    chosen: list[int] = []

    def descend(i: int, used: int, free: int) -> None:
        nonlocal best_count, best_sel
        if len(chosen) > best_count:
            best_count = len(chosen)
            best_sel = tuple(chosen)
        if i >= count or len(chosen) + capacity_bound(i, free) <= best_count:
            return
        for j in range(i, count):
            b = order[j]
            if b & used:
                continue
            if len(chosen) + 1 + capacity_bound(j + 1, free - sizes[j]) <= best_count:
                continue
            chosen.append(b)
            descend(j + 1, used | b, free - sizes[j])
            chosen.pop()

    descend(0, 0, n)
    return best_count, best_sel


def _singleton_masks(coord_mask: int, n: int) -> tuple[int, ...]:
    return tuple(1 << i for i in range(n) if (coord_mask >> i) & 1)


def block_sensitivity_at(t: TruthTable, x) -> tuple[int, tuple[int, ...]]:
    """Exact max number of disjoint sensitive blocks at x, with a witness family.

    Every sensitive coordinate joins the packing as a singleton; the branch
    and bound only has to pack the multi-coordinate blocks living in the
    remaining coordinates.
    """
    if t.n > BS_EXACT_MAX_VARS:
        raise CapacityError(f"exact block sensitivity is capped at n={BS_EXACT_MAX_VARS}")
    idx = t.index_of(x)
    bits = t.bits()
    coord_mask = int(sensitive_coordinate_masks(t)[idx])
    singles = _singleton_masks(coord_mask, t.n)
    free = tuple(i for i in range(t.n) if not (coord_mask >> i) & 1)
    blocks = _subcube_candidates(bits, idx, free, _spread_table(free))
    packed, sel = _pack_blocks(blocks, len(free))
    return len(singles) + packed, singles + sel


def block_sensitivity(t: TruthTable, budget_seconds: float | None = None) -> BlockSensitivityResult:
    """Exact block sensitivity: max over all inputs of block_sensitivity_at.

    With a budget, the scan stops early and the result is flagged as a lower
    bound (exact=False) rather than silently reported as exact. n=16 takes
    minutes; larger n is refused.
    """
    if t.n > BS_EXACT_MAX_VARS:
        raise CapacityError(f"exact block sensitivity is capped at n={BS_EXACT_MAX_VARS}")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    bits = t.bits()
    n = t.n
    coord_masks = sensitive_coordinate_masks(t)
    spread_cache: dict[int, tuple[tuple[int, ...], np.ndarray]] = {}
    best = -1
    best_x = 0
    best_blocks: tuple[int, ...] = ()
    scanned = 0
    # scan inputs with many sensitive coordinates first; they set a strong
    # incumbent early and the ceiling S + floor(free/2) prunes the rest
    order = np.argsort(-np.bitwise_count(coord_masks.astype(np.uint64)), kind="stable")
    for x in order.tolist():
        scanned += 1
        coord_mask = int(coord_masks[x])
        s_count = hamming_weight(coord_mask)
        free_count = n - s_count
        if s_count + free_count // 2 <= best:
            continue
        cached = spread_cache.get(coord_mask)
        if cached is None:
            free = tuple(i for i in range(n) if not (coord_mask >> i) & 1)
            cached = (free, _spread_table(free))
            spread_cache[coord_mask] = cached
        free, spread = cached
        blocks = _subcube_candidates(bits, x, free, spread)
        if s_count + _size_bound(blocks, free_count) <= best:
            continue
        packed, sel = _pack_blocks(blocks, free_count)
        value = s_count + packed
        if value > best:
            best, best_x = value, x
            best_blocks = _singleton_masks(coord_mask, n) + sel
        if deadline is not None and time.monotonic() > deadline and scanned < t.size:
            return BlockSensitivityResult(max(best, 0), False, best_x, best_blocks, scanned)
    return BlockSensitivityResult(max(best, 0), True, best_x, best_blocks, scanned)


def measure_report(
    t: TruthTable,
    include_block_sensitivity: bool = True,
    bs_budget_seconds: float | None = None,
) -> MeasureReport:
    infl = influences(t)
    rho = sum(infl, Fraction(0)) / t.n
    ms = max_sensitivity(t)
    bs = None
    skipped = None
    if not include_block_sensitivity:
        skipped = "disabled"
    elif t.n > BS_EXACT_MAX_VARS:
        skipped = f"n={t.n} exceeds exact cap {BS_EXACT_MAX_VARS}"
    else:
        bs = block_sensitivity(t, bs_budget_seconds)
    return MeasureReport(
        n=t.n,
        influences=infl,
        rho=rho,
        avg_sensitivity=rho * t.n,
        max_sensitivity=ms.value,
        max_sensitivity_witness=ms.witness,
        block_sensitivity=bs,
        bs_skipped_reason=skipped,
    )


__all__ = [
    "BS_EXACT_MAX_VARS",
    "BlockSensitivityResult",
    "MaxSensitivity",
    "MeasureReport",
    "avg_influence",
    "avg_sensitivity",
    "block_sensitivity",
    "block_sensitivity_at",
    "influence",
    "influences",
    "max_sensitivity",
    "measure_report",
    "sensitivity_at",
    "sensitivity_profile",
    "sensitive_coordinate_masks",
]
