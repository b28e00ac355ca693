"""Small shared helpers: popcounts, masks, worker-count lookup."""

from __future__ import annotations

import os

import numpy as np

MAX_VARS = 20  # full-domain scans stay under 2^20 table entries


def hamming_weight(mask: int) -> int:
    return bin(mask).count("1")


def popcounts(n: int) -> np.ndarray:
    """Vector of popcount(s) for every mask s < 2^n (int64)."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def mask_bits(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def worker_count() -> int:
    """Worker cap from INFLUENCE_LAB_THREADS; 0 or unset means auto."""
    raw = os.environ.get("INFLUENCE_LAB_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        return os.cpu_count() or 1
    return value
