"""Closed-form query and degree lower bounds, plus their brute-force oracles.

Conventions shared by every function here:
  - eps is the allowed error probability of the algorithm or polynomial.
  - Bounds that go nonpositive are clamped to 0 and flagged vacuous instead
    of raising, since large eps legitimately drains them.
  - k is the number of independently chosen coordinates XORed into the random
    flip; it must be odd (the k-th-root step of the derivation needs it).

flip_prob_spectral and flip_prob_bruteforce are two routes to the same
probability Pr[f(x) != f(x ^ e_{i_1} ^ .. ^ e_{i_k})]; the verify suite and
tests hold them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import CapacityError, InputError
from .fourier import FourierSpectrum
from .truthtable import TruthTable

BRUTE_FORCE_CAP = 10**8


class BoundValue(NamedTuple):
    value: float
    vacuous: bool


def _require_odd(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise InputError(f"k must be a positive odd integer, got {k}")


def _require_eps(eps: float, upper: float = 1.0) -> None:
    if not 0 <= eps < upper:
        raise InputError(f"error probability must be in [0, {upper}), got {eps}")


def correlation_decay(spec: FourierSpectrum, k: int) -> Fraction:
    """sum_s coeff_s^2 * (1 - 2|s|/n)^k, exactly."""
    _require_odd(k)
    n = spec.n
    profile = spec.weight_profile()
    num = sum(a * (n - 2 * j) ** k for j, a in enumerate(profile))
    return Fraction(num, (spec.denominator**2) * n**k)


def flip_prob_spectral(spec: FourierSpectrum, k: int) -> Fraction:
    """Pr[f(x) != f(x + e_{i_1} + .. + e_{i_k})] from the spectrum, exactly.

    At k=1 this equals the average influence.
    """
    return (1 - correlation_decay(spec, k)) / 2


def flip_prob_bruteforce(t: TruthTable, k: int) -> Fraction:
    """Same probability by enumerating every x and every coordinate tuple."""
    _require_odd(k)
    n = t.n
    if n**k * t.size > BRUTE_FORCE_CAP:
        raise CapacityError(f"brute force needs {n ** k * t.size} evaluations, cap is {BRUTE_FORCE_CAP}")
    bits = t.bits()
    idx = np.arange(t.size)
    # flips_for[m] = #{x : f(x) != f(x ^ m)}, still a full x enumeration per mask
    flips_for = {}
    total = 0
    for tup in product(range(n), repeat=k):
        m = 0
        for i in tup:
            m ^= 1 << i
        if m not in flips_for:
            flips_for[m] = int(np.count_nonzero(bits != bits[idx ^ m]))
        total += flips_for[m]
    return Fraction(total, t.size * n**k)


def query_lb_influence(rho: float, n: int, eps: float) -> BoundValue:
    """Queries >= (1 - 2 sqrt(eps))/2 * rho * n; vacuous once eps >= 1/4."""
    _require_eps(eps)
    raw = (1 - 2 * math.sqrt(eps)) / 2 * float(rho) * n
    return BoundValue(max(0.0, raw), eps >= 0.25 or raw < 0)


def query_lb_influence_k(spec: FourierSpectrum, eps: float, k: int) -> BoundValue:
    """The odd-k strengthening; at k=1 it reduces exactly to query_lb_influence."""
    _require_eps(eps)
    _require_odd(k)
    se = math.sqrt(eps)
    decay = float(correlation_decay(spec, k))
    radicand = (1 + 2 * se) / 2 + (1 - 2 * se) / 2 * decay
    if radicand < 0:  # not reachable for eps < 1/4; guard the root anyway
        radicand = 0.0
    raw = 0.5 * (1 - radicand ** (1 / k)) * spec.n
    return BoundValue(max(0.0, raw), raw < 0)


def query_lb_influence_best(spec: FourierSpectrum, eps: float, k_max: int = 15):
    """Scan odd k <= k_max, return (best_k, BoundValue); ties pick the smallest k."""
    if k_max < 1:
        raise InputError("k_max must be at least 1")
    best_k = 1
    best = query_lb_influence_k(spec, eps, 1)
    for k in range(3, k_max + 1, 2):
        cand = query_lb_influence_k(spec, eps, k)
        if cand.value > best.value:
            best_k, best = k, cand
    return best_k, best


def query_lb_block_sensitivity(bs: float) -> float:
    """Queries >= sqrt(BS)/4 at error probability 1/3."""
    if bs < 0:
        raise InputError("block sensitivity must be nonnegative")
    return math.sqrt(bs) / 4


def query_lb_degree(d: float) -> float:
    """Queries >= d/2 where d is the approximating-polynomial degree."""
    if d < 0:
        raise InputError("degree must be nonnegative")
    return d / 2


def degree_lb_block_sensitivity(bs: float) -> float:
    """Approximating degree >= sqrt(BS/6)."""
    if bs < 0:
        raise InputError("block sensitivity must be nonnegative")
    return math.sqrt(bs / 6)


def degree_lb_influence(rho: float, n: int, eps: float) -> float:
    """Approximating degree >= 1/4 (1 - 3 eps/(1+eps))^2 * rho * n, eps < 1/2."""
    _require_eps(eps, upper=0.5)
    return 0.25 * (1 - 3 * eps / (1 + eps)) ** 2 * float(rho) * n


def displacement_lower_bound(spec: FourierSpectrum, eps: float, k: int) -> float:
    """Lower bound on the mean squared state displacement under a random k-flip."""
    if eps < 0 or eps > 1:
        raise InputError(f"error probability must be in [0, 1], got {eps}")
    return max(0.0, (2 - 4 * math.sqrt(eps)) * float(flip_prob_spectral(spec, k)))


def displacement_upper_bound(t_queries: int, n: int, k: int, stated_form: bool = False) -> float:
    """Upper bound 2 - 2(1 - 2T/n)^k on the same displacement.

    stated_form=True computes 2 - 2(1 - T/n)^k instead. The two differ by a
    factor of 2 on T/n; only the default is consistent with the k-th-root
    bound, so the alternative exists purely for auditability.
    """
    _require_odd(k)
    if not 0 <= t_queries <= n:
        raise InputError(f"query count must be in 0..{n}, got {t_queries}")
    lam = t_queries / n
    base = (1 - lam) if stated_form else (1 - 2 * lam)
    return 2 - 2 * base**k


@dataclass(frozen=True)
class BoundReport:
    eps: float
    query_influence: BoundValue
    query_influence_best_k: int
    query_influence_best: BoundValue
    query_block_sensitivity: float | None
    query_degree: float | None
    degree_influence: float
    degree_block_sensitivity: float | None


def bound_report(
    spec: FourierSpectrum,
    rho: Fraction,
    eps: float,
    k_max: int = 15,
    block_sensitivity: int | None = None,
    approx_degree: int | None = None,
) -> BoundReport:
    best_k, best = query_lb_influence_best(spec, eps, k_max)
    return BoundReport(
        eps=eps,
        query_influence=query_lb_influence(float(rho), spec.n, eps),
        query_influence_best_k=best_k,
        query_influence_best=best,
        query_block_sensitivity=(
            None if block_sensitivity is None else query_lb_block_sensitivity(block_sensitivity)
        ),
        query_degree=None if approx_degree is None else query_lb_degree(approx_degree),
        degree_influence=degree_lb_influence(float(rho), spec.n, eps) if eps < 0.5 else 0.0,
        degree_block_sensitivity=(
            None if block_sensitivity is None else degree_lb_block_sensitivity(block_sensitivity)
        ),
    )


__all__ = [
    "BoundReport",
    "BoundValue",
    "bound_report",
    "correlation_decay",
    "degree_lb_block_sensitivity",
    "degree_lb_influence",
    "displacement_lower_bound",
    "displacement_upper_bound",
    "flip_prob_bruteforce",
    "flip_prob_spectral",
    "query_lb_block_sensitivity",
    "query_lb_degree",
    "query_lb_influence",
    "query_lb_influence_best",
    "query_lb_influence_k",
]
