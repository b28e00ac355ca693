"""Query-model simulator tracked in the Fourier picture.

A T-query black-box algorithm, run against every oracle x at once, is a map
phi(x) living in the register space. Written over the character basis it is
phi(x) = sum_s coeff_s * (-1)^(s.x) where each coeff_s is a vector, and only
masks of weight <= T appear. This module evolves that family {coeff_s}
directly:

  - oracle-independent unitaries act on every coefficient vector alike;
  - a query conjugates the answer coordinate into the Hadamard basis, leaves
    the answer-plus component where it is, and moves the answer-minus
    component at index i from mask s to mask s XOR e_i (phase kickback is
    mask transport in this picture).

Register layout: an index register with one basis state per oracle bit, a
2-dimensional answer register, and a work register of dimension W, ordered
index-major then answer then work. The computational-basis query gate is
|i, a, w> -> |i, a XOR x_i, w>.

A direct per-oracle simulator (simulate_direct) provides the independent
route used by the verify suite: reconstructing the Fourier state at x must
match it for every oracle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numpy as np

from ._util import hamming_weight, worker_count
from .errors import CapacityError, ConsistencyError, InputError
from .truthtable import TruthTable

NORM_TOL = 1e-9
_PRUNE_SQ = 1e-24  # squared-norm floor; drops exact-zero transport residue
_SQRT2 = math.sqrt(2.0)

SERIAL_READ_MAX_VARS = 6  # work register holds all n bits read so far


@dataclass(frozen=True)
class RegisterLayout:
    n_index: int
    work_dim: int = 1

    def __post_init__(self):
        if self.n_index < 1 or self.work_dim < 1:
            raise InputError("layout needs at least one index state and work dimension 1")

    @property
    def dim(self) -> int:
        return self.n_index * 2 * self.work_dim

    def basis_index(self, i: int, a: int, w: int) -> int:
        if not (0 <= i < self.n_index and a in (0, 1) and 0 <= w < self.work_dim):
            raise InputError(f"basis label ({i},{a},{w}) outside layout")
        return (i * 2 + a) * self.work_dim + w


@dataclass(frozen=True)
class Unitary:
    matrix: np.ndarray
    validated: bool = field(default=False, compare=False)

    def require_unitary(self) -> None:
        if self.validated:
            return
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError("unitary must be a square matrix")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if defect > NORM_TOL:
            raise InputError(f"matrix is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "validated", True)


class Query:
    """Marker step: one oracle call."""

    def __repr__(self):
        return "Query()"


QUERY = Query()


@dataclass(frozen=True)
class Algorithm:
    layout: RegisterLayout
    steps: tuple
    accept: frozenset  # basis indices whose measurement means output 1
    queries: int

    def __post_init__(self):
        n_queries = sum(1 for s in self.steps if isinstance(s, Query))
        if n_queries != self.queries:
            raise InputError(f"declared {self.queries} queries, steps contain {n_queries}")
        for s in self.steps:
            if isinstance(s, Unitary):
                if s.matrix.shape != (self.layout.dim, self.layout.dim):
                    raise InputError("unitary dimension does not match layout")
                s.require_unitary()
            elif not isinstance(s, Query):
                raise InputError(f"unknown step {s!r}")


class FourierState:
    """Sparse mask -> coefficient-vector map with a query tally."""

    def __init__(self, layout: RegisterLayout):
        self.layout = layout
        self.amps: dict[int, np.ndarray] = {}
        self.queries_applied = 0
        self.support_history: list[int] = []

    def norm_sq(self) -> float:
        return float(sum(np.vdot(v, v).real for v in self.amps.values()))

    def support(self) -> frozenset:
        return frozenset(self.amps)

    def max_weight(self) -> int:
        return max((hamming_weight(s) for s in self.amps), default=0)


def initial_state(layout: RegisterLayout) -> FourierState:
    state = FourierState(layout)
    v = np.zeros(layout.dim, dtype=np.complex128)
    v[0] = 1.0
    state.amps[0] = v
    return state


def apply_unitary(state: FourierState, u: Unitary | np.ndarray) -> FourierState:
    """Coefficient-wise action; the support set never changes."""
    if isinstance(u, np.ndarray):
        u = Unitary(u)
    if u.matrix.shape != (state.layout.dim, state.layout.dim):
        raise InputError("unitary dimension does not match layout")
    u.require_unitary()
    m = u.matrix
    for s in state.amps:
        state.amps[s] = m @ state.amps[s]
    return state


def apply_query(state: FourierState) -> FourierState:
    """One oracle call: mask transport of the answer-minus components."""
    layout = state.layout
    n, w = layout.n_index, layout.work_dim
    split: dict[int, np.ndarray] = {}  # mask -> (n,2,w) in the answer Hadamard basis

    def slot(mask: int) -> np.ndarray:
        arr = split.get(mask)
        if arr is None:
            arr = np.zeros((n, 2, w), dtype=np.complex128)
            split[mask] = arr
        return arr

    for s, v in state.amps.items():
        vr = v.reshape(n, 2, w)
        plus = (vr[:, 0, :] + vr[:, 1, :]) / _SQRT2
        minus = (vr[:, 0, :] - vr[:, 1, :]) / _SQRT2
        slot(s)[:, 0, :] += plus
        for i in range(n):
            row = minus[i]
            if np.any(row):
                slot(s ^ (1 << i))[i, 1, :] += row

    new_amps: dict[int, np.ndarray] = {}
    for s, arr in split.items():
        out = np.empty((n, 2, w), dtype=np.complex128)
        out[:, 0, :] = (arr[:, 0, :] + arr[:, 1, :]) / _SQRT2
        out[:, 1, :] = (arr[:, 0, :] - arr[:, 1, :]) / _SQRT2
        flat = out.reshape(layout.dim)
        if np.vdot(flat, flat).real > _PRUNE_SQ:
            new_amps[s] = flat
    state.amps = new_amps
    state.queries_applied += 1
    return state


def reconstruct(state: FourierState, x: int) -> np.ndarray:
    """The register-space state for oracle x: sum_s (-1)^(s.x) coeff_s."""
    total = np.zeros(state.layout.dim, dtype=np.complex128)
    for s, v in state.amps.items():
        if bin(s & x).count("1") & 1:
            total -= v
        else:
            total += v
    return total


def _check_invariants(state: FourierState) -> None:
    if abs(state.norm_sq() - 1.0) > NORM_TOL:
        raise ConsistencyError(f"state norm drifted to {state.norm_sq()}")
    if state.max_weight() > state.queries_applied:
        raise ConsistencyError(
            f"support weight {state.max_weight()} exceeds query count {state.queries_applied}"
        )


def run(alg: Algorithm, check: bool = True) -> FourierState:
    """Execute all steps; support-weight and norm invariants hold after each."""
    state = initial_state(alg.layout)
    state.support_history.append(len(state.amps))
    for step in alg.steps:
        if isinstance(step, Query):
            apply_query(state)
        else:
            apply_unitary(state, step)
        if check:
            _check_invariants(state)
        state.support_history.append(len(state.amps))
    return state


def simulate_direct(alg: Algorithm, x: int) -> np.ndarray:
    """Per-oracle reference simulation in the plain computational basis."""
    layout = alg.layout
    v = np.zeros(layout.dim, dtype=np.complex128)
    v[0] = 1.0
    perm = _query_permutation(layout, x)
    for step in alg.steps:
        if isinstance(step, Query):
            v = v[perm]
        else:
            v = step.matrix @ v
    return v


def _query_permutation(layout: RegisterLayout, x: int) -> np.ndarray:
    # target[b] = source index mapped onto b; the gate is an involution
    idx = np.arange(layout.dim)
    w = layout.work_dim
    i = idx // (2 * w)
    a = (idx // w) % 2
    rest = idx % w
    xi = (x >> i) & 1
    return ((i * 2 + (a ^ xi)) * w + rest).astype(np.int64)


class ErrorProfile(NamedTuple):
    per_oracle: np.ndarray  # error probability against f, indexed by oracle
    worst: float
    queries: int


def acceptance_probabilities(state: FourierState, accept: frozenset) -> np.ndarray:
    """Pr[measured basis index is accepting] for every oracle, in order."""
    n = state.layout.n_index
    mask = np.zeros(state.layout.dim, dtype=bool)
    mask[list(accept)] = True
    oracles = range(1 << n)

    def prob(x: int) -> float:
        v = reconstruct(state, x)
        return float(np.sum(np.abs(v[mask]) ** 2))

    workers = worker_count()
    if workers > 1 and (1 << n) >= 64:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            probs = list(pool.map(prob, oracles))
    else:
        probs = [prob(x) for x in oracles]
    return np.array(probs)


def profile_state(state: FourierState, accept: frozenset, table: TruthTable) -> ErrorProfile:
    if table.n != state.layout.n_index:
        raise InputError(
            f"table has {table.n} variables, layout indexes {state.layout.n_index} oracle bits"
        )
    p1 = acceptance_probabilities(state, accept)
    f = table.bits().astype(np.float64)
    errors = np.where(f == 1.0, 1.0 - p1, p1)
    return ErrorProfile(errors, float(np.max(errors)), state.queries_applied)


def error_profile(alg: Algorithm, table: TruthTable) -> ErrorProfile:
    """Worst-case and per-oracle error of the algorithm at computing the table."""
    return profile_state(run(alg), alg.accept, table)


def displacement_statistic(state: FourierState, k: int) -> float:
    """Mean squared displacement under a random k-coordinate flip.

    Equals sum over masks of (2 - 2(1 - 2|s|/n)^k) * ||coeff_s||^2, which the
    verify suite checks against direct pair enumeration.
    """
    if k < 1 or k % 2 == 0:
        raise InputError(f"k must be a positive odd integer, got {k}")
    n = state.layout.n_index
    total = 0.0
    for s, v in state.amps.items():
        w = 2.0 - 2.0 * (1.0 - 2.0 * hamming_weight(s) / n) ** k
        total += w * float(np.vdot(v, v).real)
    return total


def displacement_direct(state: FourierState, k: int) -> float:
    """Same statistic by enumerating every oracle and coordinate tuple."""
    if k < 1 or k % 2 == 0:
        raise InputError(f"k must be a positive odd integer, got {k}")
    n = state.layout.n_index
    size = 1 << n
    if size * n**k > 10**7:
        raise CapacityError("direct displacement enumeration is for small n and k")
    vecs = [reconstruct(state, x) for x in range(size)]
    total = 0.0
    for tup in product(range(n), repeat=k):
        m = 0
        for i in tup:
            m ^= 1 << i
        for x in range(size):
            d = vecs[x] - vecs[x ^ m]
            total += float(np.vdot(d, d).real)
    return total / (size * n**k)


class GapReport(NamedTuple):
    min_gap: float | None  # None when no differing pair exists
    threshold: float
    pairs_checked: int
    violated: bool


def gap_check(state: FourierState, table: TruthTable, eps: float, neighbors_only: bool = False) -> GapReport:
    """Scan pairs with f(x) != f(y): ||phi(x) - phi(y)||^2 must be >= 2 - 4 sqrt(eps)."""
    n = state.layout.n_index
    if table.n != n:
        raise InputError("table size does not match layout")
    if not neighbors_only and n > 5:
        raise CapacityError("full pair scan is capped at n=5; use neighbors_only")
    size = 1 << n
    vecs = [reconstruct(state, x) for x in range(size)]
    bits = table.bits()
    threshold = 2 - 4 * math.sqrt(max(0.0, eps))
    min_gap = None
    checked = 0
    if neighbors_only:
        pairs = ((x, x ^ (1 << i)) for x in range(size) for i in range(n) if x < x ^ (1 << i))
    else:
        pairs = ((x, y) for x in range(size) for y in range(x + 1, size))
    for x, y in pairs:
        if bits[x] == bits[y]:
            continue
        d = vecs[x] - vecs[y]
        gap = float(np.vdot(d, d).real)
        checked += 1
        if min_gap is None or gap < min_gap:
            min_gap = gap
    violated = min_gap is not None and min_gap < threshold - NORM_TOL
    return GapReport(min_gap, threshold, checked, violated)


# ---------------------------------------------------------------------------
# builtin algorithms


def _tensor3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(a, b), c)


def _index_pair_hadamard(n_index: int, lo: int) -> np.ndarray:
    """2D Hadamard on index states lo, lo+1; identity elsewhere."""
    m = np.eye(n_index)
    r = 1 / _SQRT2
    m[lo, lo] = r
    m[lo, lo + 1] = r
    m[lo + 1, lo] = r
    m[lo + 1, lo + 1] = -r
    return m

_H2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / _SQRT2
_X2 = np.array([[0.0, 1.0], [1.0, 0.0]])
_MINUS_PREP = _H2 @ _X2  # |0> -> (|0> - |1>)/sqrt(2)


@lru_cache(maxsize=8)
def _serial_read_steps(n: int) -> tuple:
    """Read bits 0..n-1 into the work register, one query per bit."""
    layout = RegisterLayout(n, 1 << n)
    w = layout.work_dim
    steps: list = []
    for t in range(n):
        if t > 0:
            move = np.eye(n)
            move[[t - 1, t], :] = move[[t, t - 1], :]
            steps.append(Unitary(_tensor3(move, np.eye(2), np.eye(w))))
        steps.append(QUERY)
        # swap the answer bit with work bit t
        swap = np.zeros((2 * w, 2 * w))
        for a in range(2):
            for wv in range(w):
                wt = (wv >> t) & 1
                new_w = (wv & ~(1 << t)) | (a << t)
                swap[wt * w + new_w, a * w + wv] = 1.0
        steps.append(Unitary(np.kron(np.eye(n), swap)))
    return tuple(steps)


def serial_read(table: TruthTable) -> Algorithm:
    """n queries, zero error for any table: read everything, then decide.

    Acceptance is determined by evaluating the table on the work register.
    """
    n = table.n
    if n > SERIAL_READ_MAX_VARS:
        raise CapacityError(f"serial_read is capped at n={SERIAL_READ_MAX_VARS}")
    layout = RegisterLayout(n, 1 << n)
    accept = frozenset(
        layout.basis_index(i, a, wv)
        for i in range(n)
        for a in range(2)
        for wv in range(layout.work_dim)
        if table.bit_at(wv) == 1
    )
    return Algorithm(layout, _serial_read_steps(n), accept, n)


@lru_cache(maxsize=8)
def _deutsch_parity_steps(n: int) -> tuple:
    """Parity of all n bits in n/2 queries by querying index pairs in superposition.

    The running branch pair (|2j> + (-1)^c |2j+1>)/sqrt(2) carries the parity
    read so far in its relative sign; each query adds one even-indexed and one
    odd-indexed bit, the final in-pair interference turns the sign into a
    basis index, and a permutation copies that into the work bit.
    """
    layout = RegisterLayout(n, 2)
    pairs = n // 2
    steps: list = []
    prep = _tensor3(_index_pair_hadamard(n, 0), _MINUS_PREP, np.eye(2))
    steps.append(Unitary(prep))
    for j in range(pairs):
        steps.append(QUERY)
        if j + 1 < pairs:
            relabel = np.eye(n)
            lo, nxt = 2 * j, 2 * j + 2
            relabel[[lo, nxt], :] = relabel[[nxt, lo], :]
            relabel[[lo + 1, nxt + 1], :] = relabel[[nxt + 1, lo + 1], :]
            steps.append(Unitary(_tensor3(relabel, np.eye(2), np.eye(2))))
    interfere = _index_pair_hadamard(n, n - 2)
    writeback = np.zeros((layout.dim, layout.dim))
    for i in range(n):
        for a in range(2):
            for wv in range(2):
                writeback[layout.basis_index(i, a, wv ^ (i & 1)), layout.basis_index(i, a, wv)] = 1.0
    final = writeback @ _tensor3(interfere, np.eye(2), np.eye(2))
    steps.append(Unitary(final))
    return tuple(steps)


def deutsch_parity(n: int) -> Algorithm:
    """Exact parity of an n-bit oracle (n even) using n/2 queries."""
    if n < 2 or n % 2:
        raise InputError("deutsch_parity needs an even n >= 2")
    layout = RegisterLayout(n, 2)
    accept = frozenset(
        layout.basis_index(i, a, 1) for i in range(n) for a in range(2)
    )
    return Algorithm(layout, _deutsch_parity_steps(n), accept, n // 2)


@lru_cache(maxsize=8)
def _grover_steps(n: int, iterations: int) -> tuple:
    layout = RegisterLayout(n, 1)
    uniform = np.full((n, 1), 1 / math.sqrt(n))
    # real orthogonal completion of column 0 = uniform
    prep_index, _ = np.linalg.qr(np.hstack([uniform, np.eye(n)[:, : n - 1]]))
    if prep_index[0, 0] < 0:
        prep_index = -prep_index
    steps: list = [Unitary(_tensor3(prep_index, _MINUS_PREP, np.eye(1)))]
    diffusion = 2.0 * (uniform @ uniform.T) - np.eye(n)
    diffusion_full = Unitary(_tensor3(diffusion, np.eye(2), np.eye(1)))
    for _ in range(iterations):
        steps.append(QUERY)
        steps.append(diffusion_full)
    # rotate the answer from |-> back to |0>, then one verifying query
    steps.append(Unitary(_tensor3(np.eye(n), _X2 @ _H2, np.eye(1))))
    steps.append(QUERY)
    return tuple(steps)


def grover(n: int, iterations: int) -> Algorithm:
    """Search iterations plus one verification query; accepts when answer=1."""
    if n < 2:
        raise InputError("grover needs n >= 2 oracle bits")
    if iterations < 0:
        raise InputError("iteration count must be nonnegative")
    layout = RegisterLayout(n, 1)
    accept = frozenset(layout.basis_index(i, 1, 0) for i in range(n))
    return Algorithm(layout, _grover_steps(n, iterations), accept, iterations + 1)


__all__ = [
    "Algorithm",
    "ErrorProfile",
    "FourierState",
    "GapReport",
    "QUERY",
    "Query",
    "RegisterLayout",
    "SERIAL_READ_MAX_VARS",
    "Unitary",
    "acceptance_probabilities",
    "apply_query",
    "apply_unitary",
    "deutsch_parity",
    "displacement_direct",
    "displacement_statistic",
    "error_profile",
    "gap_check",
    "grover",
    "initial_state",
    "profile_state",
    "reconstruct",
    "run",
    "serial_read",
    "simulate_direct",
]
