"""Exact finite Markov chains solved by dense linear algebra.

These are the brute-force references for the closed forms in
:mod:`archipelago.analytics`: the full ``2**n``-state chain of the automaton
on a ring, and truncated birth-death chains for the island-length walks.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .analytics import BirthDeathSpec
from .core import DomainError, Params, RingConfig, UsageError

__all__ = [
    "ExactChain",
    "AbsorptionSolution",
    "build_ring_chain",
    "build_birth_death_chain",
    "solve_absorption",
    "ring_state_index",
    "block_length_law",
    "default_truncation",
]

MAX_RING = 12
REACH_TOL = 1e-9


@dataclass(frozen=True)
class ExactChain:
    states: tuple
    transition: np.ndarray
    absorbing: tuple

    def __post_init__(self):
        P = np.asarray(self.transition, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] != len(self.states):
            raise UsageError("transition matrix must be square and match the state list")
        if np.any(P < 0) or not np.allclose(P.sum(axis=1), 1.0, rtol=0, atol=1e-12):
            raise UsageError("transition matrix must be row-stochastic")
        for a in self.absorbing:
            if P[a, a] != 1.0:
                raise UsageError(f"state {self.states[a]!r} is not absorbing")
        P.flags.writeable = False
        object.__setattr__(self, "transition", P)
        object.__setattr__(self, "absorbing", tuple(int(a) for a in self.absorbing))

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        return self.states.index(state)


@dataclass(frozen=True)
class AbsorptionSolution:
    hit_probabilities: np.ndarray
    expected_times: np.ndarray
    absorption_probabilities: np.ndarray


def ring_state_index(c: RingConfig) -> int:
    """Bit ``k`` of the index holds cell ``k``."""
    return int(np.dot(c.cells.astype(np.int64), 1 << np.arange(c.n, dtype=np.int64)))


def build_ring_chain(n: int, p: Params) -> ExactChain:
    """All ``2**n`` circular configurations with the product-form transition."""
    if not 1 <= n <= MAX_RING:
        raise DomainError(f"ring size must be in [1, {MAX_RING}], got {n}")
    size = 1 << n
    idx = np.arange(size)
    bits = (idx[:, None] >> np.arange(n)) & 1
    right = np.roll(bits, -1, axis=1)
    theta = p.table.theta[bits, right]  # P(site k -> plus) for every state
    P = np.ones((size, size))
    for k in range(n):
        plus = bits[:, k].astype(bool)
        P *= np.where(plus[None, :], theta[:, k][:, None], 1.0 - theta[:, k][:, None])
    states = tuple("".join("+" if b else "-" for b in row) for row in bits)
    return ExactChain(states, P, (0, size - 1) if n > 1 else (0, 1))


def default_truncation(spec: BirthDeathSpec, start: int = 1, tol: float = 1e-12) -> int:
    """Truncation level past which a downward-drifting walk is negligible."""
    if spec.up == 0:
        return max(start + 2, 2)
    if spec.down <= spec.up:
        raise DomainError("the walk does not drift to 0; no truncation converges")
    r = spec.up / spec.down
    k = math.ceil(math.log(tol) / math.log(r))
    return max(start + k + 10, 2)


def build_birth_death_chain(spec: BirthDeathSpec, truncation: int) -> ExactChain:
    """Tridiagonal chain on ``0..truncation``.

    The top state is absorbing when it belongs to ``spec.absorbing_states``;
    otherwise it reflects (the upward move is turned into a hold).
    """
    if truncation < 2:
        raise DomainError("truncation must be at least 2")
    m = truncation + 1
    P = np.zeros((m, m))
    absorbing = sorted(a for a in spec.absorbing_states if a <= truncation)
    for a in range(m):
        if a in spec.absorbing_states:
            P[a, a] = 1.0
            continue
        up = spec.up if a < truncation else 0.0
        P[a, a - 1] = spec.down
        if a < truncation:
            P[a, a + 1] = up
        P[a, a] = 1.0 - spec.down - up
    return ExactChain(tuple(range(m)), P, tuple(absorbing))


def _can_reach(P: np.ndarray, targets) -> np.ndarray:
    m = P.shape[0]
    reach = np.zeros(m, dtype=bool)
    preds = [np.flatnonzero(P[:, j] > 0) for j in range(m)]
    queue = deque(targets)
    reach[list(targets)] = True
    while queue:
        j = queue.popleft()
        for i in preds[j]:
            if not reach[i]:
                reach[i] = True
                queue.append(i)
    return reach


def solve_absorption(chain: ExactChain, target=None) -> AbsorptionSolution:
    """First-step analysis over the transient states.

    Returns per-state probabilities of being absorbed in ``target`` (default:
    all absorbing states) and expected times to absorption in any absorbing
    state. The time is ``inf`` where absorption has probability below
    ``1 - 1e-9``; states that cannot reach an absorbing state get
    probability 0 and time ``inf``.
    """
    P = chain.transition
    absorbing = list(chain.absorbing)
    if not absorbing:
        raise DomainError("chain has no absorbing state")
    target = absorbing if target is None else [int(t) for t in target]
    if not set(target) <= set(absorbing):
        raise UsageError("target must be a subset of the absorbing states")
    m = chain.size
    reach = _can_reach(P, absorbing)
    is_abs = np.zeros(m, dtype=bool)
    is_abs[absorbing] = True
    tr = np.flatnonzero(reach & ~is_abs)

    hit = np.zeros(m)
    hit[target] = 1.0
    absorbed = np.zeros(m)
    absorbed[absorbing] = 1.0
    times = np.full(m, math.inf)
    times[absorbing] = 0.0
    if tr.size:
        A = np.eye(tr.size) - P[np.ix_(tr, tr)]
        lu = linalg.lu_factor(A)
        rhs = np.column_stack(
            [P[np.ix_(tr, target)].sum(axis=1), P[np.ix_(tr, absorbing)].sum(axis=1), np.ones(tr.size)]
        )
        sol = linalg.lu_solve(lu, rhs)
        hit[tr], absorbed[tr] = sol[:, 0], sol[:, 1]
        sure = sol[:, 1] >= 1.0 - REACH_TOL
        times[tr[sure]] = sol[sure, 2]
    return AbsorptionSolution(hit, times, absorbed)


def block_length_law(n: int, p: Params, chain: ExactChain | None = None) -> np.ndarray:
    """Lumped one-step law of the block length on a ring of ``n`` cells.

    Row ``L`` is the distribution of the next block length starting from a
    contiguous block of ``L`` pluses; length 0 is all minuses and length
    ``n`` all pluses. Every transition out of a block lands on a block, so the
    rows sum to 1.
    """
    chain = chain or build_ring_chain(n, p)
    length_of_state = {}
    for L in range(n + 1):
        for s in range(n):
            length_of_state[ring_state_index(RingConfig.block(n, L, s))] = L
    law = np.zeros((n + 1, n + 1))
    for L in range(n + 1):
        row = chain.transition[ring_state_index(RingConfig.block(n, L, 0))]
        for j in np.flatnonzero(row):
            law[L, length_of_state[int(j)]] += row[j]
    return law

