"""Printed closed forms that disagree with exact solves, kept for comparison.

Two expressions circulate in the form below and are wrong as printed:

* the mean duration of the lazy gambler walk on ``{0..n}``,
  ``[n(1-g**i) + i(g**n - 1)] / [(1-g**n)(1-alpha-beta)]``, has the wrong
  overall sign. At ``n = 2, i = 1`` it equals
  ``-1 / (alpha*beta + (1-alpha)(1-beta))``;
* the decomposition of the plus-island mean time into constants ``k1, k2``
  states ``k1 + g*k2 = E[H_1]`` (it holds with ``1/g``) and
  ``E[H_n] = k1 + (n-1)*k2`` (it drops the ``k2/g`` term).

:mod:`archipelago.analytics` implements the corrected versions; the functions
here exist so the discrepancies stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analytics import erosion_constants, gamma, ring_expected_absorption
from .core import Params, RingConfig
from .oracle import build_ring_chain, ring_state_index, solve_absorption

__all__ = [
    "printed_ring_time",
    "printed_first_hit",
    "printed_hit",
    "RingSignCounterexample",
    "ErosionCounterexample",
    "ring_sign_counterexample",
    "erosion_counterexample",
]


def printed_ring_time(p: Params, i: int, n: int) -> float:
    """The duration formula exactly as printed (gamma != 1 branch)."""
    g = gamma(p)
    return (n * (1 - g**i) + i * (g**n - 1)) / ((1 - g**n) * (1 - p.alpha - p.beta))


def printed_first_hit(p: Params) -> float:
    """``k1 + gamma*k2`` as printed for the length-1 mean time."""
    k1, k2 = erosion_constants(p, "plus")
    return k1 + gamma(p) * k2


def printed_hit(p: Params, n: int) -> float:
    """``k1 + (n-1)*k2`` as printed for the length-n mean time."""
    k1, k2 = erosion_constants(p, "plus")
    return k1 + (n - 1) * k2


@dataclass(frozen=True)
class RingSignCounterexample:
    params: Params
    n: int
    i: int
    printed: float
    corrected: float
    oracle: float
    predicted_printed: float  # -1 / (alpha*beta + (1-alpha)(1-beta))


@dataclass(frozen=True)
class ErosionCounterexample:
    params: Params
    k1: float
    k2: float
    oracle_first_hit: float
    printed_first_hit: float  # k1 + gamma*k2
    inverse_first_hit: float  # k1 + k2/gamma
    n: int
    oracle_hit: float
    printed_hit: float  # k1 + (n-1)*k2


def ring_sign_counterexample(p: Params = Params(0.2, 0.3), n: int = 2, i: int = 1) -> RingSignCounterexample:
    sol = solve_absorption(build_ring_chain(n, p))
    oracle = float(sol.expected_times[ring_state_index(RingConfig.block(n, i))])
    return RingSignCounterexample(
        p,
        n,
        i,
        printed_ring_time(p, i, n),
        ring_expected_absorption(p, i, n),
        oracle,
        -1.0 / (p.up + p.down),
    )


def erosion_counterexample(p: Params = Params(0.2, 0.3), n: int = 5) -> ErosionCounterexample:
    """Constants of the linear mean-time law against oracle hitting times.

    The oracle values come from a truncated birth-death chain (see
    :func:`archipelago.oracle.solve_absorption`).
    """
    from .analytics import BirthDeathSpec
    from .oracle import build_birth_death_chain, default_truncation

    spec = BirthDeathSpec.plus_walk(p)
    times = solve_absorption(build_birth_death_chain(spec, default_truncation(spec, n))).expected_times
    k1, k2 = erosion_constants(p, "plus")
    g = gamma(p)
    return ErosionCounterexample(
        p, k1, k2, float(times[1]), k1 + g * k2, k1 + k2 / g, n, float(times[n]), printed_hit(p, n)
    )
