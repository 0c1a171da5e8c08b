"""Closed-form quantities for the island-length walks.

A contiguous island of pluses on a ⊖ background changes length by +1 with
probability ``alpha*beta``, by -1 with probability ``(1-alpha)(1-beta)`` and
otherwise keeps it. An island of minuses on a ⊕ background has the two rates
swapped. ``gamma`` is the down/up ratio of the plus walk, and ``gamma == 1``
exactly on the line ``alpha + beta == 1``.

Infinite expectations are returned as ``math.inf`` explicitly; they never
arise from floating-point overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import PLUS, ArchipelagoMeasure, DomainError, Params, length_of

__all__ = [
    "BirthDeathSpec",
    "Side",
    "PhaseVerdict",
    "Degenerate",
    "gamma",
    "absorption_prob_plus",
    "absorption_prob_minus",
    "survival_prob",
    "expected_hit_plus",
    "expected_hit_minus",
    "gambler_win_prob",
    "ring_expected_absorption",
    "phase_classify",
    "limit_lambda",
    "eroder_bound",
    "erosion_constants",
    "degenerate_behavior",
    "gamma_power",
    "gamma_ratio",
]

_LOG_GUARD = 700.0
_NEAR_BOUNDARY = 1e-8  # below this |log gamma| the general ring formula cancels


class Side(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def _side(side) -> Side:
    try:
        return Side(side)
    except ValueError:
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}") from None


@dataclass(frozen=True)
class BirthDeathSpec:
    """Lazy nearest-neighbour walk on the nonnegative integers."""

    up: float
    down: float
    absorbing_states: frozenset = frozenset({0})

    def __post_init__(self):
        if self.up < 0 or self.down < 0 or self.up + self.down > 1 + 1e-15:
            raise DomainError(f"invalid rates up={self.up}, down={self.down}")
        object.__setattr__(self, "absorbing_states", frozenset(self.absorbing_states))

    @property
    def hold(self) -> float:
        return 1.0 - self.up - self.down

    @classmethod
    def plus_walk(cls, p: Params, n: int | None = None) -> "BirthDeathSpec":
        """Length walk of a plus-island, optionally absorbed at ``n`` as well."""
        return cls(p.up, p.down, {0} if n is None else {0, n})

    @classmethod
    def minus_walk(cls, p: Params, n: int | None = None) -> "BirthDeathSpec":
        return cls(p.down, p.up, {0} if n is None else {0, n})

    @classmethod
    def gambler(cls, p: Params, n: int) -> "BirthDeathSpec":
        """The plus walk conditioned to move: up + down == 1."""
        s = p.up + p.down
        return cls(p.up / s, p.down / s, {0, n})


@dataclass(frozen=True)
class PhaseVerdict:
    side: Side
    finite: bool
    boundary: bool

    @property
    def mean_time(self) -> str:
        return "finite" if self.finite else "infinite"

    def __str__(self) -> str:
        return self.mean_time


def _require_interior(p: Params, what: str) -> None:
    if p.is_degenerate:
        raise DomainError(
            f"{what} needs 0 < alpha < 1 and 0 < beta < 1; "
            f"use degenerate_behavior() for alpha={p.alpha}, beta={p.beta}"
        )


def _require_index(i: int, name: str = "i") -> int:
    if int(i) != i or i < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {i!r}")
    return int(i)


def _drift(p: Params) -> float:
    """``1 - alpha - beta`` (down rate minus up rate) from the exact inputs."""
    return float(1 - p.alpha_exact - p.beta_exact)


def gamma(p: Params) -> float:
    """``(1-alpha)(1-beta) / (alpha*beta)``; needs alpha > 0 and beta > 0."""
    if p.alpha_exact == 0 or p.beta_exact == 0:
        raise DomainError("gamma is undefined when alpha = 0 or beta = 0")
    if p.on_boundary:
        return 1.0
    return p.down / p.up


def gamma_power(g: float, i: float) -> float:
    """``g ** i`` with exact 0/1 clamping when the exponent leaves double range."""
    if i == 0:
        return 1.0
    if g == 0.0:
        return 0.0
    e = i * math.log(g)
    if e > _LOG_GUARD:
        return math.inf
    if e < -_LOG_GUARD:
        return 0.0
    return math.exp(e)


def gamma_ratio(g: float, i: int, n: int) -> float:
    """``(1 - g**i) / (1 - g**n)`` without overflow; ``i/n`` in the limit ``g -> 1``."""
    if g == 0.0:
        return 0.0 if i == 0 else 1.0
    lg = math.log(g)
    if lg == 0.0:
        return i / n
    if lg < 0:
        return math.expm1(i * lg) / math.expm1(n * lg)
    # g > 1: rewrite as g**(i-n) * (1 - g**-i) / (1 - g**-n)
    return gamma_power(g, i - n) * math.expm1(-i * lg) / math.expm1(-n * lg)


def absorption_prob_plus(p: Params, i: int) -> float:
    """Probability that the plus-island walk started at ``i`` ever hits 0."""
    i = _require_index(i)
    if i == 0:
        return 1.0
    _require_interior(p, "absorption_prob_plus")
    if p.critical_sign <= 0:
        return 1.0
    return gamma_power(gamma(p), i)


def absorption_prob_minus(p: Params, i: int) -> float:
    """Probability that the minus-island walk started at ``i`` ever hits 0."""
    i = _require_index(i)
    if i == 0:
        return 1.0
    _require_interior(p, "absorption_prob_minus")
    if p.critical_sign >= 0:
        return 1.0
    return gamma_power(gamma(p), -i)


def survival_prob(p: Params, side, i: int) -> float:
    """Probability that the island length tends to infinity."""
    if _side(side) is Side.PLUS:
        return 1.0 - absorption_prob_plus(p, i)
    return 1.0 - absorption_prob_minus(p, i)


def expected_hit_plus(p: Params, i: int) -> float:
    """Mean time for a contiguous plus-island of length ``i`` to vanish.

    The length walk loses ``1 - alpha - beta`` per step on average, so by
    Wald's identity the mean is ``i / (1 - alpha - beta)`` when that is
    positive and infinite otherwise.
    """
    i = _require_index(i)
    if i == 0:
        return 0.0
    _require_interior(p, "expected_hit_plus")
    if p.critical_sign >= 0:
        return math.inf
    return i / _drift(p)


def expected_hit_minus(p: Params, i: int) -> float:
    """Mean time for a contiguous minus-island of length ``i`` to vanish."""
    i = _require_index(i)
    if i == 0:
        return 0.0
    _require_interior(p, "expected_hit_minus")
    if p.critical_sign <= 0:
        return math.inf
    return i / -_drift(p)


def gambler_win_prob(p: Params, i: int, N: int) -> float:
    """Probability that the rescaled walk reaches ``N`` before 0 from ``i``."""
    i, N = _require_index(i), _require_index(N, "N")
    if N < 1 or i > N:
        raise DomainError(f"need 0 <= i <= N and N >= 1, got i={i}, N={N}")
    g = gamma(p)
    if p.on_boundary:
        return i / N
    return gamma_ratio(g, i, N)


def ring_expected_absorption(p: Params, i: int, n: int) -> float:
    """Mean absorption time of a block of ``i`` pluses on a ring of ``n`` cells.

    This is the mean duration of the lazy walk with up rate ``alpha*beta``,
    down rate ``(1-alpha)(1-beta)`` and absorbing states ``{0, n}``.
    """
    i, n = _require_index(i), _require_index(n, "n")
    if n < 2 or not 1 <= i <= n - 1:
        raise DomainError(f"need n >= 2 and 1 <= i <= n-1, got i={i}, n={n}")
    _require_interior(p, "ring_expected_absorption")
    g = gamma(p)
    if p.on_boundary or abs(math.log(g)) < _NEAR_BOUNDARY:
        # Here up + down is 2*alpha*(1-alpha); off the exact boundary this is
        # the limit, accurate to O(n * log(gamma)).
        return (i * n - i * i) / (p.up + p.down)
    return (i - n * gamma_ratio(g, i, n)) / _drift(p)


def phase_classify(p: Params, side) -> PhaseVerdict:
    """Whether an archipelago on ``side`` is absorbed in finite mean time."""
    side = _side(side)
    if side is Side.PLUS and p.beta_exact >= 1:
        raise DomainError("plus-archipelago phase needs beta < 1")
    if side is Side.MINUS and p.alpha_exact <= 0:
        raise DomainError("minus-archipelago phase needs alpha > 0")
    s = p.critical_sign
    finite = s < 0 if side is Side.PLUS else s > 0
    return PhaseVerdict(side, finite, s == 0)


def limit_lambda(mu: ArchipelagoMeasure, p: Params | None = None) -> float:
    """Weight of the limit on all-pluses: total mass on islands of minuses."""
    if p is not None:
        if p.alpha_exact <= 0 or p.beta_exact >= 1:
            raise DomainError("the limit exists for alpha > 0 and beta < 1")
    return math.fsum(w for w, cfg in mu.components if cfg.background == PLUS)


def erosion_constants(p: Params, side) -> tuple[float, float]:
    """Constants ``(k1, k2)`` of the linear mean-time law.

    For the plus side, ``k1 = 1/((1-alpha)(1-beta))`` and
    ``k2 = gamma**-1 / (alpha*beta*(1 - gamma**-1))``; the mean time of a
    length-``n`` island is ``k1 + k2/gamma + (n-1)*k2``. The minus side swaps
    the rates and replaces ``gamma`` by ``1/gamma``.
    """
    side = _side(side)
    _require_interior(p, "erosion_constants")
    up, down = (p.up, p.down) if side is Side.PLUS else (p.down, p.up)
    r = up / down
    return 1.0 / down, r / (up * (1.0 - r))


def eroder_bound(mu: ArchipelagoMeasure, p: Params) -> tuple[float, float]:
    """Bounds on the mixture mean absorption time of ``mu``.

    The mean time of any island lies between that of a single cell and that of
    a contiguous island spanning it, so the mixture mean lies between
    ``E[H_1]`` and ``E[H_giant]``. Infinite phases and mixed-side measures
    give ``(inf, inf)``.
    """
    sides = {Side(s) for s in mu.sides}
    lengths = [length_of(cfg) for _, cfg in mu.components]
    if max(lengths) == 0:
        return 0.0, 0.0
    if len(sides) > 1:
        return math.inf, math.inf
    (side,) = sides
    if not phase_classify(p, side).finite:
        return math.inf, math.inf
    hit = expected_hit_plus if side is Side.PLUS else expected_hit_minus
    lower = hit(p, 1) if min(lengths) > 0 else 0.0
    return lower, hit(p, mu.giant)


class Degenerate(str, enum.Enum):
    DIES = "P(X_t>ε)→0"
    ESCAPES = "P(X_t→∞|X_0>0)>0"
    FROZEN = "X_t=X_0 for all t"


def degenerate_behavior(p: Params) -> Degenerate:
    """Fate of the plus-island walk when alpha or beta is 0 or 1."""
    a, b = p.alpha_exact, p.beta_exact
    if not p.is_degenerate:
        raise DomainError("degenerate_behavior needs alpha or beta in {0, 1}")
    if (a == 0 and b == 1) or (a == 1 and b == 0):
        return Degenerate.FROZEN
    if a == 0 or b == 0:
        return Degenerate.DIES
    return Degenerate.ESCAPES

