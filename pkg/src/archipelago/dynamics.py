"""Exact stochastic steppers for the automaton.

All steppers draw the uniform for site ``k`` at time ``t`` from
``rng.uniform(t, k)`` and set the site to ⊕ iff that uniform is below
``theta(x_k, x_{k+1})``. Sites read the pre-step configuration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    MINUS,
    PLUS,
    Cell,
    Params,
    RingConfig,
    UsageError,
    WindowConfig,
    compare,
)
from .rng import StepRng

__all__ = [
    "JumpKind",
    "JumpConfig",
    "Absorbed",
    "TimedOut",
    "OrderViolation",
    "step_ring",
    "step_window",
    "step_jump",
    "coupled_step",
    "run_to_absorption",
]

Config = Union[RingConfig, WindowConfig]


class OrderViolation(AssertionError):
    """A coupled step produced an unordered pair."""


class JumpKind(str, enum.Enum):
    PLUS_MINUS = "plus-minus"  # ⊕ left of the front, ⊖ from the front on
    MINUS_PLUS = "minus-plus"  # ⊖ left of the front, ⊕ from the front on


@dataclass(frozen=True)
class JumpConfig:
    kind: JumpKind
    front: int

    def __post_init__(self):
        object.__setattr__(self, "kind", JumpKind(self.kind))
        object.__setattr__(self, "front", int(self.front))

    def __getitem__(self, k: int) -> Cell:
        left = PLUS if self.kind is JumpKind.PLUS_MINUS else MINUS
        return left if k < self.front else Cell(1 - left)


@dataclass(frozen=True)
class Absorbed:
    time: int
    state: Cell


@dataclass(frozen=True)
class TimedOut:
    horizon: int
    final: object


def _update(pre: np.ndarray, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
    # pre has one more cell than u: the right neighbour of the last site.
    return (u < theta[pre[:-1], pre[1:]]).astype(np.uint8)


def step_ring(c: RingConfig, p: Params, rng: StepRng, t: int) -> RingConfig:
    cells = c.cells
    ext = np.append(cells, cells[0])
    return RingConfig(_update(ext, rng.uniform_range(t, 0, c.n), p.table.theta))


def step_window(w: WindowConfig, p: Params, rng: StepRng, t: int) -> WindowConfig:
    """One synchronous step on the infinite lattice.

    Only sites ``offset - 1 .. offset + len - 1`` can change: every other site
    sees a uniform background neighbourhood, which is a fixed point.
    """
    if w.is_uniform:
        return w
    bg = int(w.background)
    ext = np.concatenate(([bg], w.window, [bg])).astype(np.uint8)
    lo = w.offset - 1
    u = rng.uniform_range(t, lo, w.window.size + 1)
    return WindowConfig(w.background, lo, _update(ext, u, p.table.theta))


def step_jump(j: JumpConfig, p: Params, rng: StepRng, t: int) -> JumpConfig:
    """Only the site just left of the front is undecided."""
    u = rng.uniform(t, j.front - 1)
    if j.kind is JumpKind.MINUS_PLUS:
        moves = u < p.alpha  # (⊖, ⊕) turns ⊕ with prob alpha
    else:
        moves = not u < p.beta  # (⊕, ⊖) turns ⊖ with prob 1 - beta
    return JumpConfig(j.kind, j.front - 1) if moves else j


def _step(x: Config, p: Params, rng: StepRng, t: int) -> Config:
    if isinstance(x, RingConfig):
        return step_ring(x, p, rng, t)
    if isinstance(x, WindowConfig):
        return step_window(x, p, rng, t)
    raise UsageError(f"no stepper for {type(x).__name__}")


def coupled_step(x: Config, y: Config, p: Params, rng: StepRng, t: int):
    """Advance an ordered pair ``x <= y`` with shared uniforms.

    Each marginal is an exact step. Because theta is monotone, the threshold
    coupling keeps ``x' <= y'``; a violation raises :class:`OrderViolation`.
    """
    if not compare(x, y).precedes_or_equal:
        raise UsageError("coupled_step needs x to precede or equal y")
    x1, y1 = _step(x, p, rng, t), _step(y, p, rng, t)
    if not compare(x1, y1).precedes_or_equal:
        raise OrderViolation(f"order lost at t={t}: {x1!r} vs {y1!r}")
    return x1, y1


def _uniform_state(x: Config):
    if isinstance(x, RingConfig):
        return x.uniform_state
    return x.background if x.is_uniform else None


def run_to_absorption(x: Config, p: Params, rng: StepRng, horizon: int, t0: int = 0):
    """Step until the configuration is uniform or ``horizon`` steps have run."""
    if horizon < 1:
        raise UsageError("horizon must be at least 1")
    for t in range(horizon + 1):
        state = _uniform_state(x)
        if state is not None:
            return Absorbed(t, state)
        if t == horizon:
            break
        x = _step(x, p, rng, t0 + t)
    return TimedOut(horizon, x)

