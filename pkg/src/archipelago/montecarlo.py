"""Monte Carlo estimators with censoring and error bars.

Replicate ``r`` of grid cell ``c`` under master seed ``s`` always uses the
stream ``derive_seed(s, c, r)``, so results do not depend on evaluation order
and a longer horizon extends, rather than replaces, each trajectory.

Censored replicates (not absorbed within the horizon) are never imputed.
Mean times are computed over the absorbed replicates only and flagged as a
lower bound whenever anything was censored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy import stats

from . import _kernels
from .core import MINUS, Cell, Params, RingConfig, UsageError, WindowConfig, exact_value
from .dynamics import JumpKind, run_to_absorption
from .rng import StepRng, replicate_seeds

__all__ = [
    "Estimate",
    "MeanAbsorptionTask",
    "AbsorptionProbTask",
    "RingScalingTask",
    "SweepGrid",
    "SweepRow",
    "absorption_outcomes",
    "estimate_mean_absorption",
    "estimate_absorption_prob",
    "estimate_front_speed",
    "ring_scaling",
    "fit_loglog_slope",
    "sweep",
]

Z_BAND = 3.0
EXACT_CI_BELOW = 30
_CI_LEVEL = stats.norm.cdf(Z_BAND) - stats.norm.cdf(-Z_BAND)


@dataclass(frozen=True)
class Estimate:
    point: float
    std_error: float
    replicates: int
    censored: int
    seed: int
    horizon: int
    ci: tuple = field(default=(math.nan, math.nan), compare=False)

    def __post_init__(self):
        if self.std_error < 0 or not 0 <= self.censored <= self.replicates:
            raise ValueError("inconsistent estimate")
        if math.isnan(self.point):
            raise ValueError("estimate point must not be NaN")

    @property
    def censored_fraction(self) -> float:
        return self.censored / self.replicates

    @property
    def flag(self) -> str:
        if self.censored == self.replicates and self.replicates:
            return "all-censored"
        return "lower-bound" if self.censored else "ok"

    def within(self, value: float, k: float = Z_BAND) -> bool:
        return abs(self.point - value) <= k * self.std_error


def _seeds(seed: int, cell: int, replicates: int) -> np.ndarray:
    if replicates < 1:
        raise UsageError("replicates must be at least 1")
    return replicate_seeds(seed, cell, replicates)


def absorption_outcomes(cfg, p: Params, replicates: int, horizon: int, seed: int, cell: int = 0):
    """Per-replicate absorption times (-1 if censored) and final uniform states.

    Contiguous islands and rings use compiled loops; other windows fall back
    to the generic stepper. All paths draw identical uniforms.
    """
    if horizon < 1:
        raise UsageError("horizon must be at least 1")
    seeds = _seeds(seed, cell, replicates)
    if isinstance(cfg, RingConfig):
        times, states = _kernels.ring_times(cfg.cells, p.alpha, p.beta, seeds, horizon)
        return times, states
    if not isinstance(cfg, WindowConfig):
        raise UsageError(f"cannot simulate {type(cfg).__name__}")
    if cfg.is_contiguous:
        times = _kernels.block_times(
            cfg.background == MINUS, cfg.window.size, cfg.offset, p.alpha, p.beta, seeds, horizon
        )
    else:
        times = np.array(
            [getattr(run_to_absorption(cfg, p, StepRng(int(s)), horizon), "time", -1) for s in seeds],
            dtype=np.int64,
        )
    states = np.where(times >= 0, int(cfg.background), -1).astype(np.int8)
    return times, states


def _mean_estimate(values: np.ndarray, censored: int, seed: int, horizon: int) -> Estimate:
    m = values.size
    if m == 0:
        return Estimate(float(horizon), 0.0, censored, censored, seed, horizon, (float(horizon), math.inf))
    point = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return Estimate(point, se, m + censored, censored, seed, horizon, (point - Z_BAND * se, point + Z_BAND * se))


def estimate_mean_absorption(cfg, p: Params, replicates: int, horizon: int, seed: int, cell: int = 0) -> Estimate:
    """Sample mean of the absorption time over absorbed replicates.

    If every replicate is censored the point is the horizon itself, a lower
    bound on the true mean, and ``flag`` reads ``"all-censored"``.
    """
    times, _ = absorption_outcomes(cfg, p, replicates, horizon, seed, cell)
    done = times[times >= 0].astype(float)
    return _mean_estimate(done, int(np.sum(times < 0)), seed, horizon)


def _proportion(k: int, n: int, seed: int, horizon: int, censored: int) -> Estimate:
    q = k / n
    se = math.sqrt(q * (1.0 - q) / n)
    if k < EXACT_CI_BELOW:
        ci = stats.binomtest(k, n).proportion_ci(confidence_level=_CI_LEVEL, method="exact")
        ci = (float(ci.low), float(ci.high))
    else:
        ci = (max(0.0, q - Z_BAND * se), min(1.0, q + Z_BAND * se))
    return Estimate(q, se, n, censored, seed, horizon, ci)


def estimate_absorption_prob(
    cfg, p: Params, replicates: int, horizon: int, seed: int, cell: int = 0, target: Cell | None = None
) -> Estimate:
    """Fraction of replicates absorbed in ``target`` within the horizon.

    ``target`` defaults to the background of a window and to all-minuses for
    a ring. The estimate is biased low by escapes that would return after the
    horizon.
    """
    times, states = absorption_outcomes(cfg, p, replicates, horizon, seed, cell)
    if target is None:
        target = cfg.background if isinstance(cfg, WindowConfig) else MINUS
    k = int(np.sum(states == int(target)))
    return _proportion(k, replicates, seed, horizon, int(np.sum(times < 0)))


def estimate_front_speed(kind, p: Params, steps: int, replicates: int, seed: int, cell: int = 0) -> Estimate:
    """Mean leftward displacement of a jump front per step."""
    if steps < 1:
        raise UsageError("steps must be at least 1")
    kind = JumpKind(kind)
    seeds = _seeds(seed, cell, replicates)
    disp = _kernels.front_displacements(kind is JumpKind.MINUS_PLUS, p.alpha, p.beta, seeds, steps, 0)
    return _mean_estimate(disp / steps, 0, seed, steps)


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def ring_scaling(p: Params, ns: Sequence[int], replicates: int, horizon: int, seed: int, cell: int = 0):
    """Mean absorption time of a half-filled block on rings of each size."""
    out = []
    for j, n in enumerate(ns):
        cfg = RingConfig.block(n, n // 2)
        out.append(estimate_mean_absorption(cfg, p, replicates, horizon, seed, cell * 1000 + j))
    return out


@dataclass(frozen=True)
class MeanAbsorptionTask:
    length: int
    side: str = "plus"
    replicates: int = 1000
    horizon: int = 10**6
    name = "mean-absorption"


@dataclass(frozen=True)
class AbsorptionProbTask:
    length: int
    side: str = "plus"
    replicates: int = 1000
    horizon: int = 10**4
    name = "absorption-prob"


@dataclass(frozen=True)
class RingScalingTask:
    ns: tuple = (8, 16, 32, 64)
    replicates: int = 1000
    horizon: int = 10**6
    name = "ring-scaling"


Task = Union[MeanAbsorptionTask, AbsorptionProbTask, RingScalingTask]


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple
    betas: tuple

    def __init__(self, alphas, betas):
        object.__setattr__(self, "alphas", tuple(exact_value(a) for a in alphas))
        object.__setattr__(self, "betas", tuple(exact_value(b) for b in betas))

    @classmethod
    def uniform(cls, points: int) -> "SweepGrid":
        """``points`` equally spaced exact values on [0, 1] for both axes."""
        vals = [Fraction(k, points - 1) for k in range(points)]
        return cls(vals, vals)

    def cells(self):
        for a in self.alphas:
            for b in self.betas:
                yield Params(a, b)


@dataclass(frozen=True)
class SweepRow:
    alpha: Fraction
    beta: Fraction
    n: int | None
    estimate: Estimate | None
    error: str = ""


def _island(task) -> WindowConfig:
    return WindowConfig.island(task.length, MINUS if task.side == "plus" else 1)


def sweep(grid: SweepGrid, task: Task, seed: int) -> list:
    """One row per grid cell (per ring size for scaling tasks), alpha-major."""
    rows = []
    for cell, p in enumerate(grid.cells()):
        try:
            if isinstance(task, MeanAbsorptionTask):
                est = estimate_mean_absorption(_island(task), p, task.replicates, task.horizon, seed, cell)
                rows.append(SweepRow(p.alpha_exact, p.beta_exact, None, est))
            elif isinstance(task, AbsorptionProbTask):
                est = estimate_absorption_prob(_island(task), p, task.replicates, task.horizon, seed, cell)
                rows.append(SweepRow(p.alpha_exact, p.beta_exact, None, est))
            elif isinstance(task, RingScalingTask):
                ests = ring_scaling(p, task.ns, task.replicates, task.horizon, seed, cell)
                rows.extend(SweepRow(p.alpha_exact, p.beta_exact, n, e) for n, e in zip(task.ns, ests))
            else:
                raise UsageError(f"unknown sweep task {task!r}")
        except (ValueError, ArithmeticError) as exc:
            rows.append(SweepRow(p.alpha_exact, p.beta_exact, None, None, str(exc)))
    return rows
