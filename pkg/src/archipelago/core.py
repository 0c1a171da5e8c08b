"""Domain types for the two-parameter nearest-neighbour PCA.

Cells take the values ``MINUS`` (⊖) and ``PLUS`` (⊕). Site ``k`` is updated
from the pair ``(x_k, x_{k+1})`` using the table

    theta(⊕ | ⊖⊖) = 0      theta(⊕ | ⊕⊖) = beta
    theta(⊕ | ⊖⊕) = alpha  theta(⊕ | ⊕⊕) = 1

Two kinds of configurations are represented: circular ones of fixed size
(:class:`RingConfig`) and finite perturbations of a uniform background on the
integer lattice (:class:`WindowConfig`).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "Cell",
    "MINUS",
    "PLUS",
    "Order",
    "Params",
    "TransitionTable",
    "RingConfig",
    "WindowConfig",
    "ArchipelagoMeasure",
    "DomainError",
    "UsageError",
    "compare",
    "length_of",
    "theta_lookup",
    "parse_cells",
    "exact_value",
]

WEIGHT_TOL = 1e-12


class DomainError(ValueError):
    """A quantity was requested outside the parameter range where it is defined."""


class UsageError(ValueError):
    """Arguments have the wrong kind, size or ordering for the operation."""


class Cell(enum.IntEnum):
    MINUS = 0
    PLUS = 1

    def __str__(self) -> str:
        return "+" if self else "-"


MINUS = Cell.MINUS
PLUS = Cell.PLUS

_SYMBOLS = {"-": 0, "+": 1, "⊖": 0, "⊕": 1, "0": 0, "1": 1}


def parse_cells(text: str) -> np.ndarray:
    """Parse ``"+-+"`` / ``"⊕⊖⊕"`` / ``"101"`` into a uint8 array."""
    try:
        return np.array([_SYMBOLS[ch] for ch in text if not ch.isspace()], dtype=np.uint8)
    except KeyError as exc:
        raise UsageError(f"unknown cell symbol {exc.args[0]!r} in {text!r}") from None


def _cells_to_str(cells: Iterable[int]) -> str:
    return "".join("+" if c else "-" for c in cells)


def _frozen(cells) -> np.ndarray:
    arr = np.array(cells, dtype=np.uint8)
    if arr.ndim != 1:
        raise UsageError("cells must be a one-dimensional sequence")
    if arr.size and arr.max() > 1:
        raise UsageError("cells must be 0 (minus) or 1 (plus)")
    arr.flags.writeable = False
    return arr


def exact_value(value) -> Fraction:
    """Exact rational value of a probability given as float, string or fraction."""
    # Floats go through their shortest round-trip decimal, so 0.3 means 3/10.
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"probability must be finite, got {value!r}")
        return Fraction(repr(value))
    return Fraction(str(value)) if not isinstance(value, int) else Fraction(value)


@dataclass(frozen=True)
class Params:
    """The pair ``(alpha, beta)``.

    Values may be given as floats, decimal strings or fractions. The exact
    decimal value is kept so that the boundary ``alpha + beta == 1`` can be
    detected without epsilon snapping.
    """

    alpha_exact: Fraction
    beta_exact: Fraction

    def __init__(self, alpha, beta):
        a, b = exact_value(alpha), exact_value(beta)
        for name, v in (("alpha", a), ("beta", b)):
            if not 0 <= v <= 1:
                raise DomainError(f"{name} must lie in [0, 1], got {float(v)!r}")
        object.__setattr__(self, "alpha_exact", a)
        object.__setattr__(self, "beta_exact", b)

    @property
    def alpha(self) -> float:
        return float(self.alpha_exact)

    @property
    def beta(self) -> float:
        return float(self.beta_exact)

    @property
    def up(self) -> float:
        """Growth rate of a plus-block, alpha * beta."""
        return self.alpha * self.beta

    @property
    def down(self) -> float:
        """Shrink rate of a plus-block, (1 - alpha)(1 - beta)."""
        return (1.0 - self.alpha) * (1.0 - self.beta)

    @property
    def on_boundary(self) -> bool:
        return self.alpha_exact + self.beta_exact == 1

    @property
    def critical_sign(self) -> int:
        """Sign of ``alpha - (1 - beta)``, computed exactly."""
        d = self.alpha_exact + self.beta_exact - 1
        return (d > 0) - (d < 0)

    @property
    def is_degenerate(self) -> bool:
        return self.alpha_exact in (0, 1) or self.beta_exact in (0, 1)

    @property
    def gamma(self) -> float:
        if self.alpha_exact == 0 or self.beta_exact == 0:
            raise DomainError("gamma is undefined when alpha = 0 or beta = 0")
        return 1.0 if self.on_boundary else self.down / self.up

    @property
    def table(self) -> "TransitionTable":
        return TransitionTable(self.alpha, self.beta)

    def __repr__(self) -> str:
        return f"Params(alpha={self.alpha!r}, beta={self.beta!r})"


@dataclass(frozen=True)
class TransitionTable:
    """Probability of ⊕ indexed by the neighbourhood ``(a0, a1)``."""

    alpha: float
    beta: float
    theta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.array([[0.0, self.alpha], [self.beta, 1.0]])
        t.flags.writeable = False
        object.__setattr__(self, "theta", t)

    def __call__(self, a0: int, a1: int) -> float:
        return float(self.theta[a0, a1])

    def is_monotone(self) -> bool:
        """Exhaustive check over all comparable neighbourhood pairs."""
        pairs = list(itertools.product((0, 1), repeat=2))
        for a, b in itertools.product(pairs, repeat=2):
            if a[0] <= b[0] and a[1] <= b[1] and self(*a) > self(*b):
                return False
        return True


def theta_lookup(table: TransitionTable, a0: int, a1: int, b: int = PLUS) -> float:
    """Probability that a site with neighbourhood ``(a0, a1)`` becomes ``b``."""
    p = table(int(a0), int(a1))
    return p if b == PLUS else 1.0 - p


class RingConfig:
    """A circular configuration of ``n >= 1`` cells; indices wrap modulo n."""

    __slots__ = ("cells",)

    def __init__(self, cells: Union[str, Sequence[int], np.ndarray]):
        if isinstance(cells, str):
            cells = parse_cells(cells)
        arr = _frozen(cells)
        if arr.size < 1:
            raise UsageError("a ring needs at least one cell")
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("RingConfig is immutable")

    @classmethod
    def uniform(cls, n: int, cell: int) -> "RingConfig":
        return cls(np.full(n, int(cell), dtype=np.uint8))

    @classmethod
    def block(cls, n: int, length: int, start: int = 0, cell: int = PLUS) -> "RingConfig":
        """A run of ``length`` cells equal to ``cell`` on the opposite background."""
        if not 0 <= length <= n:
            raise UsageError(f"block length must be in [0, {n}]")
        arr = np.full(n, 1 - int(cell), dtype=np.uint8)
        arr[(start + np.arange(length)) % n] = int(cell)
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.cells.size)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> Cell:
        return Cell(int(self.cells[k % self.n]))

    @property
    def uniform_state(self):
        """The common cell value if the ring is uniform, else ``None``."""
        first = self.cells[0]
        return Cell(int(first)) if np.all(self.cells == first) else None

    def __eq__(self, other):
        return isinstance(other, RingConfig) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.cells.tobytes())

    def __str__(self):
        return _cells_to_str(self.cells)

    def __repr__(self):
        return f"RingConfig({str(self)!r})"


class WindowConfig:
    """A configuration equal to ``background`` outside a finite window.

    The stored window is trimmed on both sides, so it starts and ends with a
    non-background cell, or is empty for the uniform configuration. Cell
    ``window[j]`` sits at lattice coordinate ``offset + j``.
    """

    __slots__ = ("background", "offset", "window")

    def __init__(self, background: int, offset: int = 0, window=()):
        if isinstance(window, str):
            window = parse_cells(window)
        bg = Cell(int(background))
        arr = np.array(window, dtype=np.uint8)
        nz = np.flatnonzero(arr != bg)
        if nz.size == 0:
            arr, offset = arr[:0], 0
        else:
            offset = int(offset) + int(nz[0])
            arr = arr[nz[0] : nz[-1] + 1]
        object.__setattr__(self, "background", bg)
        object.__setattr__(self, "offset", int(offset))
        object.__setattr__(self, "window", _frozen(arr))

    def __setattr__(self, name, value):
        raise AttributeError("WindowConfig is immutable")

    @classmethod
    def island(cls, length: int, background: int = MINUS, offset: int = 0) -> "WindowConfig":
        """A contiguous island of ``length`` non-background cells."""
        if length < 0:
            raise UsageError("island length must be nonnegative")
        return cls(background, offset, np.full(length, 1 - int(background), dtype=np.uint8))

    @property
    def is_uniform(self) -> bool:
        return self.window.size == 0

    @property
    def is_contiguous(self) -> bool:
        return bool(np.all(self.window != self.background))

    @property
    def side(self) -> str:
        """``"plus"`` for an island of pluses (background ⊖), else ``"minus"``."""
        return "plus" if self.background == MINUS else "minus"

    def __getitem__(self, k: int) -> Cell:
        j = k - self.offset
        if 0 <= j < self.window.size:
            return Cell(int(self.window[j]))
        return self.background

    def cells_on(self, lo: int, hi: int) -> np.ndarray:
        """Cell values at lattice coordinates ``lo .. hi - 1``."""
        out = np.full(hi - lo, int(self.background), dtype=np.uint8)
        a, b = max(lo, self.offset), min(hi, self.offset + self.window.size)
        if a < b:
            out[a - lo : b - lo] = self.window[a - self.offset : b - self.offset]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, WindowConfig)
            and self.background == other.background
            and self.offset == other.offset
            and np.array_equal(self.window, other.window)
        )

    def __hash__(self):
        return hash((int(self.background), self.offset, self.window.tobytes()))

    def __repr__(self):
        return (
            f"WindowConfig(background={str(self.background)!r}, offset={self.offset}, "
            f"window={_cells_to_str(self.window)!r})"
        )


def length_of(x: WindowConfig) -> int:
    """Span between the outermost non-background cells (0 when uniform)."""
    return int(x.window.size)


class Order(enum.Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"

    @property
    def precedes_or_equal(self) -> bool:
        return self in (Order.PRECEDES, Order.EQUAL)


def _pointwise_order(a: np.ndarray, b: np.ndarray) -> Order:
    le = bool(np.all(a <= b))
    ge = bool(np.all(a >= b))
    if le and ge:
        return Order.EQUAL
    if le:
        return Order.PRECEDES
    if ge:
        return Order.SUCCEEDS
    return Order.INCOMPARABLE


def compare(x, y) -> Order:
    """Coordinatewise comparison under ⊖ < ⊕."""
    if isinstance(x, RingConfig) and isinstance(y, RingConfig):
        if x.n != y.n:
            raise UsageError(f"cannot compare rings of sizes {x.n} and {y.n}")
        return _pointwise_order(x.cells, y.cells)
    if isinstance(x, WindowConfig) and isinstance(y, WindowConfig):
        if x.background != y.background:
            raise UsageError("cannot compare windows with different backgrounds")
        spans = [(w.offset, w.offset + w.window.size) for w in (x, y) if not w.is_uniform]
        if not spans:
            return Order.EQUAL
        lo, hi = min(s[0] for s in spans), max(s[1] for s in spans)
        return _pointwise_order(x.cells_on(lo, hi), y.cells_on(lo, hi))
    raise UsageError(
        f"cannot compare {type(x).__name__} with {type(y).__name__}"
    )


@dataclass(frozen=True)
class ArchipelagoMeasure:
    """A finite mixture of point masses on islands."""

    components: tuple

    def __init__(self, components: Iterable[tuple]):
        comps = tuple((float(w), cfg) for w, cfg in components)
        if not comps:
            raise UsageError("an archipelago measure needs at least one component")
        for w, cfg in comps:
            if not isinstance(cfg, WindowConfig):
                raise UsageError("archipelago components must be WindowConfig islands")
            if not w > 0:
                raise UsageError(f"component weights must be positive, got {w}")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise UsageError(f"weights must sum to 1, got {total!r}")
        object.__setattr__(self, "components", comps)

    @property
    def giant(self) -> int:
        return max(length_of(cfg) for _, cfg in self.components)

    @property
    def sides(self) -> set:
        return {cfg.side for _, cfg in self.components}
