import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from archipelago import _kernels
from archipelago.core import MINUS, PLUS, Params, RingConfig, UsageError, WindowConfig, compare
from archipelago.dynamics import (
    Absorbed,
    JumpConfig,
    JumpKind,
    TimedOut,
    coupled_step,
    run_to_absorption,
    step_jump,
    step_ring,
    step_window,
)
from archipelago.oracle import build_ring_chain
from archipelago.rng import StepRng, derive_seed, replicate_seeds
from strategies import any_params, cells, interior_params


@given(any_params, st.integers(1, 12), st.integers(0, 1), st.integers(0, 10**6))
def test_uniform_rings_are_fixed(p, n, c, seed):
    r = RingConfig.uniform(n, c)
    assert step_ring(r, p, StepRng(seed), 0) == r


@given(any_params, st.integers(0, 1), st.integers(0, 10**6))
def test_uniform_windows_are_fixed(p, bg, seed):
    w = WindowConfig(bg)
    assert step_window(w, p, StepRng(seed), 3) == w


def test_degenerate_rules():
    rng = StepRng(5)
    # alpha = beta = 1: every site with a plus anywhere in its pair turns plus
    assert str(step_ring(RingConfig("+---"), Params(1, 1), rng, 0)) == "+--+"
    # alpha = beta = 0: only (+,+) stays plus; site 3 wraps onto site 0
    assert str(step_ring(RingConfig("++-+"), Params(0, 0), rng, 0)) == "+--+"
    assert str(step_ring(RingConfig("++-+-"), Params(0, 0), rng, 0)) == "+----"


@given(interior_params, cells, st.integers(0, 2**32), st.integers(1, 12))
def test_window_embeds_in_ring(p, cs, seed, horizon):
    """A window and a large enough ring agree site by site under shared uniforms."""
    cs = [1] + cs + [1]
    offset = horizon + 2
    n = len(cs) + 2 * horizon + 4
    w = WindowConfig(MINUS, offset, cs)
    r = RingConfig(w.cells_on(0, n))
    rng = StepRng(seed)
    for t in range(horizon):
        w, r = step_window(w, p, rng, t), step_ring(r, p, rng, t)
        assert np.array_equal(w.cells_on(0, n), r.cells)


def test_window_right_edge_never_grows():
    p = Params(0.9, 0.9)
    w = WindowConfig.island(3)
    for t in range(50):
        w = step_window(w, p, StepRng(1), t)
        assert w.is_uniform or w.offset + w.window.size <= 3


@given(interior_params, st.integers(1, 6), st.integers(0, 1), st.integers(-5, 5))
def test_block_kernel_matches_stepper(p, length, bg, offset):
    seeds = replicate_seeds(11, length, 20)
    horizon = 300
    times = _kernels.block_times(bg == MINUS, length, offset, p.alpha, p.beta, seeds, horizon)
    for s, t in zip(seeds, times):
        res = run_to_absorption(WindowConfig.island(length, bg, offset), p, StepRng(int(s)), horizon)
        assert (res.time if isinstance(res, Absorbed) else -1) == t


@given(interior_params, cells, st.integers(0, 1000))
def test_ring_kernel_matches_stepper(p, cs, seed):
    seeds = replicate_seeds(seed, 0, 10)
    times, states = _kernels.ring_times(np.array(cs, dtype=np.uint8), p.alpha, p.beta, seeds, 200)
    for s, t, st_ in zip(seeds, times, states):
        res = run_to_absorption(RingConfig(cs), p, StepRng(int(s)), 200)
        if isinstance(res, Absorbed):
            assert (res.time, int(res.state)) == (t, st_)
        else:
            assert (t, st_) == (-1, -1)


@given(interior_params, st.sampled_from(list(JumpKind)), st.integers(0, 1000))
def test_jump_kernel_matches_stepper(p, kind, seed):
    s = int(replicate_seeds(seed, 0, 1)[0])
    j = JumpConfig(kind, 0)
    for t in range(100):
        j = step_jump(j, p, StepRng(s), t)
    disp = _kernels.front_displacements(kind is JumpKind.MINUS_PLUS, p.alpha, p.beta, np.array([s], np.uint64), 100, 0)
    assert -j.front == disp[0]


def test_jump_config_cells():
    j = JumpConfig("plus-minus", 3)
    assert j[2] == PLUS and j[3] == MINUS
    assert JumpConfig(JumpKind.MINUS_PLUS, 0)[-1] == MINUS


@pytest.mark.parametrize("start", ["+-", "+--", "+-+-"])
def test_one_step_law_chi_squared(start):
    """Empirical one-step law of the ring stepper against the exact row."""
    p = Params(0.3, 0.6)
    x = RingConfig(start)
    chain = build_ring_chain(x.n, p)
    row = chain.transition[chain.index(start)]
    m = 20000
    counts = np.zeros(chain.size)
    for r in range(m):
        y = step_ring(x, p, StepRng(derive_seed(99, len(start), r)), 0)
        counts[chain.index(str(y))] += 1
    support = row > 0
    assert counts[~support].sum() == 0
    _, pval = stats.chisquare(counts[support], m * row[support])
    assert pval > 1e-4


def test_determinism():
    p = Params(0.45, 0.5)
    a = run_to_absorption(RingConfig("++--+-"), p, StepRng(3), 10**4)
    b = run_to_absorption(RingConfig("++--+-"), p, StepRng(3), 10**4)
    assert a == b


def test_timeout():
    res = run_to_absorption(WindowConfig.island(2), Params(1, 0), StepRng(0), 10)
    assert isinstance(res, TimedOut) and res.horizon == 10
    # alpha = 1, beta = 0 translates the island one site left per step
    assert res.final == WindowConfig.island(2, offset=-10)
    with pytest.raises(UsageError):
        run_to_absorption(WindowConfig.island(2), Params(1, 0), StepRng(0), 0)


def test_run_to_absorption_uses_t0():
    p = Params(0.3, 0.3)
    x = RingConfig("+-+")
    rng = StepRng(8)
    shifted = run_to_absorption(step_ring(x, p, rng, 0), p, rng, 1000, t0=1)
    full = run_to_absorption(x, p, rng, 1000)
    assert full.time == shifted.time + 1 and full.state == shifted.state


@st.composite
def ordered_rings(draw):
    n = draw(st.integers(1, 10))
    x = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), dtype=np.uint8)
    extra = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), dtype=np.uint8)
    return RingConfig(x), RingConfig(x | extra)


@given(interior_params, ordered_rings(), st.integers(0, 10**6))
def test_coupling_preserves_order_rings(p, pair, seed):
    x, y = pair
    rng = StepRng(seed)
    for t in range(30):
        x, y = coupled_step(x, y, p, rng, t)
        assert compare(x, y).precedes_or_equal


@given(interior_params, cells, cells, st.integers(-3, 3), st.integers(0, 10**6))
def test_coupling_preserves_order_windows(p, a, b, shift, seed):
    x = WindowConfig(MINUS, shift, a)
    lo = min(shift, 0)
    hi = max(shift + len(a), len(b))
    y = WindowConfig(MINUS, lo, x.cells_on(lo, hi) | WindowConfig(MINUS, 0, b).cells_on(lo, hi))
    rng = StepRng(seed)
    for t in range(30):
        x, y = coupled_step(x, y, p, rng, t)


def test_coupling_rejects_unordered_pair():
    with pytest.raises(UsageError):
        coupled_step(RingConfig("+-"), RingConfig("-+"), Params(0.5, 0.5), StepRng(0), 0)
