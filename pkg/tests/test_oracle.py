import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from archipelago.analytics import BirthDeathSpec, gambler_win_prob
from archipelago.core import DomainError, Params, RingConfig, UsageError
from archipelago.oracle import (
    ExactChain,
    block_length_law,
    build_birth_death_chain,
    build_ring_chain,
    default_truncation,
    ring_state_index,
    solve_absorption,
)
from strategies import any_params, interior_params


def test_two_cell_row():
    chain = build_ring_chain(2, Params(0.2, 0.3))
    assert chain.states == ("--", "+-", "-+", "++")
    row = chain.transition[chain.index("+-")]
    # site 0 sees (+,-) -> beta; site 1 sees (-,+) -> alpha
    assert row == pytest.approx([0.56, 0.24, 0.14, 0.06])


@given(any_params, st.integers(1, 7))
def test_rows_are_stochastic(p, n):
    P = build_ring_chain(n, p).transition
    assert np.all(P >= 0)
    assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)


def test_single_cell_ring():
    chain = build_ring_chain(1, Params(0.4, 0.7))
    assert chain.absorbing == (0, 1)
    assert np.array_equal(chain.transition, np.eye(2))


def test_ring_size_limits():
    with pytest.raises(DomainError):
        build_ring_chain(0, Params(0.5, 0.5))
    with pytest.raises(DomainError):
        build_ring_chain(13, Params(0.5, 0.5))


def test_state_index_bits():
    assert ring_state_index(RingConfig("+--")) == 1
    assert ring_state_index(RingConfig("-++")) == 6
    chain = build_ring_chain(3, Params(0.5, 0.5))
    for s, label in enumerate(chain.states):
        assert ring_state_index(RingConfig(label)) == s


@given(interior_params, st.integers(2, 8))
def test_block_law_matches_walk(p, n):
    law = block_length_law(n, p)
    assert np.allclose(law.sum(axis=1), 1.0, atol=1e-14)
    expected = np.zeros_like(law)
    expected[0, 0] = expected[n, n] = 1.0
    for L in range(1, n):
        expected[L, L + 1] = p.up
        expected[L, L - 1] = p.down
        expected[L, L] = 1.0 - p.up - p.down
    assert np.allclose(law, expected, atol=1e-14)


def test_birth_death_times():
    spec = BirthDeathSpec.plus_walk(Params(0.2, 0.3))
    sol = solve_absorption(build_birth_death_chain(spec, 200))
    assert sol.expected_times[:5] == pytest.approx([0, 2, 4, 6, 8], rel=1e-12)


def test_gambler_chain_matches_closed_form():
    p = Params(0.8, 0.8)
    N = 6
    hit = solve_absorption(build_birth_death_chain(BirthDeathSpec.gambler(p, N), N), target=[N]).hit_probabilities
    for i in range(N + 1):
        assert hit[i] == pytest.approx(gambler_win_prob(p, i, N), rel=1e-12, abs=1e-15)


def test_infinite_time_when_escape_possible():
    # reflecting truncation of an upward walk: still absorbed surely
    spec = BirthDeathSpec(0.5, 0.1)
    sol = solve_absorption(build_birth_death_chain(spec, 20))
    assert np.all(np.isfinite(sol.expected_times))
    # a chain with a trap that cannot reach the absorbing state
    P = np.array([[1.0, 0.0, 0.0], [0.5, 0.0, 0.5], [0.0, 0.0, 1.0]])
    sol = solve_absorption(ExactChain((0, 1, 2), P, (0,)))
    assert sol.expected_times[1] == math.inf
    assert sol.absorption_probabilities[1] == pytest.approx(0.5)
    assert sol.absorption_probabilities[2] == 0.0


def test_chain_validation():
    with pytest.raises(UsageError):
        ExactChain((0, 1), np.array([[0.5, 0.4], [0.0, 1.0]]), (1,))
    with pytest.raises(UsageError):
        ExactChain((0, 1), np.array([[0.5, 0.5], [0.5, 0.5]]), (1,))
    chain = ExactChain((0, 1), np.array([[0.5, 0.5], [0.0, 1.0]]), (1,))
    with pytest.raises(UsageError):
        solve_absorption(chain, target=[0])


def test_default_truncation():
    spec = BirthDeathSpec.plus_walk(Params(0.2, 0.3))
    assert default_truncation(spec, 5) > 5
    with pytest.raises(DomainError):
        default_truncation(BirthDeathSpec.plus_walk(Params(0.5, 0.5)))
