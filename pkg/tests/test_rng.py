import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from archipelago.rng import StepRng, derive_seed, replicate_seeds

u64 = st.integers(0, 2**64 - 1)


@given(u64, st.integers(-(2**40), 2**40), st.integers(-(2**40), 2**40))
def test_uniform_is_pure_and_in_range(seed, t, k):
    a, b = StepRng(seed).uniform(t, k), StepRng(seed).uniform(t, k)
    assert a == b and 0.0 <= a < 1.0


@given(u64, st.integers(0, 10**6), st.integers(-100, 100), st.integers(1, 50))
def test_vector_forms_agree(seed, t, lo, count):
    rng = StepRng(seed)
    scalar = [rng.uniform(t, k) for k in range(lo, lo + count)]
    assert rng.uniform_range(t, lo, count).tolist() == scalar
    assert rng.uniforms(t, np.arange(lo, lo + count)).tolist() == scalar


def test_replicate_seeds_match_derive_seed():
    seeds = replicate_seeds(42, 7, 50)
    assert [int(s) for s in seeds] == [derive_seed(42, 7, r) for r in range(50)]
    assert len(set(seeds.tolist())) == 50
    assert derive_seed(42, 7, 0) != derive_seed(42, 8, 0) != derive_seed(43, 7, 0)


def test_uniforms_pass_ks():
    rng = StepRng(2024)
    u = np.concatenate([rng.uniform_range(t, -500, 1000) for t in range(50)])
    assert stats.kstest(u, "uniform").pvalue > 1e-3
    # neighbouring sites and times are uncorrelated
    grid = u.reshape(50, 1000)
    assert abs(np.corrcoef(grid[:, :-1].ravel(), grid[:, 1:].ravel())[0, 1]) < 0.02
    assert abs(np.corrcoef(grid[:-1].ravel(), grid[1:].ravel())[0, 1]) < 0.02


def test_negative_seeds_wrap():
    assert StepRng(-1).seed == 2**64 - 1
    assert StepRng(-1).uniform(0, 0) == StepRng(2**64 - 1).uniform(0, 0)
