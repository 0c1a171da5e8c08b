import math
from fractions import Fraction

import numpy as np
import pytest

from archipelago.analytics import expected_hit_plus, ring_expected_absorption
from archipelago.core import MINUS, PLUS, Params, RingConfig, UsageError, WindowConfig
from archipelago.montecarlo import (
    AbsorptionProbTask,
    Estimate,
    MeanAbsorptionTask,
    RingScalingTask,
    SweepGrid,
    absorption_outcomes,
    estimate_absorption_prob,
    estimate_front_speed,
    estimate_mean_absorption,
    fit_loglog_slope,
    ring_scaling,
    sweep,
)

P = Params(0.2, 0.3)


def test_mean_absorption_matches_theory():
    est = estimate_mean_absorption(WindowConfig.island(3), P, 20000, 10**6, seed=1)
    assert est.flag == "ok" and est.censored == 0
    assert est.within(expected_hit_plus(P, 3))


def test_ring_mean_matches_theory():
    p = Params(0.5, 0.5)
    est = estimate_mean_absorption(RingConfig.block(8, 3), p, 5000, 10**6, seed=2)
    assert est.within(ring_expected_absorption(p, 3, 8))


def test_std_error_shrinks_like_root_n():
    cfg = WindowConfig.island(2)
    ses = [estimate_mean_absorption(cfg, P, m, 10**6, seed=3).std_error for m in (2000, 4000, 8000, 16000)]
    ratios = np.array(ses[:-1]) / np.array(ses[1:])
    assert np.all((1.2 <= ratios) & (ratios <= 1.7))


def test_censoring_monotone_in_horizon():
    p = Params(0.5, 0.5)
    cfg = WindowConfig.island(2)
    censored = [estimate_mean_absorption(cfg, p, 500, h, seed=4).censored for h in (10, 100, 1000, 10000)]
    assert censored == sorted(censored, reverse=True)
    assert censored[0] > censored[-1]


def test_longer_horizon_extends_trajectories():
    p = Params(0.5, 0.5)
    short, _ = absorption_outcomes(WindowConfig.island(2), p, 300, 50, seed=5)
    long, _ = absorption_outcomes(WindowConfig.island(2), p, 300, 5000, seed=5)
    done = short >= 0
    assert np.array_equal(short[done], long[done])
    assert np.all((long[~done] == -1) | (long[~done] > 50))


def test_reproducible():
    a = estimate_mean_absorption(WindowConfig.island(2), P, 1000, 10**4, seed=9)
    b = estimate_mean_absorption(WindowConfig.island(2), P, 1000, 10**4, seed=9)
    c = estimate_mean_absorption(WindowConfig.island(2), P, 1000, 10**4, seed=10)
    assert a == b and a != c


def test_all_censored_is_flagged_not_nan():
    est = estimate_mean_absorption(WindowConfig.island(2), Params(1, 1), 50, 100, seed=0)
    assert est.flag == "all-censored"
    assert est.point == 100 and not math.isnan(est.std_error)
    assert est.ci[1] == math.inf


def test_lower_bound_flag():
    est = estimate_mean_absorption(WindowConfig.island(2), Params(0.5, 0.5), 200, 20, seed=0)
    assert est.flag == "lower-bound" and 0 < est.censored < 200


def test_absorption_prob_small_count_uses_exact_interval():
    est = estimate_absorption_prob(WindowConfig.island(3), Params(0.8, 0.8), 2000, 10**3, seed=1)
    k = round(est.point * est.replicates)
    assert k < 30
    assert est.ci[0] <= est.point <= est.ci[1]
    assert est.ci[0] >= 0.0


def test_absorption_prob_ring_target():
    p = Params(0.5, 0.5)
    minus = estimate_absorption_prob(RingConfig.block(6, 2), p, 4000, 10**5, seed=3)
    plus = estimate_absorption_prob(RingConfig.block(6, 2), p, 4000, 10**5, seed=3, target=PLUS)
    assert minus.point + plus.point == pytest.approx(1.0)
    assert minus.within(2 / 3)


def test_non_contiguous_window_uses_stepper():
    times, states = absorption_outcomes(WindowConfig(MINUS, 0, "+-+"), P, 50, 10**4, seed=2)
    assert np.all(times > 0) and np.all(states == MINUS)


def test_front_speed():
    est = estimate_front_speed("plus-minus", Params(0.3, 0.6), 2000, 100, seed=1)
    assert est.within(0.4)


def test_estimate_rejects_nan_and_bad_counts():
    with pytest.raises(ValueError):
        Estimate(math.nan, 0.0, 1, 0, 0, 1)
    with pytest.raises(ValueError):
        Estimate(1.0, 0.0, 1, 2, 0, 1)
    with pytest.raises(UsageError):
        estimate_mean_absorption(WindowConfig.island(1), P, 0, 10, seed=0)
    with pytest.raises(UsageError):
        estimate_mean_absorption(WindowConfig.island(1), P, 10, 0, seed=0)


def test_loglog_slope():
    ns = [8, 16, 32]
    assert fit_loglog_slope(ns, [3 * n**2 for n in ns]) == pytest.approx(2.0)


def test_ring_scaling_rows():
    ests = ring_scaling(Params(0.5, 0.5), (4, 8), 200, 10**5, seed=1)
    assert len(ests) == 2 and ests[0].point < ests[1].point


def test_grid_is_exact():
    g = SweepGrid.uniform(21)
    assert g.alphas[3] == Fraction(3, 20)
    cells = list(g.cells())
    assert len(cells) == 441
    assert sum(p.on_boundary for p in cells) == 21
    assert SweepGrid([0.3], [0.7]).alphas == (Fraction(3, 10),)


def test_sweep_order_and_errors():
    grid = SweepGrid([0.2, 0.5], [0.3, 0.5])
    rows = sweep(grid, MeanAbsorptionTask(2, "plus", 100, 1000), seed=1)
    assert [(float(r.alpha), float(r.beta)) for r in rows] == [(0.2, 0.3), (0.2, 0.5), (0.5, 0.3), (0.5, 0.5)]
    # each cell has its own stream: a sub-grid reproduces the same numbers
    sub = sweep(SweepGrid([0.2], [0.3, 0.5]), MeanAbsorptionTask(2, "plus", 100, 1000), seed=1)
    assert sub[0].estimate == rows[0].estimate
    bad = sweep(grid, MeanAbsorptionTask(-1), seed=1)
    assert all(r.error and r.estimate is None for r in bad)


def test_sweep_prob_and_scaling_tasks():
    grid = SweepGrid([0.8], [0.8])
    (row,) = sweep(grid, AbsorptionProbTask(1, "plus", 2000, 1000), seed=1)
    assert row.estimate.within(0.0625)
    rows = sweep(grid, RingScalingTask((4, 8), 50, 10**5), seed=1)
    assert [r.n for r in rows] == [4, 8]
