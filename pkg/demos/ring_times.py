"""
Absorption on a finite ring
===========================

On a ring of n cells a single block of pluses stays a single block, so its
length is the same walk as before but absorbed at 0 and at n. The exact
2**n-state chain is small enough to solve directly for n <= 12.
"""

from archipelago.analytics import ring_expected_absorption
from archipelago.core import Params, RingConfig
from archipelago.montecarlo import fit_loglog_slope, ring_scaling
from archipelago.oracle import build_ring_chain, ring_state_index, solve_absorption

# Closed form against the full chain.
for a, b in [(0.2, 0.3), (0.5, 0.5), (0.8, 0.8)]:
    p = Params(a, b)
    n = 8
    times = solve_absorption(build_ring_chain(n, p)).expected_times
    oracle = [times[ring_state_index(RingConfig.block(n, i))] for i in range(1, n)]
    worst = max(abs(ring_expected_absorption(p, i, n) - o) / o for i, o in zip(range(1, n), oracle))
    print(f"({a}, {b}) n={n}: worst relative error {worst:.1e}")

# Growth with n: quadratic on the line, linear off it.
ns = (8, 16, 32, 64)
for a, b in [(0.5, 0.5), (0.2, 0.3)]:
    ests = ring_scaling(Params(a, b), ns, 500, 10**6, seed=4)
    pts = [e.point for e in ests]
    print(f"({a}, {b}) means {[round(x, 1) for x in pts]}  slope {fit_loglog_slope(ns, pts):.2f}")
