"""
Islands, gamma and the two phases
=================================

A plus-island on a background of minuses changes length by at most one cell
per step, so its length is a lazy birth-death walk. This script compares the
closed forms with simulation on both sides of the line alpha + beta = 1.
"""

from archipelago.analytics import (
    absorption_prob_plus,
    expected_hit_plus,
    gamma,
    phase_classify,
)
from archipelago.core import Params, WindowConfig
from archipelago.montecarlo import estimate_absorption_prob, estimate_mean_absorption

# Below the line the island shrinks on average; its mean lifetime is linear in length.
p = Params(0.2, 0.3)
print("gamma =", gamma(p), "| phase:", phase_classify(p, "plus"))
for length in (1, 2, 4):
    est = estimate_mean_absorption(WindowConfig.island(length), p, 20000, 10**6, seed=1, cell=length)
    print(f"len {length}: exact {expected_hit_plus(p, length):6.3f}   simulated {est.point:6.3f} +- {est.std_error:.3f}")

# Above the line it can escape. The chance it ever dies is gamma**length.
p = Params(0.8, 0.8)
print("\ngamma =", gamma(p), "| phase:", phase_classify(p, "plus"))
for length in (1, 2):
    est = estimate_absorption_prob(WindowConfig.island(length), p, 50000, 10**4, seed=2, cell=length)
    print(f"len {length}: exact {absorption_prob_plus(p, length):.5f}   simulated {est.point:.5f} +- {est.std_error:.5f}")

# On the line the walk is recurrent but the mean lifetime is infinite: a fixed
# horizon censors a slowly shrinking fraction of runs.
p = Params(0.5, 0.5)
for horizon in (10**2, 10**3, 10**4, 10**5):
    est = estimate_mean_absorption(WindowConfig.island(2), p, 2000, horizon, seed=3)
    print(f"horizon {horizon:>6}: censored {est.censored_fraction:.3f}  ({est.flag})")
