"""
Jump fronts and the monotone coupling
=====================================

A half-line of pluses facing a half-line of minuses has one undecided site,
so the interface is a single integer. Separately, driving two ordered
configurations with the same uniforms keeps them ordered forever.
"""

import numpy as np

from archipelago.core import Params, RingConfig, compare
from archipelago.dynamics import coupled_step
from archipelago.montecarlo import estimate_front_speed
from archipelago.rng import StepRng

for a, b in [(0.3, 0.3), (0.7, 0.5)]:
    p = Params(a, b)
    mp = estimate_front_speed("minus-plus", p, 10**4, 100, seed=5)
    pm = estimate_front_speed("plus-minus", p, 10**4, 100, seed=6)
    print(f"({a}, {b}) minus-plus {mp.point:.4f} (alpha {a})   plus-minus {pm.point:.4f} (1-beta {1 - b:.1f})")

# Ordered pair x <= y on a ring of 8 cells.
gen = np.random.default_rng(0)
x = gen.integers(0, 2, 8).astype(np.uint8)
x, y = RingConfig(x), RingConfig(x | gen.integers(0, 2, 8).astype(np.uint8))
p, rng = Params(0.45, 0.5), StepRng(11)
for t in range(12):
    print(f"t={t:2d}  {x}  {y}  {compare(x, y).value}")
    x, y = coupled_step(x, y, p, rng, t)
