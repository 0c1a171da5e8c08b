"""
A coarse phase map
==================

Censoring fraction of a length-2 plus-island over an 11 x 11 grid. Cells
below the anti-diagonal empty out quickly; cells above it keep surviving
islands. Write the same data to CSV with ``archipelago sweep``.
"""

from archipelago.montecarlo import MeanAbsorptionTask, SweepGrid, sweep

grid = SweepGrid.uniform(11)
rows = sweep(grid, MeanAbsorptionTask(2, "plus", replicates=200, horizon=10**4), seed=7)
frac = {(r.alpha, r.beta): r.estimate.censored_fraction for r in rows}

shade = " .:-=+*#%@"
print("beta ->  " + " ".join(f"{float(b):.1f}"[1:] if b < 1 else "1." for b in grid.betas))
for a in grid.alphas:
    cells = "   ".join(shade[min(9, int(frac[a, b] * 10))] for b in grid.betas)
    print(f"a={float(a):.1f}   {cells}")
