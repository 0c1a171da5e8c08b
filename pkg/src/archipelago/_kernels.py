"""Compiled replicate loops for the Monte Carlo layer.

Each kernel reproduces the corresponding stepper in :mod:`archipelago.dynamics`
draw for draw: the uniform for site ``k`` at time ``t`` comes from the same
``(seed, t, k)`` hash, so a kernel run and a stepper run with the same seed
give the same trajectory.
"""

import numba as nb
import numpy as np

from .rng import row_key, seed_key, site_uniform


@nb.njit(cache=True)
def block_times(plus_island, length, offset, alpha, beta, seeds, horizon):
    """Absorption times of a contiguous island; -1 marks a censored replicate.

    Only the two edge sites of a contiguous island are random: the site left
    of it and its rightmost cell. Everything else sees a uniform neighbourhood.
    """
    out = np.full(seeds.size, -1, dtype=np.int64)
    for r in range(seeds.size):
        if length == 0:
            out[r] = 0
            continue
        key = seed_key(seeds[r])
        lo = np.int64(offset)
        hi = np.int64(offset + length - 1)
        for t in range(horizon):
            row = row_key(key, t)
            ul = site_uniform(row, lo - 1)
            ur = site_uniform(row, hi)
            if plus_island:
                grow = ul < alpha
                keep = ur < beta
            else:
                grow = not ul < beta
                keep = not ur < alpha
            if grow:
                lo -= 1
            if not keep:
                hi -= 1
            if hi < lo:
                out[r] = t + 1
                break
    return out


@nb.njit(cache=True)
def ring_times(cells0, alpha, beta, seeds, horizon):
    """Absorption times and final uniform states (0/1, -1 if censored) on a ring."""
    n = cells0.size
    times = np.full(seeds.size, -1, dtype=np.int64)
    states = np.full(seeds.size, -1, dtype=np.int8)
    theta = np.array([[0.0, alpha], [beta, 1.0]])
    cur = np.empty(n, dtype=np.uint8)
    nxt = np.empty(n, dtype=np.uint8)
    for r in range(seeds.size):
        plus = 0
        for k in range(n):
            cur[k] = cells0[k]
            plus += cells0[k]
        if plus == 0 or plus == n:
            times[r] = 0
            states[r] = 1 if plus == n else 0
            continue
        key = seed_key(seeds[r])
        for t in range(horizon):
            row = row_key(key, t)
            plus = 0
            for k in range(n):
                right = cur[k + 1] if k + 1 < n else cur[0]
                v = 1 if site_uniform(row, k) < theta[cur[k], right] else 0
                nxt[k] = v
                plus += v
            cur, nxt = nxt, cur
            if plus == 0 or plus == n:
                times[r] = t + 1
                states[r] = 1 if plus == n else 0
                break
    return times, states


@nb.njit(cache=True)
def front_displacements(minus_plus, alpha, beta, seeds, steps, front0):
    """Leftward displacement of a jump front after ``steps`` steps."""
    out = np.zeros(seeds.size, dtype=np.int64)
    for r in range(seeds.size):
        key = seed_key(seeds[r])
        f = np.int64(front0)
        for t in range(steps):
            u = site_uniform(row_key(key, t), f - 1)
            if minus_plus:
                if u < alpha:
                    f -= 1
            elif not u < beta:
                f -= 1
        out[r] = front0 - f
    return out
