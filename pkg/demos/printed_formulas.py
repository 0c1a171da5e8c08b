"""
Two printed formulas that disagree with exact solves
====================================================

Both discrepancies are easy to see numerically at alpha = 0.2, beta = 0.3.
"""

from archipelago.errata import erosion_counterexample, ring_sign_counterexample

r = ring_sign_counterexample()
print("ring duration, n=2, i=1")
print(f"  printed   {r.printed:+.6f}   (-1/(ab+(1-a)(1-b)) = {r.predicted_printed:+.6f})")
print(f"  corrected {r.corrected:+.6f}")
print(f"  oracle    {r.oracle:+.6f}")

e = erosion_counterexample()
print("\nlinear-time constants")
print(f"  k1 = {e.k1:.6f}, k2 = {e.k2:.6f}, E[H_1] = {e.oracle_first_hit:.6f}")
print(f"  k1 + gamma*k2   = {e.printed_first_hit:.6f}")
print(f"  k1 + k2/gamma   = {e.inverse_first_hit:.6f}")
print(f"  k1 + (n-1)*k2   = {e.printed_hit:.6f}  vs E[H_{e.n}] = {e.oracle_hit:.6f}")
