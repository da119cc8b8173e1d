"""
The dilatation bound at L = 1.48
================================

Map the staircase polygon conformally to the upper half-plane, measure
the distance between 0 and ``i c1(L)``, and exponentiate.  Two analytic
domains bracket the result: a half-plane that contains the polygon and a
half-strip inside it.  Takes a few seconds.
"""

import time

from domebound.pipeline import compute_bound

t = time.perf_counter()
res = compute_bound(1.48)
print(f"done in {time.perf_counter() - t:.1f} s")

print(f"G(L)  = {res.G_value:.15f}")
print(f"c1(L) = {res.c1_value:.12f}")
hw, n_int, n_vert = res.step_stats
print(f"staircase: half width {hw:.2f}, {n_int} intervals, {n_vert} vertices")
print(f"conformal map vertex error {res.sc_accuracy:.1e}")

###############################################################################
# the sandwich; the half-strip is narrow, so its bound is loose
c = res.certificate
print(f"{c.lower_bound:.4f} <= H = {res.H:.10f} <= {c.upper_bound:.4f}")
print(f"K = exp(H) = {res.K:.6f}")
