"""
Piecewise geodesics in the hyperboloid model
=============================================

Random bent geodesics with roundness below G(L) stay embedded and
bilipschitz, and the angle to the radial direction obeys the hill bound.
The horocycle polygon realises the conjectured bending
``2 asin(tanh(L/2))`` exactly.
"""

import math

import numpy as np

from domebound.geodesiclab import (bilipschitz_report, check_embedding, check_hill_bound,
                                   horocycle_bend_angle, horocycle_polygon, isosceles_identity,
                                   planar_unroll, random_curve, roundness)
from domebound.specialfn import g_func

rng = np.random.default_rng(7)
L = 1.0
G = g_func(L)

###############################################################################
# a few random curves at 90% of the budget
for dim in (2, 3):
    c = random_curve(rng, L, 0.9 * G, dimension=dim)
    hill = check_hill_bound(c, L)
    bil = bilipschitz_report(c, L)
    print(f"dim {dim}: {c.n_bends} bends, roundness {roundness(c, L):.4f} < G = {G:.4f}")
    print(f"   max theta+ {hill.max_theta_plus:.4f} <= {hill.bound:.4f} ({hill.status})")
    print(f"   min separation {check_embedding(c, 1e-2):.4f}")
    print(f"   bilipschitz {bil.measured:.4f} >= {bil.predicted:.4f} ({bil.status})")

###############################################################################
# unrolling a space curve into the plane keeps the distance to gamma(0)
c = random_curve(rng, L, 1.5, dimension=3)
u = planar_unroll(c)
print("space angles ", np.round(c.bend_angles, 4))
print("planar angles", np.round(u.bend_angles, 4))

###############################################################################
# horocycle polygon and the isosceles identity sinh(l/2) = cos(theta)
h = horocycle_polygon(L, 12)
print("horocycle bends", h.bend_angles[:3], "closed form", horocycle_bend_angle(L))
print("its roundness", roundness(h, L), "vs G", G)
for th in (0.3, math.pi / 4, 1.2):
    r = isosceles_identity(th)
    print(f"theta {th:.3f}: sinh(l/2) = {r.sinh_half:.12f}  cos = {r.cos_theta:.12f}")
