"""
From Q(L, x) to a staircase polygon
===================================

The bend bound ``Q(L, x)`` is a jump function of the shear ``x``.  Below
it we place a step function with certified values, and the region above
``y = -s(x)`` becomes a polygon with one vertex at infinity.
"""

import os

import numpy as np

from domebound.bendbounds import q_bound, q_profile, solve_L0
from domebound.pipeline import polygon_svg
from domebound.region import build_step, polygon_from_step

out = os.environ.get("DEMO_OUT", "demo_output")
os.makedirs(out, exist_ok=True)
L = 1.48

###############################################################################
# L is below L0, so the shear bound g is a plain exponential
print("L0 =", solve_L0(1e-14))
prof = q_profile(L, 12.0)
print("first jumps of ceil(f/L):", np.round(prof.jump_abscissas[:5], 6))
for x in (0.0, 0.5, 1.0, 2.0, 4.0):
    print(f"Q({L}, {x}) = {q_bound(L, x):.6f}")

###############################################################################
# the certified staircase; cell values sit on or below Q
step = build_step(L)
xs = np.linspace(-step.half_width, step.half_width, 20001)
slack = np.array([q_bound(L, x) for x in xs]) - step(xs)
print(f"half width {step.half_width:.3f}, {step.n_intervals} intervals, "
      f"min slack {slack.min():.2e}")

poly = polygon_from_step(step)
print(f"polygon: {poly.n} vertices, angle-sum defect {poly.angle_sum_defect():.1e}")

with open(os.path.join(out, "staircase.svg"), "w") as fh:
    fh.write(polygon_svg(step, view=6.0))
print("wrote", os.path.join(out, "staircase.svg"))
