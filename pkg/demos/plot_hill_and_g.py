"""
The hill function and the roundness threshold G(L)
===================================================

The hill function ``h(x) = 2 atan(e^-x)`` drops from pi to 0.  A secant
of horizontal width L that is tangent to the graph at its right end
fixes c(L), and the drop ``G(L) = h(c - L) - h(c)`` is the roundness
threshold used everywhere else.
"""

import os

import numpy as np

from domebound.pipeline import conjectured_bound, emit_gcurve, gcurve_svg
from domebound.specialfn import g_func, hill, hill_deriv, solve_tangent

out = os.environ.get("DEMO_OUT", "demo_output")
os.makedirs(out, exist_ok=True)

###############################################################################
# The tangent problem at L = 1.48
sol = solve_tangent(1.48)
print(f"c = {sol.c:.15f}  Theta = {sol.theta:.15f}  G = {sol.g_value:.15f}")
print(f"residual {sol.residual:.1e}")

# the secant slope equals the derivative at c
slope = (hill(sol.c) - hill(sol.c - 1.48)) / 1.48
print("secant slope", slope, " h'(c)", hill_deriv(sol.c))

###############################################################################
# G against the conjectured optimum 2 asin(tanh(L/2))
L = np.linspace(0.05, 2 * np.arcsinh(1.0), 40)
table = emit_gcurve(L)
gap = table[:, 2] - table[:, 1]
print(f"smallest gap to the conjectured bound: {gap.min():.3e} at L = {L[np.argmin(gap)]:.3f}")
print(f"G(1) = {g_func(1.0):.6f}")
print("conjectured bound at 1:", float(conjectured_bound(1.0)))

with open(os.path.join(out, "gcurve.svg"), "w") as fh:
    fh.write(gcurve_svg(emit_gcurve(np.linspace(0.01, 2 * np.arcsinh(1.0), 200))))
print("wrote", os.path.join(out, "gcurve.svg"))
