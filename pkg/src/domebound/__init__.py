"""Numerical bound for the conformally natural map from a domain to its dome.

The chain runs from the hill function ``h(x) = arccos(tanh x)`` through the
roundness threshold ``G(L)`` and the parameter-region profile ``Q(L, x)``
to a certified staircase polygon, its Schwarz-Christoffel map, and the
hyperbolic distance ``H(L)`` whose exponential bounds the constant ``K``.
"""

__version__ = "0.1.0"

from .errors import (BracketError, CertificateError, ConvergenceError,  # noqa: E402
                     DomeBoundError, PreconditionError, SolverError)
from .specialfn import g_func, hill, solve_tangent  # noqa: E402
from .bendbounds import c1, f_shear, g_shear, q_bound, solve_L0  # noqa: E402
from .region import build_step, polygon_from_step  # noqa: E402
from .scmap import solve_parameters, sc_forward, sc_inverse  # noqa: E402
from .hypmetric import d_uhp, domain_distance  # noqa: E402
from .pipeline import compute_bound, optimize_L  # noqa: E402
