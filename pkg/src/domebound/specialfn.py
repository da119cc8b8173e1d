"""The hill function and the tangent-line problem that defines G(L).

The hill function ``h(x) = arccos(tanh x)`` is a decreasing homeomorphism
of the real line onto ``(0, pi)`` with ``h' = -sech = -sin(h)``.  For a
length ``L > 0`` the point ``c(L)`` is where the tangent line to the graph
of ``h`` at ``(c, h(c))`` passes through ``(c - L, h(c - L))``.  From it we
get ``Theta(L) = h(c)`` and the roundness threshold
``G(L) = h(c - L) - h(c) = -L h'(c)``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ConvergenceError, PreconditionError

__all__ = [
    "TangentSolution",
    "hill",
    "hill_deriv",
    "hill_gap",
    "solve_tangent",
    "g_func",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-14


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise PreconditionError(f"hill function needs finite input, got {x!r}")


def hill(x):
    """Evaluate ``h(x) = arccos(tanh(x))``.

    Computed as ``2 arctan(exp(-x))``, which keeps full relative accuracy
    for large positive ``x`` where ``tanh`` rounds to one.

    Parameters
    ----------
    x : float or array_like
        Finite abscissa(s).

    Returns
    -------
    float or ndarray
        Values in ``(0, pi)``.
    """
    _check_finite(x)
    with np.errstate(over="ignore"):
        out = 2.0 * np.arctan(np.exp(-np.asarray(x, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def hill_deriv(x):
    """Derivative ``h'(x) = -sech(x)``."""
    _check_finite(x)
    with np.errstate(over="ignore"):
        out = -1.0 / np.cosh(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def hill_gap(a, b):
    """Return ``h(a) - h(b)`` without cancellation.

    Uses ``arctan(u) - arctan(v) = arctan((u - v) / (1 + u v))`` with
    ``u = exp(-a)``, ``v = exp(-b)``, and ``u - v = -u expm1(a - b)``.
    Valid for ``u v`` not too large, i.e. unless both points are far
    in the negative half-line; in that case the direct difference is used.
    """
    if a + b < -40.0:
        return hill(a) - hill(b)
    u = math.exp(-a)
    diff = -u * math.expm1(a - b)
    return 2.0 * math.atan2(diff, 1.0 + u * math.exp(-b))


@dataclass(frozen=True)
class TangentSolution:
    """Solution of the tangent-line problem for one ``L``.

    Attributes
    ----------
    L : float
        Arc length parameter.
    c : float
        Tangency point ``c(L)`` in ``(0, L)``.
    theta : float
        ``Theta(L) = h(c)``.
    g_value : float
        ``G(L) = h(c - L) - h(c)``.
    residual : float
        ``|L h'(c) - h(c) + h(c - L)|`` at the returned ``c``.
    """

    L: float
    c: float
    theta: float
    g_value: float
    residual: float

    @property
    def peak(self):
        """``Theta(L) + G(L) = h(c - L)``, which is always below pi."""
        return self.theta + self.g_value


def _tangent_residual(c, L):
    return hill_gap(c - L, c) + L * hill_deriv(c)


def solve_tangent(L, tol=DEFAULT_TOL):
    """Solve ``h'(c) = (h(c) - h(c - L)) / L`` for the unique ``c`` in ``(0, L)``.

    Brent's method is run on ``[eps, L - eps]`` with
    ``eps = 1e-12 * max(1, L)``; the residual changes sign exactly once
    there because ``h`` is convex on the positive half-line.

    Raises
    ------
    PreconditionError
        If ``L`` or ``tol`` is not a positive finite number.
    BracketError
        If the residual has the same sign at both ends of the bracket.
    ConvergenceError
        If the root is found but the residual is still above ``tol``.
    """
    if not (np.isfinite(L) and L > 0):
        raise PreconditionError(f"L must be positive and finite, got {L!r}")
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol!r}")
    L = float(L)
    eps = 1e-12 * max(1.0, L)
    a, b = eps, L - eps
    fa, fb = _tangent_residual(a, L), _tangent_residual(b, L)
    if fa * fb > 0:
        raise BracketError(
            f"tangent residual does not change sign on [{a!r}, {b!r}]: "
            f"r(a)={fa!r}, r(b)={fb!r}",
            a=a, b=b, fa=fa, fb=fb,
        )
    try:
        c = brentq(_tangent_residual, a, b, args=(L,),
                   xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    except RuntimeError as exc:
        raise ConvergenceError(f"tangent solve for L={L!r} did not converge") from exc

    theta = hill(c)
    g_value = hill_gap(c - L, c)
    residual = abs(g_value + L * hill_deriv(c))
    if residual >= tol:
        raise ConvergenceError(
            f"tangent residual {residual:.3e} above tol {tol:.1e} at L={L!r}",
            residual=residual,
        )
    return TangentSolution(L=L, c=c, theta=theta, g_value=g_value, residual=residual)


def _hill_gap_array(a, b):
    u = np.exp(-a)
    diff = -u * np.expm1(a - b)
    return 2.0 * np.arctan2(diff, 1.0 + u * np.exp(-b))


def _tangent_array(L):
    """Vectorised tangency points for an array of moderate ``L`` (bisection)."""
    lo = 1e-12 * np.maximum(1.0, L)
    hi = L - lo
    r = lambda c: _hill_gap_array(c - L, c) - L / np.cosh(c)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        neg = r(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def g_func(L, tol=DEFAULT_TOL):
    """The roundness threshold ``G(L)``; accepts a scalar or an array.

    Arrays are solved together by bisection and each entry is checked
    against ``tol`` like the scalar path.
    """
    if np.ndim(L) == 0:
        return solve_tangent(float(L), tol).g_value
    L = np.asarray(L, dtype=float)
    if not (np.all(np.isfinite(L)) and np.all(L > 0)):
        raise PreconditionError("L must be positive and finite")
    c = _tangent_array(L)
    G = _hill_gap_array(c - L, c)
    res = np.abs(G - L / np.cosh(c))
    bad = res >= tol
    if np.any(bad):
        G[bad] = [solve_tangent(v, tol).g_value for v in L[bad]]
    return G
