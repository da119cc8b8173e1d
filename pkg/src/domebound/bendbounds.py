"""Scalar bounds on bending under shears: c1, f, g, L0 and Q.

``f(L, x)`` and ``g(L, x)`` bound how an earthquake of shear ``|x|``
stretches or shrinks the distance between two leaves at distance ``L``.
``Q(L, x)`` is the half-height of the complex-earthquake parameter region
over the real shear ``x``::

    Q(L, x) = max(G(L) / ceil(f(L, x) / L), G(g(L, x)))
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .errors import PreconditionError, SolverError
from .specialfn import DEFAULT_TOL, g_func

__all__ = [
    "QProfile",
    "c1",
    "f_shear",
    "g_shear",
    "solve_L0",
    "g_small",
    "ceil_branch",
    "shear_branch",
    "q_bound",
    "jump_abscissa",
    "q_profile",
    "default_x_max",
    "L_MAX",
]

#: Upper end of the range on which ``c1`` is defined, ``2 asinh(1)``.
L_MAX = 2.0 * math.asinh(1.0)

# below this length G(t) = t sech(c(t)) with c(t) = t/3 + O(t^3) to double precision
_G_SERIES_CUTOFF = 1e-5


def c1(L):
    """Upper bound ``2 arccos(-sinh(L/2))`` on L-roundness of embedded pleated planes."""
    if not 0.0 < L < L_MAX:
        raise PreconditionError(f"c1 needs 0 < L < 2 asinh(1) = {L_MAX:.15g}, got {L!r}")
    return 2.0 * math.acos(-math.sinh(0.5 * L))


def f_shear(L, x):
    """``min(L e^{|x|/2}, asinh(e^{|x|} sinh L))``; vectorised over ``x``."""
    ax = np.abs(np.asarray(x, dtype=float))
    with np.errstate(over="ignore"):
        first = L * np.exp(0.5 * ax)
    # asinh(e^t sinh L) written to avoid overflow of e^t for large t
    second = _log_asinh_exp(ax + math.log(math.sinh(L)))
    out = np.minimum(first, second)
    return float(out) if out.ndim == 0 else out


def _log_asinh_exp(t):
    """``asinh(exp(t))`` for array ``t`` without overflow."""
    t = np.asarray(t, dtype=float)
    big = t > 30.0
    tb = np.where(big, t, 0.0)
    ts = np.where(big, 0.0, t)
    small_val = np.arcsinh(np.exp(ts))
    # asinh(y) = log(2y) + 1/(4y^2) + ... for y = e^t large
    big_val = tb + math.log(2.0) + 0.25 * np.exp(-2.0 * tb)
    return np.where(big, big_val, small_val)


def g_shear(L, x):
    """``max(L e^{-|x|/2}, asinh(e^{-|x|} sinh L))``; vectorised over ``x``."""
    ax = np.abs(np.asarray(x, dtype=float))
    first = L * np.exp(-0.5 * ax)
    second = np.arcsinh(np.exp(-ax) * math.sinh(L))
    out = np.maximum(first, second)
    return float(out) if out.ndim == 0 else out


def solve_L0(tol=1e-12):
    """Unique positive root of ``2 tanh(L) = L``, bracketed on ``(1, 3)``."""
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    fn = lambda L: 2.0 * math.tanh(L) - L
    try:
        root = brentq(fn, 1.0, 3.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    except (RuntimeError, ValueError) as exc:
        raise SolverError("L0 root solve failed") from exc
    if abs(fn(root)) >= tol:
        raise SolverError(f"L0 residual {abs(fn(root)):.2e} above tol {tol:.1e}")
    return root


def g_small(t, tol=DEFAULT_TOL):
    """``G(t)`` that also works for lengths below the tangent solver's range."""
    if np.ndim(t):
        t = np.asarray(t, dtype=float)
        out = t * (1.0 - t * t / 18.0)
        big = t >= _G_SERIES_CUTOFF
        if np.any(big):
            out[big] = g_func(t[big], tol)
        return np.where(t > 0, out, 0.0)
    if t <= 0.0:
        return 0.0
    if t < _G_SERIES_CUTOFF:
        # G(t) = t sech(c), c = t/3 + t^3/... ; error O(t^5)
        return t * (1.0 - t * t / 18.0)
    return g_func(t, tol)


def ceil_branch(L, x, G=None):
    """``G(L) / ceil(f(L, x) / L)``, the first branch of ``Q``."""
    if G is None:
        G = g_func(L)
    k = np.ceil(np.asarray(f_shear(L, x)) / L)
    # guard against f(L, 0) = L rounding a hair above L
    k = np.where(np.abs(np.asarray(x, dtype=float)) == 0.0, 1.0, np.maximum(k, 1.0))
    out = G / k
    return float(out) if out.ndim == 0 else out


def shear_branch(L, x):
    """``G(g(L, x))``, the second branch of ``Q``."""
    return g_small(g_shear(L, x))


def q_bound(L, x):
    """``Q(L, x)``; scalar or array ``x``."""
    if not L > 0:
        raise PreconditionError(f"L must be positive, got {L!r}")
    G = g_func(L)
    return np.maximum(ceil_branch(L, x, G), shear_branch(L, x)) if np.ndim(x) else \
        max(ceil_branch(L, x, G), shear_branch(L, x))


def jump_abscissa(L, k):
    """Smallest ``x >= 0`` with ``f(L, x) = k L`` (``k >= 1``).

    ``f`` is the minimum of two increasing functions, so it first reaches
    a level at the later of the two branch crossings, each available in
    closed form.
    """
    y = k * L
    x_exp = 2.0 * math.log(k)
    x_sinh = _log_sinh(y) - math.log(math.sinh(L))
    return max(x_exp, x_sinh, 0.0)


def _log_sinh(y):
    return y + math.log1p(-math.exp(-2.0 * y)) - math.log(2.0)


def default_x_max(L, level=1e-4):
    """Smallest integer ``a`` with ``Q(L, a) < level``.

    Far out the ceiling branch dominates and equals ``G(L)/k`` on
    ``(x_{k-1}, x_k]``, so the answer is located from the jump abscissas.
    """
    G = g_func(L)
    k = max(2, math.floor(G / level) + 1)  # G/k < level
    x = jump_abscissa(L, k - 1)
    # on (x_{k-1}, x_k] the first branch is G/k < level; confirm the second is too
    a = math.floor(x) + 1
    while q_bound(L, a) >= level:
        a += 1
    return float(a)


@dataclass
class QProfile:
    """Structure of ``Q(L, .)`` on ``[0, x_max]``.

    Attributes
    ----------
    L, x_max : float
    jump_abscissas : ndarray
        Ascending ``x_k`` with ``f(L, x_k) = k L`` for ``k = 2, 3, ...``;
        ``ceil(f/L) = k`` on ``(x_{k-1}, x_k]``.
    jump_brackets : ndarray, shape (n, 2)
        Verified brackets of width ``<= 1e-10`` around each jump.
    crossover_intervals : list of (float, float)
        Brackets where ``ceil_branch - shear_branch`` changes sign.
    crossover_values : list of (float, float)
        ``(ceil_branch, shear_branch)`` at each crossover midpoint.
    """

    L: float
    x_max: float
    jump_abscissas: np.ndarray
    jump_brackets: np.ndarray
    crossover_intervals: list = field(default_factory=list)
    crossover_values: list = field(default_factory=list)

    def level(self, x):
        """``ceil(f(L, x)/L)`` read off the jump table, for ``x >= 0``."""
        if x == 0:
            return 1
        return 2 + int(np.searchsorted(self.jump_abscissas, x, side="left"))


def q_profile(L, x_max=None, width=1e-10):
    """Locate ceiling jumps and branch crossovers of ``Q(L, .)`` on ``[0, x_max]``."""
    if not L > 0:
        raise PreconditionError(f"L must be positive, got {L!r}")
    if x_max is None:
        x_max = default_x_max(L)
    if not x_max > 0:
        raise PreconditionError(f"x_max must be positive, got {x_max!r}")
    G = g_func(L)

    jumps, brackets = [], []
    k = 2
    while True:
        xk = jump_abscissa(L, k)
        if xk > x_max:
            break
        lo, hi = _bracket_level(L, k, xk, width)
        jumps.append(xk)
        brackets.append((lo, hi))
        k += 1
    jumps = np.array(jumps)
    brackets = np.array(brackets).reshape(-1, 2)

    # on (x_{k-1}, x_k] the ceiling branch is the constant G/k
    edges = np.concatenate([[0.0], jumps, [x_max]])
    intervals, values = [], []
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        if b <= a:
            continue
        level = G / (i + 2)
        d = lambda x: level - g_small(g_shear(L, x))
        da, db = d(a), d(b)
        if da * db >= 0:
            continue
        root = brentq(d, a, b, xtol=width / 4)
        lo, hi = max(a, root - width / 2), min(b, root + width / 2)
        if d(lo) * d(hi) > 0:
            raise SolverError(
                f"could not isolate crossover near x={root!r} to width {width:g}")
        intervals.append((lo, hi))
        values.append((level, g_small(g_shear(L, root))))
    return QProfile(L=L, x_max=float(x_max), jump_abscissas=jumps,
                    jump_brackets=brackets, crossover_intervals=intervals,
                    crossover_values=values)


def _bracket_level(L, k, xk, width):
    """Bracket the root of ``f(L, x) - k L`` near the closed-form ``xk``."""
    fn = lambda x: f_shear(L, x) - k * L
    lo, hi = xk - width / 2, xk + width / 2
    if lo < 0:
        lo = 0.0
    if fn(lo) > 0 or fn(hi) < 0:
        # closed form off by rounding; fall back to a bracketed solve
        a, b = max(0.0, xk - 1.0), xk + 1.0
        root = brentq(fn, a, b, xtol=width / 4)
        lo, hi = root - width / 2, root + width / 2
        if fn(lo) > 0 or fn(hi) < 0:
            raise SolverError(f"could not bracket jump k={k} to width {width:g}")
    return lo, hi
