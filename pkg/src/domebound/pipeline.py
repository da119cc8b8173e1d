"""End-to-end bound: step function, polygon, conformal map, distance, optimum.

``compute_bound(L)`` builds the certified staircase below ``Q(L, .)``,
maps its polygon to the upper half-plane and measures the hyperbolic
distance between ``0`` and ``i c1(L)``; ``K = exp(H)``.
"""

from dataclasses import asdict, dataclass
import json
import math
import warnings

import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .bendbounds import L_MAX, c1
from .errors import DomeBoundError, PreconditionError
from .hypmetric import DistanceCertificate, certify_distance
from .region import build_step, polygon_from_step
from .scmap import solve_parameters
from .specialfn import g_func

__all__ = [
    "BoundResult",
    "ScanWarning",
    "compute_bound",
    "optimize_L",
    "conjectured_bound",
    "emit_gcurve",
    "emit_fbound_reference",
    "gcurve_svg",
    "polygon_svg",
]


class ScanWarning(UserWarning):
    """The coarse scan of ``K(L)`` is not unimodal or was clipped."""


@dataclass(frozen=True)
class BoundResult:
    """Outcome of :func:`compute_bound`.

    ``K`` is ``exp(H)``; ``certificate`` holds the half-plane/half-strip
    sandwich of ``H``.
    """

    L: float
    G_value: float
    c1_value: float
    step_stats: tuple
    sc_accuracy: float
    H: float
    K: float
    certificate: DistanceCertificate
    settings: dict = None

    def to_dict(self):
        d = asdict(self)
        d["step_stats"] = {"half_width": self.step_stats[0], "intervals": self.step_stats[1],
                           "polygon_vertices": self.step_stats[2]}
        d["certificate"] = self.certificate.to_dict()
        d["type"] = "BoundResult"
        d["version"] = __version__
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except DomeBoundError as exc:
        exc.stage = name
        exc.args = (f"[{name}] {exc.args[0] if exc.args else ''}",) + exc.args[1:]
        raise


def compute_bound(L, samples_per_branch=64, quad_order=8, half_width=None, tol=1e-10):
    """Upper bound ``K(L)`` from the inner polygonal approximation.

    Parameters
    ----------
    L : float
        In ``(0, 2 asinh 1)``.
    samples_per_branch, quad_order : int
        Step-function resolution and Gauss-Jacobi nodes per piece.
    half_width : float, optional
        Staircase support; default from :func:`region.default_half_width`.
    tol : float
        Side-length tolerance of the conformal-map solve.

    Errors raised by a stage carry a ``stage`` attribute.
    """
    if not 0.0 < L < L_MAX:
        raise PreconditionError(f"L must lie in (0, {L_MAX:.15g}), got {L!r}")
    G = _stage("gfunc", g_func, L)
    top = _stage("c1", c1, L)
    step = _stage("step", build_step, L, half_width, samples_per_branch)
    poly = _stage("polygon", polygon_from_step, step)
    scmap = _stage("scmap", solve_parameters, poly, quad_order=quad_order, tol=tol)
    cert = _stage("distance", certify_distance, scmap, step, G, 0j, 1j * top)
    H = cert.value
    settings = {"samples_per_branch": int(samples_per_branch), "quad_order": int(quad_order),
                "sc_tol": tol, "sc_residual": scmap.residual,
                "sc_iterations": scmap.iterations}
    return BoundResult(L=float(L), G_value=G, c1_value=top,
                       step_stats=(step.half_width, step.n_intervals, poly.n),
                       sc_accuracy=scmap.accuracy, H=H, K=math.exp(H),
                       certificate=cert, settings=settings)


def optimize_L(L_min=1.0, L_max=1.9, coarse_steps=19, tol=1e-3, **kw):
    """Minimise ``K(L)`` by a coarse scan and a golden-section refinement.

    Scan points at or beyond ``2 asinh 1`` (where ``c1`` is undefined) are
    dropped with a :class:`ScanWarning`.  The refinement runs on the scan
    bracket around the best point; since ``K`` is only piecewise smooth
    in ``L`` the best evaluated point overall is returned.

    Returns
    -------
    L_best : float
    result : BoundResult
    history : list of (L, K)
    """
    if not (0.0 < L_min < L_max):
        raise PreconditionError("need 0 < L_min < L_max")
    if coarse_steps < 3:
        raise PreconditionError("coarse_steps must be at least 3")
    grid = np.linspace(L_min, L_max, coarse_steps)
    ok = grid < L_MAX
    if not np.all(ok):
        warnings.warn(f"dropping scan points >= 2 asinh 1 = {L_MAX:.6f}", ScanWarning,
                      stacklevel=2)
        grid = grid[ok]
    if len(grid) < 3:
        raise PreconditionError("fewer than three admissible scan points")

    cache = {}

    def K(L):
        L = float(L)
        if L not in cache:
            cache[L] = compute_bound(L, **kw)
        return cache[L].K

    vals = np.array([K(L) for L in grid])
    i = int(np.argmin(vals))
    interior = vals[1:-1]
    n_min = int(np.sum((interior < vals[:-2]) & (interior < vals[2:])))
    if n_min > 1:
        warnings.warn(f"K(L) scan has {n_min} local minima; refining around the lowest",
                      ScanWarning, stacklevel=2)
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    minimize_scalar(K, bounds=(a, b), method="bounded", options={"xatol": tol})
    L_best = min(cache, key=lambda L: cache[L].K)
    history = sorted((L, r.K) for L, r in cache.items())
    return L_best, cache[L_best], history


def conjectured_bound(L):
    """``2 asin(tanh(L/2))``; vectorised."""
    return 2.0 * np.arcsin(np.tanh(0.5 * np.asarray(L, dtype=float)))


def emit_gcurve(L_grid):
    """Rows ``(L, G(L), 2 asin(tanh(L/2)))`` for ``L`` in ``(0, 2 asinh 1]``."""
    L = np.asarray(L_grid, dtype=float)
    if np.any(L <= 0) or np.any(L > L_MAX * (1 + 1e-15)):
        raise PreconditionError("grid must lie in (0, 2 asinh 1]")
    return np.column_stack([L, g_func(L), conjectured_bound(L)])


def emit_fbound_reference():
    """``F(1) = 2 pi - 2 asin(1 / cosh 1)``."""
    return 2.0 * math.pi - 2.0 * math.asin(1.0 / math.cosh(1.0))


# -- SVG ---------------------------------------------------------------------

def _svg(width, height, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="100%" height="100%" fill="white"/>\n'
            + body + "</svg>\n")


def _polyline(xs, ys, color, width=1.5):
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>\n'


def gcurve_svg(table, width=640, height=400, pad=40):
    """Overlay of ``G(L)`` and the conjectured bound."""
    L, G, conj = table[:, 0], table[:, 1], table[:, 2]
    ymax = float(np.max(conj)) * 1.05
    sx = lambda v: pad + (v - 0.0) / float(L.max()) * (width - 2 * pad)
    sy = lambda v: height - pad - v / ymax * (height - 2 * pad)
    body = _polyline([sx(0), sx(L.max())], [sy(0), sy(0)], "black", 1)
    body += _polyline([sx(0), sx(0)], [sy(0), sy(ymax)], "black", 1)
    body += _polyline(sx(L), sy(G), "#1f77b4")
    body += _polyline(sx(L), sy(conj), "#d62728")
    body += (f'<text x="{pad + 10}" y="{pad}" font-size="13" fill="#1f77b4">G(L)</text>\n'
             f'<text x="{pad + 10}" y="{pad + 18}" font-size="13" fill="#d62728">'
             f'2 asin(tanh(L/2))</text>\n'
             f'<text x="{width - pad}" y="{height - pad + 25}" font-size="13">L = {L.max():.4g}</text>\n')
    return _svg(width, height, body)


def polygon_svg(step, width=720, height=360, pad=30, view=None):
    """The staircase ``y = -s(x)`` with the marked points ``0`` and ``i c1(L)``.

    ``view`` limits the drawn window to ``|x| <= view``.
    """
    a = step.half_width if view is None else min(view, step.half_width)
    top = c1(step.L)
    bottom = float(np.max(step.values))
    w = polygon_from_step(step).finite_vertices
    keep = np.abs(w.real) <= a
    xs = np.concatenate([[-a - 0.05 * a], w.real[keep], [a + 0.05 * a]])
    ys = np.concatenate([[0.0], w.imag[keep], [0.0]])
    span = 1.1 * a
    sx = lambda v: pad + (np.asarray(v) + span) / (2 * span) * (width - 2 * pad)
    sy = lambda v: pad + (1.1 * top - np.asarray(v)) / (1.1 * (top + bottom)) * (height - 2 * pad)
    body = _polyline(sx(xs), sy(ys), "black")
    for y, name in ((0.0, "0"), (top, "i c1(L)")):
        body += (f'<circle cx="{float(sx(0)):.2f}" cy="{float(sy(y)):.2f}" r="3" fill="#d62728"/>\n'
                 f'<text x="{float(sx(0)) + 6:.2f}" y="{float(sy(y)) - 4:.2f}" '
                 f'font-size="12">{name}</text>\n')
    return _svg(width, height, body)
