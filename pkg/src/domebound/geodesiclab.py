"""Piecewise geodesics in the hyperbolic plane and in hyperbolic 3-space.

Curves are traced in the hyperboloid model ``{x : <x, x> = -1, x_0 > 0}``
of ``H^3`` with the form ``<x, y> = -x_0 y_0 + x_1 y_1 + x_2 y_2 + x_3 y_3``.
A moving orthonormal frame ``(p, T, N, B)`` is carried along the curve by
4x4 Lorentz matrices: boosts along the geodesic segments, a rotation about
``T`` by the torsion and a rotation of ``T`` towards ``N`` by the bending
angle at each bend.  Planar curves have torsion ``0`` or ``pi`` only and
stay in ``x_3 = 0``.

The curve starts at the base point ``e_0`` with tangent ``e_1``, so
``s(t) = d(gamma(0), gamma(t))`` is read off the point's spatial norm.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .errors import PreconditionError
from .specialfn import solve_tangent

__all__ = [
    "PiecewiseGeodesic",
    "ThetaProfile",
    "HillReport",
    "BilipReport",
    "IsoscelesReport",
    "minkowski",
    "hyp_distance",
    "roundness",
    "trace",
    "theta_s_profile",
    "check_hill_bound",
    "check_embedding",
    "bilipschitz_report",
    "horocycle_polygon",
    "horocycle_bend_angle",
    "isosceles_identity",
    "planar_unroll",
    "random_curve",
    "uhp_to_hyperboloid",
]

_J = np.diag([-1.0, 1.0, 1.0, 1.0])
# windows shorter than L by less than this (relative) count as length L
WINDOW_TOL = 1e-12


def minkowski(x, y):
    """Lorentzian inner product over the last axis."""
    x, y = np.asarray(x), np.asarray(y)
    return -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def hyp_distance(p, q):
    """Distance between hyperboloid points, ``2 asinh(|p - q| / 2)``.

    The chord form keeps full accuracy for nearby points.
    """
    d = np.asarray(p) - np.asarray(q)
    chord2 = np.maximum(minkowski(d, d), 0.0)
    out = 2.0 * np.arcsinh(0.5 * np.sqrt(chord2))
    return float(out) if np.ndim(out) == 0 else out


def uhp_to_hyperboloid(z):
    """Point ``x + iy`` of the upper half-plane as a hyperboloid point (``x_3 = 0``)."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    r2 = x * x + y * y
    return np.stack([(r2 + 1) / (2 * y), x / y, (r2 - 1) / (2 * y),
                     np.zeros_like(x)], axis=-1)


@dataclass(frozen=True)
class PiecewiseGeodesic:
    """Unit-speed geodesic ray from ``e_0`` bent at ``bend_times``.

    Attributes
    ----------
    bend_times : ndarray
        Strictly ascending arc-length positions, all ``>= 0``.
    bend_angles : ndarray
        Exterior bending angles in ``[0, pi)``.
    torsions : ndarray
        Rotation about the incoming tangent applied before each bend.
    dimension : int
        2 (torsions in ``{0, pi}``) or 3.
    """

    bend_times: np.ndarray
    bend_angles: np.ndarray
    torsions: np.ndarray = None
    dimension: int = 2
    _frames: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.bend_times, dtype=float))
        phi = np.atleast_1d(np.asarray(self.bend_angles, dtype=float))
        tor = np.zeros_like(phi) if self.torsions is None else \
            np.atleast_1d(np.asarray(self.torsions, dtype=float))
        if not (len(t) == len(phi) == len(tor)):
            raise PreconditionError("bend_times, bend_angles and torsions differ in length")
        if len(t) and (np.any(np.diff(t) <= 0) or t[0] < 0):
            raise PreconditionError("bend times must be non-negative and strictly ascending")
        if np.any(phi < 0) or np.any(phi >= math.pi):
            raise PreconditionError("bend angles must lie in [0, pi)")
        if self.dimension not in (2, 3):
            raise PreconditionError("dimension must be 2 or 3")
        if self.dimension == 2:
            flips = np.mod(tor, 2 * math.pi)
            if not np.all(np.isclose(flips, 0.0) | np.isclose(flips, math.pi)):
                raise PreconditionError("planar curves need torsion 0 or pi")
        object.__setattr__(self, "bend_times", t)
        object.__setattr__(self, "bend_angles", phi)
        object.__setattr__(self, "torsions", tor)
        object.__setattr__(self, "_frames", _build_frames(t, phi, tor))

    @property
    def n_bends(self):
        return len(self.bend_times)

    @property
    def last_bend(self):
        return float(self.bend_times[-1]) if self.n_bends else 0.0

    def frame(self, t, side="+"):
        """Frame matrix (columns ``p, T, N, B``) at ``t``.

        At a bend time, ``side="-"`` gives the frame before bending.
        """
        how = "right" if side == "+" else "left"
        i = int(np.searchsorted(self.bend_times, t, side=how))
        base = self.bend_times[i - 1] if i else 0.0
        return self._frames[i] @ _boost(t - base)

    def points(self, t, base=None):
        """Hyperboloid points ``gamma(t)``; shape ``(..., 4)``.

        With ``base`` the points are expressed in the frame at ``gamma(base)``
        (so ``gamma(base)`` is ``e_0``).  The frames are then composed from
        ``base`` outwards, which keeps nearby points accurate however far
        ``gamma(base)`` is from ``e_0``.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise PreconditionError("curve parameter must be non-negative")
        idx = np.searchsorted(self.bend_times, t, side="right")
        starts = np.concatenate([[0.0], self.bend_times])
        u = t - starts[idx]
        if base is None:
            frames = self._frames
        else:
            k = int(np.searchsorted(self.bend_times, base, side="right"))
            frames = _frames_from(self.bend_times, self.bend_angles, self.torsions, k,
                                  base - starts[k])
        F = np.stack(frames)[idx]  # (..., 4, 4)
        return np.cosh(u)[..., None] * F[..., :, 0] + np.sinh(u)[..., None] * F[..., :, 1]

    def to_dict(self):
        return {"type": "PiecewiseGeodesic", "dimension": self.dimension,
                "bend_times": self.bend_times.tolist(),
                "bend_angles": self.bend_angles.tolist(),
                "torsions": self.torsions.tolist()}


def _boost(u):
    M = np.eye(4)
    c, s = math.cosh(u), math.sinh(u)
    M[0, 0] = M[1, 1] = c
    M[1, 0] = M[0, 1] = s
    return M


def _rotation(i, j, a):
    """Rotation taking column ``i`` towards column ``j`` by angle ``a``."""
    M = np.eye(4)
    c, s = math.cos(a), math.sin(a)
    M[i, i] = M[j, j] = c
    M[j, i] = s
    M[i, j] = -s
    return M


def _build_frames(times, angles, torsions):
    F = np.eye(4)
    frames = [F]
    prev = 0.0
    for t, phi, tau in zip(times, angles, torsions):
        F = F @ _boost(t - prev) @ _rotation(2, 3, tau) @ _rotation(1, 2, phi)
        frames.append(F)
        prev = t
    return frames


def _frames_from(times, angles, torsions, k, u):
    """Frames relative to the point ``u`` past the start of segment ``k``."""
    prev = np.concatenate([[0.0], times[:-1]])
    step = lambda i: _boost(times[i] - prev[i]) @ _rotation(2, 3, torsions[i]) \
        @ _rotation(1, 2, angles[i])
    back = lambda i: _rotation(1, 2, -angles[i]) @ _rotation(2, 3, -torsions[i]) \
        @ _boost(prev[i] - times[i])
    frames = [None] * (len(times) + 1)
    frames[k] = _boost(-u)
    for i in range(k, len(times)):
        frames[i + 1] = frames[i] @ step(i)
    for i in range(k - 1, -1, -1):
        frames[i] = frames[i + 1] @ back(i)
    return frames


def roundness(gamma, L):
    """Largest total bending in an open window of length ``L``.

    Windows ``{t_j, ..., t_k}`` with ``t_k - t_j < L`` are counted; a
    difference within ``WINDOW_TOL * max(1, L)`` of ``L`` counts as ``L``
    so bends placed at multiples of ``L`` do not merge through rounding.
    """
    if not L > 0:
        raise PreconditionError("L must be positive")
    t, phi = gamma.bend_times, gamma.bend_angles
    if len(t) == 0:
        return 0.0
    csum = np.concatenate([[0.0], np.cumsum(phi)])
    limit = L - WINDOW_TOL * max(1.0, L)
    # last index k with t_k - t_j < L, for every start j
    end = np.searchsorted(t, t + limit, side="left")
    return float(np.max(csum[end] - csum[np.arange(len(t))]))


def trace(gamma, t):
    """``gamma(t)`` as a hyperboloid 4-vector (vectorised over ``t``)."""
    return gamma.points(t)


def _radial_s(p):
    return np.arcsinh(np.linalg.norm(np.asarray(p)[..., 1:], axis=-1))


def _theta(F):
    """Angle between the tangent of frame ``F`` and the outward radial direction."""
    q, T = F[:, 0], F[:, 1]
    o = np.array([1.0, 0.0, 0.0, 0.0])
    ip = minkowski(o, q)
    sh = math.sqrt(max(ip * ip - 1.0, 0.0))
    if sh == 0.0:
        return 0.0
    u = -(o + ip * q) / sh
    c = minkowski(T, u)
    w = T - c * u
    sn = math.sqrt(max(minkowski(w, w), 0.0))
    return math.atan2(sn, c)


@dataclass
class ThetaProfile:
    """Distance and angle along a curve, traced and integrated.

    ``theta_plus``/``theta_minus`` are the angles just after/before each
    sample time (equal away from bends); ``ode_s``/``ode_theta_minus``
    come from integrating ``s' = cos(theta)``, ``theta' = -sin(theta)/tanh(s)``
    from the traced values just after the previous bend.
    """

    sample_times: np.ndarray
    s_values: np.ndarray
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    ode_s: np.ndarray
    ode_theta_minus: np.ndarray

    @property
    def ode_discrepancy(self):
        return float(max(np.max(np.abs(self.ode_s - self.s_values)),
                         np.max(np.abs(self.ode_theta_minus - self.theta_minus))))


def _rhs(t, y):
    s, th = y
    return [math.cos(th), -math.sin(th) / math.tanh(s)]


def theta_s_profile(gamma, grid, ode_start=1e-6):
    """Profile of ``s`` and ``theta`` on ``grid`` plus all bend times.

    Bend times must be positive (the base point is not a bend).
    """
    if gamma.n_bends and gamma.bend_times[0] <= 0:
        raise PreconditionError("profile needs gamma(0) away from the bends")
    times = np.unique(np.concatenate([np.asarray(grid, dtype=float), gamma.bend_times, [0.0]]))
    if np.any(times < 0):
        raise PreconditionError("grid must be non-negative")
    s = _radial_s(gamma.points(times))
    th_p = np.array([_theta(gamma.frame(t, "+")) for t in times])
    th_m = np.array([_theta(gamma.frame(t, "-")) for t in times])
    th_p[times == 0] = th_m[times == 0] = 0.0

    ode_s = np.empty_like(s)
    ode_th = np.empty_like(s)
    ode_s[0], ode_th[0] = 0.0, 0.0
    edges = np.concatenate([[0.0], gamma.bend_times, [math.inf]])
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        sel = np.flatnonzero((times > a) & (times <= b))
        if not sel.size:
            continue
        if i == 0:
            t0, y0 = ode_start, [ode_start, 0.0]
        else:
            j = int(np.searchsorted(times, a))
            t0, y0 = a, [s[j], th_p[j]]
        t_eval = times[sel]
        if y0[1] == 0.0:
            # radial segment: theta stays zero
            ode_s[sel] = y0[0] + (t_eval - t0)
            ode_th[sel] = 0.0
            continue
        sol = solve_ivp(_rhs, (t0, t_eval[-1]), y0, t_eval=t_eval, method="DOP853",
                        rtol=1e-12, atol=1e-13)
        ode_s[sel], ode_th[sel] = sol.y[0], sol.y[1]
    return ThetaProfile(sample_times=times, s_values=s, theta_plus=th_p,
                        theta_minus=th_m, ode_s=ode_s, ode_theta_minus=ode_th)


def _default_grid(gamma, L, n=200):
    return np.linspace(0.0, gamma.last_bend + L, n)


@dataclass
class HillReport:
    """Outcome of the angle bound ``theta+ <= Theta(L) + G(L)``.

    ``status`` is ``"ok"``, ``"violated"`` or ``"precondition"`` (roundness
    above ``G(L)``, so the bound makes no claim).
    """

    L: float
    roundness: float
    G: float
    bound: float
    max_theta_plus: float
    margin: float
    status: str

    def to_dict(self):
        return dict(self.__dict__)


def check_hill_bound(gamma, L, grid=None, slack=1e-9):
    sol = solve_tangent(L)
    G, bound = sol.g_value, sol.peak
    rho = roundness(gamma, L)
    prof = theta_s_profile(gamma, _default_grid(gamma, L) if grid is None else grid)
    top = float(np.max(prof.theta_plus))
    if rho > G:
        status = "precondition"
    else:
        status = "ok" if top <= bound + slack else "violated"
    return HillReport(L=L, roundness=rho, G=G, bound=bound, max_theta_plus=top,
                      margin=bound - top, status=status)


def _pairwise(P, Q):
    """Distance matrix between point sets ``(n, 4)`` and ``(m, 4)``."""
    # chord^2 = <p - q, p - q>; the form -2 - 2<p, q> loses every digit
    # once the coordinates reach 1e7 (about 17 from the base point)
    return hyp_distance(P[:, None, :], Q[None, :, :])


def _local_distances(gamma, ts, cells=250_000):
    """Yield ``(rows, D)`` with ``D[i, j] = d(gamma(ts[rows][i]), gamma(ts[j]))``.

    Each block of rows is measured in the frame at its middle sample;
    absolute hyperboloid coordinates grow like ``e^t`` and lose every
    digit of short chords once ``t`` is near 17.
    """
    n = len(ts)
    chunk = max(1, cells // n)
    for a in range(0, n, chunk):
        rows = slice(a, min(a + chunk, n))
        P = gamma.points(ts, base=ts[(rows.start + rows.stop - 1) // 2])
        yield rows, _pairwise(P[rows], P)


def check_embedding(gamma, resolution=1e-3, t_max=None):
    """Smallest distance between samples more than ``2 * resolution`` apart in ``t``.

    A positive value means no self-intersection was detected at this
    resolution; it is a sampled check, not a proof.
    """
    if not resolution > 0:
        raise PreconditionError("resolution must be positive")
    if t_max is None:
        t_max = gamma.last_bend + 1.0
    n = int(math.ceil(t_max / resolution)) + 1
    ts = np.linspace(0.0, t_max, n)
    window = 2.0 * resolution * (1 + 1e-9)
    best = math.inf
    for rows, D in _local_distances(gamma, ts):
        D[np.abs(ts[rows, None] - ts[None, :]) <= window] = math.inf
        best = min(best, float(D.min()))
    return best


@dataclass
class BilipReport:
    """Measured ``inf d(gamma(t1), gamma(t2)) / |t1 - t2|`` against ``sin^2(B/2)``."""

    L: float
    roundness: float
    B: float
    predicted: float
    measured: float
    status: str

    def to_dict(self):
        return dict(self.__dict__)


def bilipschitz_report(gamma, L, step=0.01, t_max=None, slack=1e-6):
    """Compare the sampled bilipschitz ratio with ``sin^2(B/2)``.

    ``B = (G(L) - roundness) / 2``.  Status ``"precondition"`` when the
    roundness is not below ``G(L)``.
    """
    G = solve_tangent(L).g_value
    rho = roundness(gamma, L)
    B = 0.5 * (G - rho)
    predicted = math.sin(0.5 * B) ** 2 if B > 0 else 0.0
    if t_max is None:
        t_max = gamma.last_bend + L
    n = int(math.ceil(t_max / step)) + 1
    ts = np.linspace(0.0, t_max, n)
    measured = math.inf
    for rows, D in _local_distances(gamma, ts):
        dt = np.abs(ts[rows, None] - ts[None, :])
        off = dt > 0
        measured = min(measured, float(np.min(D[off] / dt[off])))
    if rho >= G:
        status = "precondition"
    else:
        status = "ok" if measured >= predicted - slack else "violated"
    return BilipReport(L=L, roundness=rho, B=B, predicted=predicted,
                       measured=measured, status=status)


def horocycle_bend_angle(L):
    """``2 asin(tanh(L/2))``."""
    return 2.0 * math.asin(math.tanh(0.5 * L))


def _corner_angle(p, q, r):
    """Interior angle at ``q`` of the hyperbolic triangle ``p q r``."""
    vp = p + minkowski(p, q) * q
    vr = r + minkowski(r, q) * q
    npp = minkowski(vp, vp)
    c = minkowski(vp, vr)
    perp = vr - (c / npp) * vp
    # atan2 keeps small and near-straight angles accurate
    return math.atan2(math.sqrt(max(minkowski(perp, perp), 0.0) * npp), c)


def horocycle_polygon(L, n):
    """Geodesic polygon through ``n`` consecutive horocycle points ``L`` apart.

    The points ``(k * 2 sinh(L/2), 1)`` of the upper half-plane lie on the
    horocycle ``y = 1`` at consecutive distance ``L``; the bending angles
    are measured from them, not taken from the closed form.
    """
    if not L > 0:
        raise PreconditionError("L must be positive")
    if n < 3:
        raise PreconditionError("need at least three points")
    xs = 2.0 * math.sinh(0.5 * L) * np.arange(n)
    # measure each corner in coordinates centred on it (real translations
    # are isometries), which keeps the hyperboloid coordinates small
    angles, lengths = [], []
    for k in range(1, n):
        a, b = uhp_to_hyperboloid(np.array([xs[k - 1] - xs[k] + 1j, 1j]))
        lengths.append(hyp_distance(a, b))
        if k < n - 1:
            c = uhp_to_hyperboloid(xs[k + 1] - xs[k] + 1j)
            angles.append(math.pi - _corner_angle(a, b, c))
    times = np.cumsum(lengths)[:-1]
    return PiecewiseGeodesic(times, np.array(angles), None, 2)


@dataclass
class IsoscelesReport:
    """``sinh(l/2)`` against ``cos(theta)`` for the ideal isosceles triangle."""

    theta: float
    ell: float
    sinh_half: float
    cos_theta: float
    error: float
    angles_at_minimiser: tuple

    def to_dict(self):
        d = dict(self.__dict__)
        d["angles_at_minimiser"] = list(self.angles_at_minimiser)
        return d


def _dist_to_vertical(z, c):
    """Distance from ``z`` to the geodesic ``Re w = c``."""
    return math.asinh(abs(z.real - c) / z.imag)


def _line_angle(u, v):
    """Angle in ``[0, pi/2]`` between the lines spanned by complex ``u`` and ``v``."""
    a = abs(math.atan2((u.conjugate() * v).imag, (u.conjugate() * v).real))
    return min(a, math.pi - a)


def isosceles_identity(theta):
    """Minimise ``d(p, g_0) + d(p, g_k)`` over ``p`` on the base ``g_b``.

    In the upper half-plane the legs are ``Re w = -1`` and ``Re w = 1``
    (sharing the ideal vertex at infinity) and the base is the circle
    ``|w| = 1/cos(theta)``, which meets each leg at angle ``theta``.
    The minimum is found by golden-section search over the circle angle.
    """
    if not 0.0 < theta < 0.5 * math.pi:
        raise PreconditionError("theta must lie in (0, pi/2)")
    R = 1.0 / math.cos(theta)
    lo = math.acos(1.0 / R)  # where the base meets the right leg
    point = lambda psi: R * complex(math.cos(psi), math.sin(psi))
    cost = lambda psi: _dist_to_vertical(point(psi), -1.0) + _dist_to_vertical(point(psi), 1.0)
    try:
        res = minimize_scalar(cost, bracket=(lo, 0.5 * math.pi, math.pi - lo), method="golden",
                              tol=1e-12)
    except ValueError:
        # nearly flat base: the three bracket values tie in floating point
        res = minimize_scalar(cost, bounds=(lo, math.pi - lo), method="bounded",
                              options={"xatol": 1e-12})
    p = point(res.x)
    ell = float(res.fun)
    # perpendiculars to the legs are circles centred at -1 and 1; the base
    # tangent at p is orthogonal to p
    a0 = _line_angle(1j * p, 1j * (p + 1.0))
    a1 = _line_angle(1j * p, 1j * (p - 1.0))
    sh = math.sinh(0.5 * ell)
    return IsoscelesReport(theta=theta, ell=ell, sinh_half=sh, cos_theta=math.cos(theta),
                           error=abs(sh - math.cos(theta)), angles_at_minimiser=(a0, a1))


def _apex_angle(a, b, c):
    """Angle opposite side ``c`` in a triangle with sides ``a, b, c``."""
    # half-angle form: accurate for thin triangles
    h = 0.5 * (a + b + c)
    sin2 = math.sinh(max(h - a, 0.0)) * math.sinh(max(h - b, 0.0))
    cos2 = math.sinh(h) * math.sinh(max(h - c, 0.0))
    return 2.0 * math.atan2(math.sqrt(sin2), math.sqrt(cos2))


def planar_unroll(gamma, tail=1.0):
    """Planar curve with the same distance-from-start profile as ``gamma``.

    The triangles ``(gamma(0), gamma(t_i), gamma(t_{i+1}))`` are laid out
    in the plane around the base point, each on the far side of the
    previous one.  Along each segment the distance to the base point is a
    function of the triangle's side lengths only, so it is preserved.
    """
    if gamma.n_bends and gamma.bend_times[0] <= 0:
        raise PreconditionError("gamma(0) must not be a bend point")
    times = np.append(gamma.bend_times, gamma.last_bend + tail)
    s = _radial_s(gamma.points(times))
    seg = np.diff(np.concatenate([[0.0], times]))
    # the fan turns counterclockwise about the base point, which therefore
    # stays on the left; the interior angle at each vertex is the sum of
    # its two triangle angles
    angles, torsions = [], []
    prev_dir = 1.0
    for k in range(len(times) - 1):
        before = _apex_angle(s[k], seg[k], s[k - 1]) if k else 0.0
        after = _apex_angle(s[k], seg[k + 1], s[k + 1])
        bend = math.pi - (before + after)
        turn = 1.0 if bend >= 0 else -1.0
        angles.append(abs(bend))
        torsions.append(0.0 if turn == prev_dir else math.pi)
        prev_dir = turn
    return PiecewiseGeodesic(gamma.bend_times.copy(), np.array(angles),
                             np.array(torsions), 2)


def random_curve(rng, L, budget, dimension=2, max_bends=10):
    """Random piecewise geodesic with ``roundness(., L) == budget``.

    Bend count uniform in ``1..max_bends``; gaps exponential with mean
    ``L/2`` (the first gap too, so ``gamma(0)`` is not a bend); angles
    uniform then rescaled to the budget; torsions uniform in ``[0, 2 pi)``
    for ``dimension == 3`` and uniform in ``{0, pi}`` for planar curves.
    """
    n = int(rng.integers(1, max_bends + 1))
    times = np.cumsum(rng.exponential(0.5 * L, n) + 1e-9)
    raw = rng.uniform(0.0, 1.0, n) + 1e-12
    probe = PiecewiseGeodesic(times, raw / (raw.sum() + 1.0), None, 2)
    scale = budget / roundness(probe, L)
    angles = raw / (raw.sum() + 1.0) * scale
    if dimension == 3:
        tor = rng.uniform(0.0, 2 * math.pi, n)
    else:
        tor = math.pi * rng.integers(0, 2, n)
    return PiecewiseGeodesic(times, angles, tor, dimension)
