"""Schwarz-Christoffel maps from the upper half-plane onto generalized polygons.

The map is

    f(z) = A + C * integral_{x_1}^{z} prod_k (zeta - x_k)**(alpha_k - 1) dzeta

with real prevertices ``x_1 < ... < x_m`` for the finite vertices and the
vertex at infinity sent to the point at infinity.  Integrals are computed
with compound Gauss-Jacobi quadrature: a Jacobi rule absorbs the power
singularity at a prevertex endpoint, and the path is cut so that no piece
is longer than half its distance to any other singularity.

The parameter problem matches side lengths.  Along the real segment
``(x_k, x_{k+1})`` the integrand has constant argument, so every
condition reduces to the real equation ``|C| M_k = |w_{k+1} - w_k|``
with ``M_k`` the integral of ``prod |zeta - x_i|**beta_i``.  It is solved
by damped Newton with an analytic Jacobian in log-gap coordinates.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import json
import math
import warnings

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.special import roots_jacobi, roots_legendre

from .errors import ConvergenceError, PreconditionError
from .region import GeneralizedPolygon

__all__ = [
    "SCMap",
    "CrowdingWarning",
    "solve_parameters",
    "sc_forward",
    "sc_deriv",
    "sc_inverse",
    "sc_integral",
]


class CrowdingWarning(UserWarning):
    """Adjacent prevertices are closer than the crowding threshold."""


CROWDING_GAP = 1e-12


@lru_cache(maxsize=None)
def _jacobi(n, beta):
    """Gauss-Jacobi rule on ``[0, 1]`` for the weight ``u**beta``."""
    t, w = roots_jacobi(n, 0.0, beta)
    # (1 + t)^beta dt on [-1,1] -> u^beta du on [0,1] with u = (1+t)/2
    return (t + 1.0) / 2.0, w / 2.0 ** (1.0 + beta)


@lru_cache(maxsize=None)
def _legendre(n):
    t, w = roots_legendre(n)
    return (t + 1.0) / 2.0, w / 2.0


def _offsets(gaps):
    """``R[k, j] = x_j - x_k`` summed from the gaps outward from ``x_k``.

    Summing locally keeps the distance between nearby prevertices exact to
    rounding even when the prevertices themselves are large.
    """
    m = len(gaps) + 1
    R = np.zeros((m - 1, m))
    for k in range(m - 1):
        R[k, k + 1:] = np.cumsum(gaps[k:])
        if k:
            R[k, :k] = -np.cumsum(gaps[k - 1::-1])[::-1]
    return R


def _piece_bounds(gap_out, delta):
    """Cut points on the left half ``[0, 1/2]`` of a side of length ``delta``.

    The first (Jacobi) piece is at most half the distance to the outside
    neighbour ``gap_out``; every later piece is at most half its distance
    to the side's own endpoint, so pieces grow geometrically.
    """
    if not (gap_out > 0 and delta > 0):
        raise PreconditionError("prevertices must be strictly increasing")
    half = 0.5
    pos = min(half, 0.5 * gap_out / delta)
    cuts = [0.0, pos]
    while pos < half:
        pos = min(half, 1.5 * pos)
        cuts.append(pos)
    return cuts


class _SideQuadrature:
    """Quadrature nodes for all finite sides on the real axis.

    Node ``n`` sits at ``u_n`` in ``[0, 1]`` along side ``side[n]``; the
    effective weight ``omega_n`` already divides out the Jacobi weight, so
    that ``M_k = delta_k * sum omega_n F(zeta_n)`` with
    ``F = prod |zeta - x_i|**beta_i``.
    """

    def __init__(self, x, beta, order):
        m = len(x)
        gaps = np.diff(x)
        sides, us, ws = [], [], []
        for k in range(m - 1):
            delta = gaps[k]
            gl = gaps[k - 1] if k > 0 else math.inf
            gr = gaps[k + 1] if k + 1 < m - 1 else math.inf
            for end, g, b in ((0, gl, beta[k]), (1, gr, beta[k + 1])):
                cuts = _piece_bounds(g, delta)
                for p in range(len(cuts) - 1):
                    a, c = cuts[p], cuts[p + 1]
                    h = c - a
                    if p == 0:
                        uu, ww = _jacobi(order, float(b))
                        loc = a + h * uu
                        # weight u^b was integrated exactly; divide it back out
                        wt = ww * h ** (1.0 + b) / loc ** b
                    else:
                        uu, ww = _legendre(order)
                        loc = a + h * uu
                        wt = ww * h
                    u = loc if end == 0 else 1.0 - loc
                    sides.append(np.full(order, k))
                    us.append(u)
                    ws.append(wt)
        self.side = np.concatenate(sides)
        self.u = np.concatenate(us)
        self.w = np.concatenate(ws)
        order_idx = np.argsort(self.side, kind="stable")
        self.side, self.u, self.w = self.side[order_idx], self.u[order_idx], self.w[order_idx]
        self.starts = np.searchsorted(self.side, np.arange(m - 1))


def _side_integrals(x, beta, order, with_jacobian=False, gaps=None):
    """``log M_k`` for every finite side and optionally ``d log M_k / d x_j``.

    ``gaps`` (default ``diff(x)``) are used for all node-to-prevertex
    distances, so the result only depends on ``x`` through them.
    """
    m = len(x)
    if gaps is None:
        gaps = np.diff(x)
    gaps = np.asarray(gaps, dtype=float)
    quad = _SideQuadrature(np.concatenate([[0.0], np.cumsum(gaps)]), beta, order)
    R = _offsets(gaps)
    k = quad.side
    delta = gaps[k]
    N = len(k)
    step = max(1, 4_000_000 // m)
    logF = np.empty(N)
    S = np.empty(N) if with_jacobian else None
    blocks = []
    for s in range(0, N, step):
        sl = slice(s, s + step)
        kk = k[sl]
        # zeta - x_j for nodes zeta = x_k + delta u
        diff = (delta[sl] * quad.u[sl])[:, None] - R[kk]
        rows = np.arange(len(kk))
        diff[rows, kk] = delta[sl] * quad.u[sl]
        diff[rows, kk + 1] = -delta[sl] * (1 - quad.u[sl])
        logF[sl] = np.log(np.abs(diff)) @ beta
        if with_jacobian:
            inv = beta[None, :] / diff
            S[sl] = inv.sum(axis=1)
            blocks.append((sl, kk, rows, -inv))
    shift = np.full(m - 1, -np.inf)
    np.maximum.at(shift, k, logF)
    vals = quad.w * np.exp(logF - shift[k]) * delta
    sums = np.add.reduceat(vals, quad.starts)
    logM = np.log(sums) + shift
    if not with_jacobian:
        return logM
    p = vals / sums[k]  # normalised node contributions per side
    jac = np.zeros((m - 1, m))
    for sl, kk, rows, D in blocks:
        P = sparse.csr_matrix((p[sl], (kk, rows)), shape=(m - 1, len(kk)))
        jac += P @ D
    du = p * (-1.0 / delta + (1 - quad.u) * S)
    dv = p * (1.0 / delta + quad.u * S)
    np.add.at(jac, (k, k), du)
    np.add.at(jac, (k, k + 1), dv)
    return logM, jac


@dataclass
class SCMap:
    """Solved Schwarz-Christoffel map from the upper half-plane to a polygon.

    Attributes
    ----------
    polygon : GeneralizedPolygon
    prevertices : ndarray
        Real prevertices of the finite vertices, strictly ascending.
    angle_params : ndarray
        Finite-vertex angle parameters (interior angle / pi).
    affine_scale : complex
        ``C``.
    affine_shift : complex
        ``A``, the image of the first prevertex.
    quad_order : int
    accuracy : float
        Max distance between the computed images of the prevertices and
        the polygon vertices.
    residual : float
        Max-norm of the side-length residual (relative, log scale).
    vertex_images : ndarray
        Images of the prevertices obtained by summing side integrals.
    """

    polygon: GeneralizedPolygon
    prevertices: np.ndarray
    angle_params: np.ndarray
    affine_scale: complex
    affine_shift: complex
    quad_order: int
    accuracy: float
    residual: float = 0.0
    vertex_images: np.ndarray = field(default=None, repr=False)
    iterations: int = 0
    pinned: tuple = (0, 1)

    @property
    def beta(self):
        return self.angle_params - 1.0

    @property
    def vertices(self):
        return self.polygon.finite_vertices

    def forward(self, z):
        return sc_forward(self, z)

    def inverse(self, w, tol=1e-12):
        return sc_inverse(self, w, tol)

    def to_dict(self):
        return {
            "type": "SCMap",
            "polygon": self.polygon.to_dict(),
            "prevertices": [float(v) for v in self.prevertices],
            "angle_params": [float(a) for a in self.angle_params],
            "affine_scale": [self.affine_scale.real, self.affine_scale.imag],
            "affine_shift": [self.affine_shift.real, self.affine_shift.imag],
            "quad_order": int(self.quad_order),
            "accuracy": float(self.accuracy),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "pinned": list(self.pinned),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        poly = GeneralizedPolygon.from_dict(d["polygon"])
        out = cls(polygon=poly,
                  prevertices=np.asarray(d["prevertices"], dtype=float),
                  angle_params=np.asarray(d["angle_params"], dtype=float),
                  affine_scale=complex(*d["affine_scale"]),
                  affine_shift=complex(*d["affine_shift"]),
                  quad_order=int(d["quad_order"]),
                  accuracy=float(d["accuracy"]),
                  residual=float(d.get("residual", 0.0)),
                  iterations=int(d.get("iterations", 0)),
                  pinned=tuple(d.get("pinned", (0, 1))))
        out.vertex_images = _vertex_images(out.prevertices, out.beta, out.quad_order,
                                           out.affine_scale, out.affine_shift)
        return out

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _phases(beta):
    """Argument of the integrand on side ``k``: ``pi * sum_{i>k} beta_i``."""
    tail = np.cumsum(beta[::-1])[::-1]  # tail[k] = sum_{i>=k} beta_i
    return math.pi * tail[1:]


def _vertex_images(x, beta, order, C, A, gaps=None):
    logM = _side_integrals(x, beta, order, gaps=gaps)
    steps = C * np.exp(1j * _phases(beta)) * np.exp(logM)
    return A + np.concatenate([[0.0], np.cumsum(steps)])


def _initial_guess(w, alpha):
    """Prevertex guess from the polygon: horizontal gaps follow the side
    lengths, sides next to a reflex/convex corner pair are shrunk."""
    lengths = np.abs(np.diff(w))
    gaps = lengths.copy()
    # a short side between turns of opposite sign is a step; its preimage is
    # roughly 2/pi times as long
    turn = 1.0 - alpha
    steps = (turn[:-1] * turn[1:]) < 0
    gaps[steps] *= 2.0 / math.pi
    return np.concatenate([[0.0], np.cumsum(gaps)])


def _gaps_from_params(y, pin):
    return np.insert(np.exp(y), pin, 1.0)


def _x_from_params(y, pin, m):
    """Prevertices from log-gaps ``y`` (length m-2) with ``x_pin = -1, x_{pin+1} = 0``."""
    gaps = _gaps_from_params(y, pin)
    x = np.concatenate([[0.0], np.cumsum(gaps)])
    return x - x[pin + 1]


def _param_jacobian(y, pin, m):
    """``d x_i / d y_j`` for the log-gap parameterisation."""
    g = np.exp(y)
    T = np.zeros((m, m - 2))
    # gap index j (0..m-2, skipping pin) separates x_j and x_{j+1}
    gap_ids = [j for j in range(m - 1) if j != pin]
    for col, j in enumerate(gap_ids):
        if j > pin:
            T[j + 1:, col] = g[col]
        else:
            T[:j + 1, col] = -g[col]
    return T


def solve_parameters(polygon, quad_order=8, tol=1e-10, pinned=None, max_iter=200,
                     initial=None):
    """Solve the side-length parameter problem for ``polygon``.

    Parameters
    ----------
    polygon : GeneralizedPolygon
        Polygon with one vertex at infinity and at least two finite vertices.
    quad_order : int
        Gauss-Jacobi nodes per quadrature piece.
    tol : float
        Target max-norm of the relative side-length residual.
    pinned : int, optional
        Index ``p`` of the finite prevertex pinned at ``-1``; prevertex
        ``p + 1`` is pinned at ``0``.  Different choices give maps that
        differ by an automorphism of the half-plane fixing infinity.
        Defaults to the middle pair, which keeps the prevertices of a
        symmetric staircase near the origin where their small gaps are
        resolved in floating point.
    initial : array_like, optional
        Starting prevertices (any affine normalisation).

    Raises
    ------
    PreconditionError
        For fewer than two finite vertices or an invalid angle sum.
    ConvergenceError
        If Newton's method stalls or hits ``max_iter``.
    """
    w = polygon.finite_vertices
    alpha = polygon.finite_angles
    m = len(w)
    if m < 2:
        raise PreconditionError("need at least two finite vertices")
    if abs(polygon.angle_sum_defect()) > 1e-9:
        raise PreconditionError("angle parameters must sum to n - 2")
    if pinned is None:
        pinned = max(0, m // 2 - 1)
    if not 0 <= pinned < m - 1:
        raise PreconditionError(f"pinned index must be in [0, {m - 2}]")
    beta = alpha - 1.0
    lengths = np.abs(np.diff(w))
    if np.any(lengths <= 0):
        raise PreconditionError("polygon has a zero-length side")
    log_len = np.log(lengths)

    x0 = _initial_guess(w, alpha) if initial is None else np.asarray(initial, dtype=float)
    x0 = (x0 - x0[pinned + 1]) / (x0[pinned + 1] - x0[pinned])
    gaps0 = np.diff(x0)
    y = np.log(np.delete(gaps0, pinned))
    # log|C| from the guess: match the total length
    logM = _side_integrals(x0, beta, quad_order)
    logC = float(np.median(log_len - logM))
    params = np.append(y, logC)

    def residual(prm, jac=False):
        x = _x_from_params(prm[:-1], pinned, m)
        g = _gaps_from_params(prm[:-1], pinned)
        if jac:
            lm, J = _side_integrals(x, beta, quad_order, with_jacobian=True, gaps=g)
            Jy = J @ _param_jacobian(prm[:-1], pinned, m)
            return prm[-1] + lm - log_len, np.hstack([Jy, np.ones((m - 1, 1))])
        return prm[-1] + _side_integrals(x, beta, quad_order, gaps=g) - log_len

    r, J = residual(params, jac=True)
    norm = np.max(np.abs(r))
    it = 0
    while norm >= tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"SC parameter problem did not converge in {max_iter} iterations "
                f"(residual {norm:.3e})", residual=r)
        it += 1
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
        # cap log-gap changes to keep the ordering well scaled
        big = np.max(np.abs(step))
        if big > 2.0:
            step *= 2.0 / big
        lam = 1.0
        while True:
            trial = params + lam * step
            r_new = residual(trial)
            n_new = np.max(np.abs(r_new))
            if np.isfinite(n_new) and (n_new < norm or lam < 1e-4):
                break
            lam *= 0.5
        if not np.isfinite(n_new) or (n_new >= norm and lam < 1e-4):
            raise ConvergenceError(
                f"SC Newton iteration stalled at residual {norm:.3e}", residual=r)
        params = trial
        r, J = residual(params, jac=True)
        norm = np.max(np.abs(r))

    x = _x_from_params(params[:-1], pinned, m)
    gaps = np.diff(x)
    if np.min(gaps) < CROWDING_GAP:
        warnings.warn(f"prevertex crowding: smallest gap {np.min(gaps):.2e}",
                      CrowdingWarning, stacklevel=2)
    phase0 = _phases(beta)[0]
    C = math.exp(params[-1]) * np.exp(1j * (np.angle(w[1] - w[0]) - phase0))
    A = complex(w[0])
    images = _vertex_images(x, beta, quad_order, C, A,
                            gaps=_gaps_from_params(params[:-1], pinned))
    accuracy = float(np.max(np.abs(images - w)))
    return SCMap(polygon=polygon, prevertices=x, angle_params=alpha.copy(),
                 affine_scale=complex(C), affine_shift=A, quad_order=quad_order,
                 accuracy=accuracy, residual=float(norm), vertex_images=images,
                 iterations=it, pinned=(pinned, pinned + 1))


def _integrand(zeta, x, beta):
    """``prod (zeta - x_i)**beta_i`` with the principal branch (upper half-plane)."""
    diff = np.asarray(zeta, dtype=complex)[..., None] - x
    # points on the real axis belong to the closure of the upper half-plane:
    # a signed-zero imaginary part must not flip the argument to -pi
    logd = np.log(np.abs(diff)) + 1j * np.abs(np.angle(diff))
    return np.exp(logd @ beta)


def _path_nodes(z_start, k_start, z_end, x, beta, order):
    """Compound nodes and weights for ``integral_{z_start}^{z_end} F``.

    ``z_start`` may be the prevertex ``x[k_start]`` (``k_start`` not None),
    in which case the first piece uses a Jacobi rule for its singularity.
    Returns nodes, weights multiplying ``F`` and, for the Jacobi piece, the
    weights with the singular factor divided out.
    """
    length = abs(z_end - z_start)
    if length == 0:
        return np.empty(0, complex), np.empty(0, complex)
    direction = (z_end - z_start) / length
    nodes, weights = [], []
    pos = 0.0
    others = x if k_start is None else np.delete(x, k_start)
    if k_start is not None:
        dmin = np.min(np.abs(others - z_start)) if len(others) else math.inf
        h = min(length, 0.5 * dmin)
        b = float(beta[k_start])
        uu, ww = _jacobi(order, b)
        nodes.append(z_start + direction * h * uu)
        # F carries (zeta - x_k)^b = (h u)^b e^{i b arg(direction)}; the Jacobi
        # rule already integrated u^b, so divide the u^b part back out
        weights.append(direction * h * ww / uu ** b)
        pos = h
    while pos < length * (1 - 1e-15):
        p = z_start + direction * pos
        dmin = np.min(np.abs(x - p))
        h = min(length - pos, 0.5 * dmin)
        if h <= 1e-15 * length:
            h = length - pos
        uu, ww = _legendre(order)
        nodes.append(p + direction * h * uu)
        weights.append(direction * h * ww.astype(complex))
        pos += h
    return np.concatenate(nodes), np.concatenate(weights)


def sc_integral(scmap, z_start, z_end, k_start=None):
    """``integral F`` from ``z_start`` (optionally prevertex ``k_start``) to ``z_end``."""
    x, beta = scmap.prevertices, scmap.beta
    nodes, wts = _path_nodes(complex(z_start), k_start, complex(z_end), x, beta,
                             scmap.quad_order)
    if len(nodes) == 0:
        return 0j
    return complex(np.sum(wts * _integrand(nodes, x, beta)))


def _nearest_prevertex(scmap, z):
    return int(np.argmin(np.abs(scmap.prevertices - z)))


def sc_forward(scmap, z):
    """Image ``f(z)`` of a point in the closed upper half-plane.

    Integrates from the nearest prevertex whose image is known.  Accepts a
    scalar or an array; ``z = inf`` is rejected.
    """
    if np.ndim(z):
        return np.array([sc_forward(scmap, v) for v in np.ravel(z)]).reshape(np.shape(z))
    z = complex(z)
    if not np.isfinite(z):
        raise PreconditionError("cannot evaluate the map at the infinite prevertex")
    if z.imag < 0:
        raise PreconditionError(f"point {z!r} is below the real axis")
    k = _nearest_prevertex(scmap, z)
    base = scmap.vertex_images[k]
    if z == scmap.prevertices[k]:
        return complex(base)
    return complex(base + scmap.affine_scale * sc_integral(scmap, scmap.prevertices[k], z, k))


def sc_forward_via(scmap, z, waypoint):
    """``f(z)`` integrated along a two-leg path through ``waypoint``."""
    mid = sc_forward(scmap, waypoint)
    return complex(mid + scmap.affine_scale * sc_integral(scmap, waypoint, z))


def sc_deriv(scmap, z):
    """``f'(z) = C prod (z - x_k)**beta_k``."""
    return complex(scmap.affine_scale * _integrand(np.array([complex(z)]),
                                                    scmap.prevertices, scmap.beta)[0])


def _segment_hits_boundary(polygon, w0, w1):
    """True if the open segment ``[w0, w1]`` meets the polygon boundary."""
    edges = polygon.edges()
    p, r = w0, w1 - w0
    a, b = edges[:, 0], edges[:, 1]
    s = b - a
    cross = lambda u, v: u.real * v.imag - u.imag * v.real
    den = cross(r, s)
    q = a - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross(q, s) / den
        u = cross(q, r) / den
    hit = (np.abs(den) > 0) & (t > 1e-12) & (t < 1 - 1e-12) & (u >= 0) & (u <= 1)
    if np.any(hit):
        return True
    for v, d in polygon.rays():
        den = cross(r, d)
        if den == 0:
            continue
        q = v - p
        t = cross(q, d) / den
        u = cross(q, r) / den
        if 1e-12 < t < 1 - 1e-12 and u >= 0:
            return True
    return False


def _newton(scmap, w, z, tol, max_iter=50):
    for _ in range(max_iter):
        fz = sc_forward(scmap, z)
        err = fz - w
        if abs(err) < tol:
            # one more step costs little and removes the conditioning loss
            # where |f'| is small
            z1 = z - err / sc_deriv(scmap, z)
            e1 = abs(sc_forward(scmap, z1) - w) if z1.imag > 0 else math.inf
            return (z1, e1) if e1 <= abs(err) else (z, abs(err))
        dz = -err / sc_deriv(scmap, z)
        lam = 1.0
        while z.imag + lam * dz.imag <= 0:
            lam *= 0.5
        z = z + lam * dz
    fz = sc_forward(scmap, z)
    return z, abs(fz - w)


def _far_anchor(scmap, w):
    """A preimage of ``w + i Y`` far above the polygon, found by Newton."""
    verts = scmap.vertices
    span = float(np.max(np.abs(verts - verts[0]))) + 1.0
    # far field: f(z) ~ C z + B
    zf = complex(np.mean(scmap.prevertices), 4.0 * (np.ptp(scmap.prevertices) + 1.0))
    B = sc_forward(scmap, zf) - scmap.affine_scale * zf
    target = w + 1j * 2.0 * span
    z0 = (target - B) / scmap.affine_scale
    if z0.imag <= 0:
        z0 = complex(z0.real, abs(z0.imag) + 1.0)
    z0, err = _newton(scmap, target, z0, 1e-10 * span)
    return z0, sc_forward(scmap, z0)


def _candidate_anchors(scmap, w):
    yield _far_anchor(scmap, w)
    x = scmap.prevertices
    mids = 0.5 * (x[1:] + x[:-1]) + 1j * 0.5 * np.diff(x)
    imgs = [(abs(sc_forward(scmap, z) - w), z) for z in mids]
    for _, z in sorted(imgs, key=lambda t: t[0])[:8]:
        yield z, sc_forward(scmap, z)


def sc_inverse(scmap, w, tol=1e-12):
    """Preimage of an interior point ``w``.

    Integrates ``dz/dt = (w - w0) / f'(z)`` from an anchor whose straight
    segment to ``w`` stays inside the polygon, then polishes with Newton.
    """
    if np.ndim(w):
        return np.array([sc_inverse(scmap, v, tol) for v in np.ravel(w)]).reshape(np.shape(w))
    w = complex(w)
    best = None
    for z0, w0 in _candidate_anchors(scmap, w):
        if _segment_hits_boundary(scmap.polygon, w0, w):
            continue
        dw = w - w0

        def rhs(t, y):
            z = complex(y[0], y[1])
            v = dw / sc_deriv(scmap, z)
            return [v.real, v.imag]

        sol = solve_ivp(rhs, (0.0, 1.0), [z0.real, z0.imag], rtol=1e-8, atol=1e-10)
        if not sol.success:
            continue
        z = complex(sol.y[0, -1], sol.y[1, -1])
        if z.imag <= 0:
            z = complex(z.real, 1e-3 * (abs(z) + 1e-3))
        z, err = _newton(scmap, w, z, tol)
        if err < tol and z.imag > 0:
            return z
        if best is None or err < best[1]:
            best = (z, err)
    raise ConvergenceError(
        f"inverse SC map failed at w={w!r}"
        + (f" (best residual {best[1]:.2e})" if best else ""),
        residual=None if best is None else best[1])
