"""Certified staircase approximation of the parameter region from inside.

The region is ``{x + iy : y > -Q(L, x)}``.  A step function
``s(x) <= Q(L, x)`` supported on ``[-a, a]`` gives a polygonal subregion
``{y > -s(x)}`` bounded by the real axis outside ``[-a, a]`` and by the
staircase graph of ``-s`` inside.
"""

from dataclasses import dataclass
import json
import math

import numpy as np

from .bendbounds import ceil_branch, g_small, g_shear, jump_abscissa, q_bound, q_profile
from .errors import CertificateError, PreconditionError
from .specialfn import g_func

__all__ = [
    "StepFunction",
    "GeneralizedPolygon",
    "build_step",
    "polygon_from_step",
    "truncate_down",
    "default_half_width",
    "DIGITS",
    "MERGE_TOL",
]

DIGITS = 12
MERGE_TOL = 1e-13


def truncate_down(v, digits=DIGITS):
    """Truncate ``v >= 0`` downward to ``digits`` decimals."""
    scale = 10.0 ** digits
    t = math.floor(v * scale) / scale
    # floor of a product can round up by an ulp; step down if so
    return t if t <= v else math.nextafter(t, -math.inf)


def default_half_width(L, level=3e-2):
    """Smallest integer ``a`` with ``Q(L, a) < level``."""
    G = g_func(L)
    k = math.floor(G / level) + 1
    a = max(1, math.floor(jump_abscissa(L, k - 1)) + 1)
    while q_bound(L, a) >= level:
        a += 1
    return float(a)


@dataclass(frozen=True)
class StepFunction:
    """Even, piecewise-constant lower bound ``s(x) <= Q(L, x)``.

    ``values[j]`` is the value on ``[breakpoints[j], breakpoints[j + 1]]``;
    ``s`` vanishes outside ``[-half_width, half_width]``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    half_width: float
    L: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        j = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (x >= self.breakpoints[0]) & (x <= self.breakpoints[-1])
        j = np.clip(j, 0, len(self.values) - 1)
        out = np.where(inside, self.values[j], 0.0)
        return float(out) if out.ndim == 0 else out

    @property
    def n_intervals(self):
        return len(self.values)

    def min_on(self, a0):
        """Minimum of ``s`` over ``[-a0, a0]``."""
        lo = np.searchsorted(self.breakpoints, -a0, side="right") - 1
        hi = np.searchsorted(self.breakpoints, a0, side="left")
        return float(np.min(self.values[max(lo, 0):hi]))


def _half_partition(L, half_width, samples_per_branch, origin_gap=5e-4):
    """Breakpoints of ``[0, half_width]`` used by :func:`build_step`.

    Uniform samples on the shear-dominated span, every ceiling jump and
    crossover bracket, and a geometric refinement of the first cell until
    ``Q`` drops by less than ``origin_gap`` across it.
    """
    prof = q_profile(L, half_width)
    jumps = prof.jump_abscissas
    cross = [iv[1] for iv in prof.crossover_intervals]
    # the shear branch dominates up to the last crossover (or a fixed span)
    x_shear = min(max(cross) if cross else 2.0 * L, half_width)
    uniform = np.linspace(0.0, x_shear, samples_per_branch + 1)
    pts = np.concatenate([[0.0, half_width], jumps, cross, uniform])
    pts = np.unique(pts[(pts >= 0.0) & (pts <= half_width)])
    q0 = q_bound(L, 0.0)
    extra = []
    x1 = pts[1]
    while q0 - q_bound(L, x1) > origin_gap:
        x1 *= 0.5
        extra.append(x1)
    return np.unique(np.concatenate([pts, extra]))


def build_step(L, half_width=None, samples_per_branch=64, verify_points=20001):
    """Certified step function ``s <= Q(L, .)`` on ``[-half_width, half_width]``.

    The positive half-line is cut at every ceiling jump of ``Q``, at the
    crossover brackets of the two branches, at ``samples_per_branch``
    uniform points on the shear-dominated span, and at a few halvings of
    the first cell so that ``s(0)`` sits within ``5e-4`` of ``G(L)``.
    Both branches are non-increasing on ``[0, inf)``, so on each cell ``[x_j, x_{j+1}]``
    the value ``Q(L, x_{j+1})`` is a lower bound; it is truncated downward
    to 12 decimals.  The result is mirrored to negative ``x``.

    Parameters
    ----------
    L : float
    half_width : float, optional
        Defaults to :func:`default_half_width`.
    samples_per_branch : int
        Number of cells on the shear-dominated span near zero.
    verify_points : int
        Size of the uniform grid on which the certificate is spot-checked.

    Raises
    ------
    CertificateError
        If a grid point has ``s(x) > Q(L, x)``.
    """
    if not L > 0:
        raise PreconditionError(f"L must be positive, got {L!r}")
    if samples_per_branch < 1:
        raise PreconditionError("samples_per_branch must be positive")
    if half_width is None:
        half_width = default_half_width(L)
    G = g_func(L)

    pts = _half_partition(L, half_width, samples_per_branch)
    right = pts[1:]
    vals = np.maximum(ceil_branch(L, right, G),
                      g_small(g_shear(L, right)))
    vals = np.array([truncate_down(v) for v in vals])
    if np.any(vals <= 0):
        raise PreconditionError("half_width too large: step value truncated to zero")

    # merge cells whose values agree to the merge tolerance
    keep = np.ones(len(vals), dtype=bool)
    keep[1:] = np.diff(vals) != 0.0
    # a merged cell takes the value of its right end, which is the smaller
    starts = np.flatnonzero(keep)
    ends = np.append(starts[1:], len(vals)) - 1
    half_vals = vals[ends]
    half_bp = np.append(pts[starts], pts[-1])

    # mirror: [0, b1, ..., a] -> [-a, ..., -b1, b1, ..., a], centre cell shared
    bp = np.concatenate([-half_bp[:0:-1], half_bp[1:]])
    values = np.concatenate([half_vals[:0:-1], half_vals])
    step = StepFunction(breakpoints=bp, values=values, half_width=float(half_width), L=float(L))
    if verify_points:
        _verify_certificate(step, verify_points)
    return step


def _verify_certificate(step, n):
    xs = np.linspace(-step.half_width, step.half_width, n)
    xs = np.concatenate([xs, step.breakpoints])
    s = step(xs)
    q = q_bound(step.L, xs)
    bad = np.flatnonzero(s > q)
    if bad.size:
        x = float(xs[bad[0]])
        raise CertificateError(f"step function exceeds Q at x={x!r}", where=x)


@dataclass(frozen=True)
class GeneralizedPolygon:
    """Polygon with one vertex at infinity, listed with interior on the left.

    ``vertices`` holds complex coordinates with ``inf_index`` marking the
    vertex at infinity (stored as ``complex(inf, inf)``).  ``angle_params``
    are interior angles divided by pi.
    """

    vertices: np.ndarray
    angle_params: np.ndarray
    inf_index: int

    @property
    def n(self):
        return len(self.vertices)

    @property
    def finite_vertices(self):
        """Finite vertices in boundary order, starting after the infinite one."""
        order = np.roll(np.arange(self.n), -(self.inf_index + 1))[:-1]
        return self.vertices[order]

    @property
    def finite_angles(self):
        order = np.roll(np.arange(self.n), -(self.inf_index + 1))[:-1]
        return self.angle_params[order]

    def angle_sum_defect(self):
        return float(np.sum(self.angle_params) - (self.n - 2))

    def edges(self):
        """Finite edges as an ``(m-1, 2)`` complex array."""
        w = self.finite_vertices
        return np.stack([w[:-1], w[1:]], axis=1)

    def rays(self):
        """The two infinite edges as ``(vertex, direction)`` pairs.

        The incoming ray arrives at the first finite vertex, the outgoing
        ray leaves the last one; directions follow from the angle sum.
        """
        w, a = self.finite_vertices, self.finite_angles
        d_first = w[1] - w[0]
        # turning at vertex k is pi (1 - alpha_k)
        d_in = d_first / abs(d_first) * np.exp(-1j * math.pi * (1 - a[0]))
        d_last = w[-1] - w[-2]
        d_out = d_last / abs(d_last) * np.exp(1j * math.pi * (1 - a[-1]))
        return (w[0], -d_in), (w[-1], d_out)

    def to_dict(self):
        fin = self.finite_vertices
        return {
            "type": "GeneralizedPolygon",
            "inf_index": int(self.inf_index),
            "vertices": [None if i == self.inf_index else [float(v.real), float(v.imag)]
                         for i, v in enumerate(self.vertices)],
            "angle_params": [float(a) for a in self.angle_params],
            "n_finite": int(len(fin)),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        verts = np.array([complex(math.inf, math.inf) if v is None else complex(v[0], v[1])
                          for v in d["vertices"]])
        return cls(vertices=verts, angle_params=np.asarray(d["angle_params"], dtype=float),
                   inf_index=int(d["inf_index"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_finite(cls, finite_vertices, finite_angles):
        """Append the infinite vertex after the finite chain."""
        fin = np.asarray(finite_vertices, dtype=complex)
        ang = np.asarray(finite_angles, dtype=float)
        a_inf = (len(fin) + 1 - 2) - float(np.sum(ang))
        return cls(vertices=np.append(fin, complex(math.inf, math.inf)),
                   angle_params=np.append(ang, a_inf), inf_index=len(fin))


def polygon_from_step(step):
    """Generalized polygon bounded by the graph of ``-s`` and the real axis.

    Boundary order: infinite vertex, ``(-a, 0)``, the staircase corners
    from left to right, ``(a, 0)``; the region lies above.  Corners where
    the boundary turns right get ``alpha = 3/2``, left turns ``1/2``, and
    the infinite vertex takes ``-1`` so that the angles sum to ``n - 2``.
    """
    bp, vals = step.breakpoints, step.values
    # merge near-equal neighbours; the merged cell takes the smaller value
    keep = np.ones(len(vals), dtype=bool)
    keep[1:] = np.abs(np.diff(vals)) >= MERGE_TOL
    starts = np.flatnonzero(keep)
    vals = np.minimum.reduceat(vals, starts)
    bp = np.append(bp[starts], bp[-1])

    pts, angles = [], []
    heights = np.concatenate([[0.0], vals, [0.0]])
    for j in range(len(bp)):
        y0, y1 = -heights[j], -heights[j + 1]
        down = y1 < y0
        pts += [complex(bp[j], y0), complex(bp[j], y1)]
        angles += [1.5, 0.5] if down else [0.5, 1.5]
    return GeneralizedPolygon.from_finite(pts, angles)
