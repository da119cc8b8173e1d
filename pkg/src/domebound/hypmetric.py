"""Poincare distance in the upper half-plane and in mapped polygons.

Besides the distance pulled back through a Schwarz-Christoffel map, two
closed-form oracles bracket it by domain monotonicity: a lower half-plane
``{y > -m}`` contains the polygon (lower bound), and a half-strip
``{|x| < a, y > -q0}`` sits inside it (upper bound).
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import CertificateError, PreconditionError
from .scmap import sc_inverse

__all__ = [
    "DistanceCertificate",
    "d_uhp",
    "domain_distance",
    "halfplane_distance",
    "halfstrip_distance",
    "strip_parameters",
    "certify_distance",
]


@dataclass(frozen=True)
class DistanceCertificate:
    """A polygon distance with its analytic sandwich.

    Attributes
    ----------
    value : float
        Distance in the approximating polygon.
    lower_bound : float
        Distance in a half-plane containing the polygon.
    upper_bound : float
        Distance in a half-strip contained in the polygon.
    map_accuracy : float
        Vertex reproduction error of the conformal map used for ``value``.
    strip : tuple of float
        ``(a0, q0)`` of the half-strip.
    """

    value: float
    lower_bound: float
    upper_bound: float
    map_accuracy: float
    strip: tuple = (math.nan, math.nan)

    @property
    def holds(self):
        vals = (self.value, self.lower_bound, self.upper_bound)
        return all(math.isfinite(v) for v in vals) and \
            self.lower_bound <= self.value <= self.upper_bound

    def to_dict(self):
        d = asdict(self)
        d["strip"] = list(self.strip)
        d["holds"] = self.holds
        return d


def d_uhp(z, w):
    """Hyperbolic distance ``acosh(1 + |z - w|^2 / (2 Im z Im w))``.

    Vectorised over broadcastable inputs.  The argument of ``acosh`` is
    clamped at one so coincident points give exactly zero.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(z.imag <= 0) or np.any(w.imag <= 0):
        raise PreconditionError("points must lie strictly in the upper half-plane")
    arg = 1.0 + np.abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
    out = np.arccosh(np.maximum(arg, 1.0))
    return float(out) if out.ndim == 0 else out


def domain_distance(scmap, p, q, tol=1e-12):
    """Distance between interior points ``p`` and ``q`` of the mapped polygon."""
    if p == q:
        return 0.0
    return d_uhp(sc_inverse(scmap, p, tol), sc_inverse(scmap, q, tol))


def halfplane_distance(m, p, q):
    """Distance in ``{y > -m}``: shift up by ``m`` and use :func:`d_uhp`."""
    if not m > 0:
        raise PreconditionError(f"m must be positive, got {m!r}")
    p, q = complex(p), complex(q)
    if p.imag <= -m or q.imag <= -m:
        raise PreconditionError(f"points must satisfy Im > {-m!r}")
    return d_uhp(p + 1j * m, q + 1j * m)


def _strip_to_uhp(a, q0, z):
    return np.sin(math.pi * (z + 1j * q0) / (2.0 * a))


def halfstrip_distance(a, q0, p, q):
    """Distance in the half-strip ``{|x| < a, y > -q0}``.

    ``z -> sin(pi (z + i q0) / (2a))`` maps the half-strip onto the upper
    half-plane.
    """
    if not (a > 0 and q0 > 0):
        raise PreconditionError("a and q0 must be positive")
    p, q = complex(p), complex(q)
    for z in (p, q):
        if not (abs(z.real) < a and z.imag > -q0):
            raise PreconditionError(f"point {z!r} outside the half-strip")
    if p == q:
        return 0.0
    return d_uhp(_strip_to_uhp(a, q0, p), _strip_to_uhp(a, q0, q))


def strip_parameters(step, ratio=0.9, shrink=0.999):
    """Half-strip ``(a0, q0)`` inside the polygon of a step function.

    ``a0`` is the largest symmetric breakpoint span around zero on which
    ``s >= ratio * s(0)``; ``q0 = shrink * min s`` over that span.
    """
    bp, vals = step.breakpoints, step.values
    s0 = step(0.0)
    centre = int(np.searchsorted(bp, 0.0, side="right")) - 1
    lo = hi = centre
    while lo > 0 and hi < len(vals) - 1 and \
            min(vals[lo - 1], vals[hi + 1]) >= ratio * s0:
        lo, hi = lo - 1, hi + 1
    a0 = min(-bp[lo], bp[hi + 1])
    q0 = shrink * float(np.min(vals[lo:hi + 1]))
    return float(a0), q0


def certify_distance(scmap, step, G, p, q):
    """Polygon distance between ``p`` and ``q`` with its sandwich.

    Raises
    ------
    CertificateError
        If the half-plane / half-strip bounds do not enclose the value.
    """
    value = domain_distance(scmap, p, q)
    lower = halfplane_distance(G, p, q)
    a0, q0 = strip_parameters(step)
    upper = halfstrip_distance(a0, q0, p, q)
    cert = DistanceCertificate(value=value, lower_bound=lower, upper_bound=upper,
                               map_accuracy=float(scmap.accuracy), strip=(a0, q0))
    if not cert.holds:
        raise CertificateError(
            f"sandwich failed: {lower!r} <= {value!r} <= {upper!r} is false")
    return cert
