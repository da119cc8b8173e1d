import math
import warnings

import numpy as np
import pytest

from domebound.errors import PreconditionError
from domebound.region import GeneralizedPolygon, polygon_from_step
from domebound.scmap import (CrowdingWarning, SCMap, sc_deriv, sc_forward, sc_forward_via,
                             sc_inverse, solve_parameters)
from domebound.scmap import _side_integrals


@pytest.fixture(scope="module")
def strip_map():
    # half-strip {|Re w| < 1, Im w > 0}
    return solve_parameters(GeneralizedPolygon.from_finite([-1, 1], [0.5, 0.5]))


def test_half_strip_matches_arcsine(strip_map):
    # with prevertices -1, 0 the map is (2/pi) arcsin(2z + 1)
    assert np.allclose(strip_map.prevertices, [-1.0, 0.0])
    xs, ys = np.meshgrid(np.linspace(-3, 2, 10), np.linspace(0.05, 3, 10))
    z = (xs + 1j * ys).ravel()
    err = np.abs(sc_forward(strip_map, z) - 2 / np.pi * np.arcsin(2 * z + 1))
    assert err.max() < 1e-8


def test_upper_half_plane_is_affine():
    P = GeneralizedPolygon.from_finite([-1, 1], [1.0, 1.0])
    m = solve_parameters(P)
    z = np.array([1j, 2 + 0.5j, -3 + 4j])
    w = sc_forward(m, z)
    # affine: f(z) = C z + B with real positive C
    C = (w[1] - w[0]) / (z[1] - z[0])
    assert np.allclose(w, w[0] + C * (z - z[0]), atol=1e-12)
    assert abs(C.imag) < 1e-12 and C.real > 0


def test_vertex_reproduction(small_map):
    w = small_map.vertices
    assert small_map.accuracy < 1e-9
    imgs = np.array([sc_forward(small_map, x) for x in small_map.prevertices])
    assert np.max(np.abs(imgs - w)) < 1e-9
    assert np.all(np.diff(small_map.prevertices) > 0)


def test_residual_below_tol(small_map):
    assert small_map.residual < 1e-10


def test_jacobian_matches_finite_differences(small_map):
    x, beta = small_map.prevertices, small_map.beta
    _, J = _side_integrals(x, beta, 8, with_jacobian=True)
    h = 1e-6
    for j in (0, len(x) // 2, len(x) - 1):
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        fd = (_side_integrals(xp, beta, 8) - _side_integrals(xm, beta, 8)) / (2 * h)
        assert np.max(np.abs(fd - J[:, j])) < 1e-5 * max(1, np.max(np.abs(fd)))


def test_path_independence(small_map, rng):
    for _ in range(10):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))
        via = complex(rng.uniform(-3, 3), rng.uniform(2, 4))
        assert abs(sc_forward(small_map, z) - sc_forward_via(small_map, z, via)) < 1e-9


def _dist_to_segment(p, a, b):
    t = np.clip(((p - a) * np.conj(b - a)).real / abs(b - a) ** 2, 0, 1)
    return abs(p - (a + t * (b - a)))


def test_boundary_monotonicity(small_map):
    x, w = small_map.prevertices, small_map.vertices
    for k in range(0, len(x) - 1, 3):
        for u in (0.1, 0.5, 0.9):
            p = sc_forward(small_map, x[k] + u * (x[k + 1] - x[k]))
            assert _dist_to_segment(p, w[k], w[k + 1]) < 1e-8


def test_round_trip(small_map, rng):
    zs = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0.05, 3, 100)
    for z in zs:
        assert abs(sc_inverse(small_map, sc_forward(small_map, z)) - z) < 1e-9


def test_symmetric_axis(small_map):
    # the mirror x -> -x of the staircase swaps the pinned prevertices -1 and 0,
    # so preimages of the imaginary axis lie on Re z = -1/2
    for y in (-0.5, 0.0, 0.7, 3.0, 10.0):
        z = sc_inverse(small_map, 1j * y)
        assert abs(z.real + 0.5) < 1e-8 * max(1.0, abs(z))


def test_near_corner(small_map):
    w = small_map.vertices
    k = int(np.argmin(np.abs(w - (w[len(w) // 2] + 0.5))))
    a = small_map.angle_params[k]
    # step into the interior along the bisector of the corner
    e_out = (w[k + 1] - w[k]) / abs(w[k + 1] - w[k])
    target = w[k] + 1e-3 * e_out * np.exp(1j * math.pi * a / 2)
    z = sc_inverse(small_map, target, tol=1e-10)
    assert abs(sc_forward(small_map, z) - target) < 1e-10
    assert z.imag > 0


def test_conformality(small_map, rng):
    h = 1e-5
    for _ in range(5):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2))
        f0 = sc_forward(small_map, z)
        d1 = (sc_forward(small_map, z + h) - f0) / h
        d2 = (sc_forward(small_map, z + 1j * h) - f0) / (1j * h)
        assert abs(d1 - d2) < 1e-6 * abs(d1) + 1e-6
        assert abs(d1 - sc_deriv(small_map, z)) < 1e-4 * abs(d1)


def test_corner_angles(small_map):
    x, w, alpha = small_map.prevertices, small_map.vertices, small_map.angle_params
    for k in range(1, len(x) - 1, 5):
        eps = 1e-4 * min(x[k] - x[k - 1], x[k + 1] - x[k])
        right = sc_forward(small_map, x[k] + eps) - w[k]
        left = sc_forward(small_map, x[k] - eps) - w[k]
        ang = np.angle(left / right) % (2 * math.pi)
        assert abs(ang - math.pi * alpha[k]) < 1e-3


def test_normalisation_invariance(small_step, small_map):
    from domebound.hypmetric import domain_distance
    P = polygon_from_step(small_step)
    other = solve_parameters(P, pinned=3)
    p, q = 0.2j, 2.5 + 1.5j
    d1 = domain_distance(small_map, p, q)
    d2 = domain_distance(other, p, q)
    assert abs(d1 - d2) < 1e-7


def test_serialisation_roundtrip(small_map):
    m2 = SCMap.from_json(small_map.to_json())
    z = 0.3 + 0.8j
    assert abs(sc_forward(m2, z) - sc_forward(small_map, z)) < 1e-12


def test_preconditions(small_map):
    with pytest.raises(PreconditionError):
        sc_forward(small_map, 1 - 1j)
    with pytest.raises(PreconditionError):
        sc_forward(small_map, complex(math.inf, 0))
    bad = GeneralizedPolygon(np.array([0j, 1 + 0j, complex(math.inf, math.inf)]),
                             np.array([0.5, 0.5, 0.5]), 2)
    with pytest.raises(PreconditionError):
        solve_parameters(bad)


def test_crowding_warning_is_a_userwarning():
    assert issubclass(CrowdingWarning, UserWarning)
    with warnings.catch_warnings():
        warnings.simplefilter("error", CrowdingWarning)
        solve_parameters(GeneralizedPolygon.from_finite([-1, 1], [0.5, 0.5]))
