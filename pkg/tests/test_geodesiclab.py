import math

import numpy as np
import pytest

from domebound.errors import PreconditionError
from domebound.geodesiclab import (PiecewiseGeodesic, bilipschitz_report, check_embedding,
                                   check_hill_bound, horocycle_bend_angle, horocycle_polygon,
                                   hyp_distance, isosceles_identity, minkowski, planar_unroll,
                                   random_curve, roundness, theta_s_profile, trace,
                                   uhp_to_hyperboloid)
from domebound.specialfn import solve_tangent

G1 = solve_tangent(1.0).g_value
O = np.array([1.0, 0, 0, 0])


def profile_dist(c, ts):
    return hyp_distance(trace(c, ts), O)


def test_roundness_examples():
    assert roundness(PiecewiseGeodesic([0.0], [0.7]), 2.0) == 0.7
    assert roundness(PiecewiseGeodesic([0, 1, 2], [0.3] * 3), 1.0) == pytest.approx(0.3)
    assert roundness(PiecewiseGeodesic([0, 0.5, 2], [0.3] * 3), 1.0) == pytest.approx(0.6)
    assert roundness(PiecewiseGeodesic([], []), 1.0) == 0.0


def test_roundness_brute_force(rng):
    for _ in range(50):
        c = random_curve(rng, 1.0, 0.5)
        t, phi = c.bend_times, c.bend_angles
        brute = max(phi[(t >= t[j]) & (t - t[j] < 1.0)].sum() for j in range(len(t)))
        assert roundness(c, 1.0) == pytest.approx(brute, abs=1e-14)
        assert roundness(c, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_construction_checks():
    with pytest.raises(PreconditionError):
        PiecewiseGeodesic([1.0, 0.5], [0.1, 0.1])
    with pytest.raises(PreconditionError):
        PiecewiseGeodesic([1.0], [math.pi])
    with pytest.raises(PreconditionError):
        PiecewiseGeodesic([1.0], [0.2], [0.3], 2)


def test_points_on_hyperboloid(rng):
    c = random_curve(rng, 1.0, 0.8, dimension=3)
    P = trace(c, np.linspace(0, 6, 50))
    assert np.allclose(minkowski(P, P), -1.0, atol=1e-9)


def test_straight_geodesic():
    c = PiecewiseGeodesic([], [])
    ts = np.linspace(0, 5, 11)
    assert np.allclose(profile_dist(c, ts), ts, atol=1e-12)
    prof = theta_s_profile(c, ts)
    assert np.allclose(prof.theta_plus, 0) and np.allclose(prof.s_values, ts, atol=1e-12)


def test_law_of_cosines():
    t1, phi = 1.3, 0.8
    c = PiecewiseGeodesic([t1], [phi])
    for u in (0.1, 0.7, 2.0):
        expect = math.acosh(math.cosh(t1) * math.cosh(u)
                            - math.sinh(t1) * math.sinh(u) * math.cos(math.pi - phi))
        assert profile_dist(c, t1 + u) == pytest.approx(expect, abs=1e-12)


def test_torsion_pi_mirror():
    ts = np.linspace(0, 4, 41)
    a = PiecewiseGeodesic([1.0, 2.0], [0.5, 0.9], [0.0, 0.0], 2)
    b = PiecewiseGeodesic([1.0, 2.0], [0.5, 0.9], [math.pi, 0.0], 2)
    assert np.allclose(profile_dist(a, ts), profile_dist(b, ts), atol=1e-12)
    pa, pb = trace(a, 3.5), trace(b, 3.5)
    assert pa[2] == pytest.approx(-pb[2], abs=1e-12)


def test_one_lipschitz(rng):
    for dim in (2, 3):
        c = random_curve(rng, 1.0, 2.0, dimension=dim)
        ts = np.sort(rng.uniform(0, c.last_bend + 1, 60))
        P = trace(c, ts)
        for i in range(len(ts) - 1):
            assert hyp_distance(P[i], P[i + 1:]).max() <= (ts[i + 1:] - ts[i]).max() + 1e-12
            assert np.all(hyp_distance(P[i], P[i + 1:]) <= ts[i + 1:] - ts[i] + 1e-12)


def test_single_bend_jump():
    c = PiecewiseGeodesic([1.0], [0.6])
    prof = theta_s_profile(c, [0.5, 1.5])
    i = int(np.searchsorted(prof.sample_times, 1.0))
    assert prof.theta_plus[i] - prof.theta_minus[i] == pytest.approx(0.6, abs=1e-12)


def test_profile_invariants(rng):
    for dim in (2, 3):
        for _ in range(20):
            c = random_curve(rng, 1.0, 1.5, dimension=dim)
            prof = theta_s_profile(c, np.linspace(0, c.last_bend + 1, 80))
            t, s = prof.sample_times, prof.s_values
            assert np.all(np.abs(np.diff(s)) <= np.diff(t) + 1e-12)
            for tb, phi in zip(c.bend_times, c.bend_angles):
                i = int(np.searchsorted(t, tb))
                assert abs(prof.theta_plus[i] - prof.theta_minus[i]) <= phi + 1e-12
            # theta decreases strictly between samples inside a bend interval
            edges = np.concatenate([[0], c.bend_times, [np.inf]])
            for a, b in zip(edges[:-1], edges[1:]):
                sel = np.flatnonzero((t >= a) & (t < b))
                th = prof.theta_plus[sel]
                moving = th[:-1] > 1e-9
                assert np.all(np.diff(th)[moving] < 0)


def test_ode_agrees_with_trig(rng):
    worst = 0.0
    for _ in range(100):
        n = 5
        times = np.cumsum(rng.exponential(0.5, n) + 0.05)
        c = PiecewiseGeodesic(times, rng.uniform(0, 0.6, n), math.pi * rng.integers(0, 2, n), 2)
        prof = theta_s_profile(c, np.linspace(0, times[-1] + 1, 50))
        worst = max(worst, prof.ode_discrepancy)
    assert worst < 1e-6


def test_hill_bound_random(rng):
    for dim in (2, 3):
        for _ in range(100):
            c = random_curve(rng, 1.0, 0.9 * G1, dimension=dim)
            rep = check_hill_bound(c, 1.0)
            assert rep.status == "ok", rep


def test_hill_straight():
    rep = check_hill_bound(PiecewiseGeodesic([], []), 1.0)
    assert rep.max_theta_plus == pytest.approx(0.0, abs=1e-9)
    assert rep.margin == pytest.approx(rep.bound, abs=1e-9)


def test_horocycle_precondition():
    h = horocycle_polygon(1.0, 20)
    assert roundness(h, 1.0) == pytest.approx(0.96076, abs=1e-5)
    assert roundness(h, 1.0) > G1
    assert check_hill_bound(h, 1.0).status == "precondition"


@pytest.mark.parametrize("L", [0.05, 0.5, 1.0, 1.48, 2.5])
def test_horocycle_angles(L):
    h = horocycle_polygon(L, 12)
    assert np.max(np.abs(h.bend_angles - horocycle_bend_angle(L))) < 1e-12
    assert np.allclose(np.diff(h.bend_times), L, atol=1e-12)
    assert roundness(h, L) == pytest.approx(horocycle_bend_angle(L), abs=1e-12)


def test_horocycle_construction_oracle():
    L = 1.3
    d = 2 * math.sinh(L / 2)
    pts = uhp_to_hyperboloid(np.arange(4) * d + 1j)
    assert np.allclose(hyp_distance(pts[:-1], pts[1:]), L, atol=1e-13)
    assert horocycle_bend_angle(1e-8) < 1e-7


def test_embedding_straight():
    assert check_embedding(PiecewiseGeodesic([], []), 1e-2, 3.0) > 0


def _klein(p):
    return p[1] / p[0] + 1j * p[2] / p[0]


def test_embedding_detects_crossing():
    c = PiecewiseGeodesic([1.0, 1.1, 1.2], [math.pi / 2] * 3)
    assert roundness(c, 1.0) > G1
    res = 1e-3
    assert check_embedding(c, res, 1.6) < 2 * res
    # geodesics are straight in the Klein model: the first and last legs cross
    a0, a1 = _klein(trace(c, 0.0)), _klein(trace(c, 1.0))
    b0, b1 = _klein(trace(c, 1.2)), _klein(trace(c, 1.6))
    cross = lambda u, v: u.real * v.imag - u.imag * v.real
    r, s = a1 - a0, b1 - b0
    t = cross(b0 - a0, s) / cross(r, s)
    u = cross(b0 - a0, r) / cross(r, s)
    assert 0 < t < 1 and 0 < u < 1


def test_embedding_random(rng):
    for dim in (2, 3):
        for _ in range(30):
            c = random_curve(rng, 1.0, 0.9 * G1, dimension=dim)
            assert check_embedding(c, 1e-2) > 0


def test_bilipschitz():
    rep = bilipschitz_report(PiecewiseGeodesic([], []), 1.0, t_max=3.0)
    assert rep.measured == pytest.approx(1.0, abs=1e-9)
    rep = bilipschitz_report(PiecewiseGeodesic([1.0], [0.4]), 1.0)
    assert rep.measured >= math.sin((G1 - 0.4) / 4) ** 2
    assert rep.status == "ok"
    rep = bilipschitz_report(horocycle_polygon(1.0, 5), 1.0)
    assert rep.status == "precondition"


def test_bilipschitz_random(rng):
    for _ in range(50):
        c = random_curve(rng, 1.0, 0.9 * G1, dimension=3)
        assert bilipschitz_report(c, 1.0).status == "ok"


def test_isosceles_identity():
    for th in np.linspace(0.05, 1.5, 50):
        rep = isosceles_identity(th)
        assert rep.error < 1e-8
        a0, a1 = rep.angles_at_minimiser
        assert abs(a0 - a1) < 1e-6
    assert isosceles_identity(math.pi / 3).ell == pytest.approx(2 * math.asinh(0.5), abs=1e-12)
    assert isosceles_identity(math.pi / 2 - 1e-6).ell < 1e-5
    with pytest.raises(PreconditionError):
        isosceles_identity(math.pi / 2)


def test_planar_unroll_random(rng):
    for _ in range(50):
        c = random_curve(rng, 1.0, 1.5, dimension=3)
        u = planar_unroll(c)
        assert u.dimension == 2
        ts = np.linspace(0, c.last_bend + 1, 100)
        assert np.max(np.abs(profile_dist(u, ts) - profile_dist(c, ts))) < 1e-9
        assert np.all(u.bend_angles <= c.bend_angles + 1e-9)


def test_planar_unroll_planar_input():
    c = PiecewiseGeodesic([1.0, 2.0, 2.5], [0.4, 0.3, 0.2], [0, math.pi, 0], 2)
    ts = np.linspace(0, 3.5, 100)
    assert np.allclose(profile_dist(planar_unroll(c), ts), profile_dist(c, ts), atol=1e-12)


def test_planar_unroll_torsion_decreases_angles():
    c = PiecewiseGeodesic([1.0, 2.0], [0.5, 0.5], [0.0, math.pi / 2], 3)
    u = planar_unroll(c)
    assert u.bend_angles[1] < c.bend_angles[1]
    assert u.bend_angles[0] == pytest.approx(c.bend_angles[0], abs=1e-12)
