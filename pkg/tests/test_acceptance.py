"""Acceptance criteria 1-9.

Each test prints one ``criterion N: PASS|FAIL ...`` line straight to the
terminal (output capture is suspended for it) so the lines show up in ``pytest -v`` logs.
Run ``python3 tests/test_acceptance.py`` for the lines alone.
"""

import math
import sys
import time
import warnings

import numpy as np
import pytest

from domebound.bendbounds import c1, f_shear, g_shear, solve_L0
from domebound.geodesiclab import (bilipschitz_report, check_embedding, check_hill_bound,
                                   horocycle_bend_angle, horocycle_polygon, hyp_distance,
                                   isosceles_identity, planar_unroll, random_curve, trace)
from domebound.bendbounds import L_MAX
from domebound.hypmetric import domain_distance
from domebound.pipeline import compute_bound, conjectured_bound, emit_gcurve, optimize_L
from domebound.region import GeneralizedPolygon, build_step, polygon_from_step
from domebound.scmap import sc_forward, sc_inverse, solve_parameters
from domebound.specialfn import g_func

SEED = 20240611
ORIGIN = np.array([1.0, 0.0, 0.0, 0.0])


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return _report


def test_criterion_1(report):
    t = time.perf_counter()
    G = g_func(1.48)
    dt = time.perf_counter() - t
    err = abs(G - 1.327185362837166)
    report(1, err < 1e-9 and dt < 1.0, f"G(1.48)={G!r} err={err:.2e} time={dt:.3f}s")


def test_criterion_2(report):
    G1 = g_func(1.0)
    conj = float(conjectured_bound(1.0))
    table = emit_gcurve(np.linspace(L_MAX / 200, L_MAX, 200))
    below = bool(np.all(table[:, 1] < table[:, 2]))
    ok = abs(G1 - 0.948) < 1e-3 and abs(conj - 0.96076) < 1e-5 and below
    report(2, ok, f"G(1)={G1:.6f} conj(1)={conj:.7f} G<conj on 200 points: {below}")


def test_criterion_3(report):
    L0 = solve_L0(1e-14)
    rng = np.random.default_rng(SEED)
    Ls = rng.uniform(0.01, L0, 100)
    xs = rng.uniform(-10.0, 10.0, 100)
    rt = max(abs(f_shear(g_shear(L, x), x) - L) for L, x in zip(Ls, xs))
    ok = abs(L0 - 1.91501) < 1e-5 and rt < 1e-12
    report(3, ok, f"L0={L0:.8f} max round-trip error={rt:.2e}")


def test_criterion_4(report):
    v = c1(1.48)
    err = abs(v - 5.027888826784)
    report(4, err < 1e-9, f"c1(1.48)={v!r} err={err:.2e}")


def test_criterion_5(report):
    t = time.perf_counter()
    res = compute_bound(1.48)
    dt = time.perf_counter() - t
    dH = abs(res.H - 1.969831901361628)
    dK = abs(res.K - 7.169471208698489)
    ok = dH < 2e-3 and dK < 2e-2 and res.K <= 7.1695 + 2e-2 and res.certificate.holds \
        and dt < 60.0
    report(5, ok, f"H={res.H:.10f} (err {dH:.1e}) K={res.K:.6f} (err {dK:.1e}) "
                  f"sandwich [{res.certificate.lower_bound:.4f}, "
                  f"{res.certificate.upper_bound:.4f}] time={dt:.1f}s")


def test_criterion_6(report):
    t = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        L_best, res, hist = optimize_L(1.0, 1.9)
    dt = time.perf_counter() - t
    ok = 1.40 <= L_best <= 1.56 and res.K <= 7.18 and dt < 900.0
    report(6, ok, f"L_best={L_best:.6f} K={res.K:.6f} evaluations={len(hist)} time={dt:.0f}s")


def test_criterion_7(report):
    rng = np.random.default_rng(SEED)
    # half-strip {|Re w| < 1, Im w > 0}; prevertices -1, 0 give (2/pi) arcsin(2z + 1)
    strip = solve_parameters(GeneralizedPolygon.from_finite([-1, 1], [0.5, 0.5]))
    xs, ys = np.meshgrid(np.linspace(-3, 2, 10), np.linspace(0.05, 3, 10))
    z = (xs + 1j * ys).ravel()
    grid_err = float(np.max(np.abs(sc_forward(strip, z) - 2 / np.pi * np.arcsin(2 * z + 1))))

    poly = polygon_from_step(build_step(1.48))
    m = solve_parameters(poly)
    zs = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0.05, 3, 100)
    rt = max(abs(sc_inverse(m, sc_forward(m, zz)) - zz) for zz in zs)

    p, q = 0j, 1j * c1(1.48)
    d0 = domain_distance(m, p, q)
    inv = max(abs(domain_distance(solve_parameters(poly, pinned=k), p, q) - d0)
              for k in (0, poly.n - 3))
    ok = grid_err < 1e-8 and rt < 1e-9 and inv < 1e-7
    report(7, ok, f"arcsine grid err={grid_err:.1e} round trip={rt:.1e} "
                  f"normalisation invariance={inv:.1e}")


def test_criterion_8(report):
    t = time.perf_counter()
    rng = np.random.default_rng(SEED)
    trials = 1000
    L_of = lambda: float(rng.uniform(0.3, 1.7))

    hill_bad = hill_checked = 0
    for _ in range(trials):
        L = L_of()
        G = g_func(L)
        c = random_curve(rng, L, float(rng.uniform(0.1, 1.0)) * G,
                         dimension=int(rng.integers(2, 4)))
        r = check_hill_bound(c, L)
        hill_checked += r.status != "precondition"
        hill_bad += r.status == "violated"

    min_sep = math.inf
    for _ in range(trials):
        L = L_of()
        c = random_curve(rng, L, 0.9 * g_func(L), dimension=int(rng.integers(2, 4)))
        min_sep = min(min_sep, check_embedding(c, resolution=1e-2))

    bilip_bad = 0
    worst_gap = math.inf
    for _ in range(trials):
        L = L_of()
        c = random_curve(rng, L, float(rng.uniform(0.1, 0.95)) * g_func(L),
                         dimension=int(rng.integers(2, 4)))
        r = bilipschitz_report(c, L)
        bilip_bad += r.status != "ok"
        worst_gap = min(worst_gap, r.measured - r.predicted)

    horo_err = 0.0
    for _ in range(trials):
        L = float(rng.uniform(0.05, 2.5))
        curve = horocycle_polygon(L, int(rng.integers(3, 40)))
        horo_err = max(horo_err, float(np.max(np.abs(curve.bend_angles
                                                     - horocycle_bend_angle(L)))))

    unroll_err = 0.0
    for _ in range(trials):
        L = L_of()
        c = random_curve(rng, L, float(rng.uniform(0.1, 3.0)), dimension=3)
        u = planar_unroll(c)
        ts = np.linspace(0.0, c.last_bend + 1.0, 100)
        d = lambda g: hyp_distance(trace(g, ts), ORIGIN)
        unroll_err = max(unroll_err, float(np.max(np.abs(d(u) - d(c)))))
    dt = time.perf_counter() - t
    ok = (hill_bad == 0 and hill_checked == trials and min_sep > 0 and bilip_bad == 0
          and horo_err < 1e-12 and unroll_err < 1e-9 and dt < 300.0)
    report(8, ok, f"hill violations={hill_bad}/{hill_checked} min separation={min_sep:.3e} "
                  f"bilip failures={bilip_bad} (worst margin {worst_gap:.2e}) "
                  f"horocycle err={horo_err:.1e} unroll err={unroll_err:.1e} time={dt:.0f}s")


def test_criterion_9(report):
    thetas = np.linspace(0.05, 1.5, 52)[1:-1]
    errs = [isosceles_identity(float(th)).error for th in thetas]
    report(9, max(errs) < 1e-8, f"max |sinh(l/2) - cos(theta)| = {max(errs):.1e} over 50 angles")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
