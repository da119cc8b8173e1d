"""Command-line interface.

Exit codes: 0 success, 2 precondition violation, 3 solver
non-convergence, 4 certificate failure.
"""

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .bendbounds import L_MAX
from .errors import CertificateError, PreconditionError, SolverError
from .geodesiclab import (bilipschitz_report, check_embedding, check_hill_bound,
                          horocycle_bend_angle, horocycle_polygon, random_curve, roundness)
from .pipeline import (compute_bound, emit_gcurve, gcurve_svg, optimize_L, polygon_svg)
from .region import build_step, polygon_from_step
from .specialfn import DEFAULT_TOL, solve_tangent

EXIT_OK, EXIT_PRECONDITION, EXIT_SOLVER, EXIT_CERTIFICATE = 0, 2, 3, 4


def _doc(kind, inputs, result, **extra):
    return {"type": kind, "version": __version__, "inputs": inputs, "result": result, **extra}


def _emit(doc):
    print(json.dumps(doc, indent=2))


def cmd_gfunc(args):
    sol = solve_tangent(args.L, DEFAULT_TOL)
    _emit(_doc("TangentSolution", {"L": args.L}, {
        "c": sol.c, "Theta": sol.theta, "G": sol.g_value, "residual": sol.residual},
        tolerances={"residual": DEFAULT_TOL}))
    return EXIT_OK


def cmd_bound(args):
    res = compute_bound(args.L, samples_per_branch=args.samples, quad_order=args.quad)
    if args.csv:
        d = res.to_dict()
        rows = [("L", d["L"]), ("G", d["G_value"]), ("c1", d["c1_value"]),
                ("half_width", d["step_stats"]["half_width"]),
                ("intervals", d["step_stats"]["intervals"]),
                ("sc_accuracy", d["sc_accuracy"]), ("H", d["H"]), ("K", d["K"]),
                ("lower_bound", res.certificate.lower_bound),
                ("upper_bound", res.certificate.upper_bound)]
        print("quantity,value")
        for k, v in rows:
            print(f"{k},{v!r}")
    else:
        _emit(_doc("BoundResult", {"L": args.L, "samples_per_branch": args.samples,
                                   "quad_order": args.quad}, res.to_dict()))
    return EXIT_OK


def cmd_optimize(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        L_best, res, hist = optimize_L(args.min, args.max, args.steps, args.tol)
    _emit(_doc("Optimum", {"L_min": args.min, "L_max": args.max, "coarse_steps": args.steps,
                           "tol": args.tol},
               {"L_best": L_best, "K": res.K, "H": res.H, "bound": res.to_dict(),
                "history": [[L, K] for L, K in hist]},
               warnings=[str(w.message) for w in caught]))
    return EXIT_OK


def cmd_gcurve(args):
    grid = np.linspace(L_MAX / args.points, L_MAX, args.points)
    table = emit_gcurve(grid)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(gcurve_svg(table))
    print("# L\tG(L)\t2asin(tanh(L/2))")
    for L, G, conj in table:
        print(f"{L:.12g}\t{G:.15g}\t{conj:.15g}")
    return EXIT_OK if np.all(table[:, 1] < table[:, 2]) else EXIT_CERTIFICATE


def cmd_polygon(args):
    step = build_step(args.L, samples_per_branch=args.samples)
    poly = polygon_from_step(step)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(polygon_svg(step, view=args.view))
    _emit(_doc("GeneralizedPolygon", {"L": args.L, "samples_per_branch": args.samples},
               poly.to_dict(), step={"half_width": step.half_width,
                                     "intervals": step.n_intervals}))
    return EXIT_OK


def _budget_trials(args, check):
    G = solve_tangent(args.L).g_value
    rng = np.random.default_rng(args.seed)
    return G, [check(random_curve(rng, args.L, 0.9 * G, args.dimension)) for _ in range(args.trials)]


def cmd_geodesic(args):
    inputs = {"L": args.L, "seed": args.seed, "trials": args.trials, "dimension": args.dimension}
    if args.check == "hill":
        G, reps = _budget_trials(args, lambda c: check_hill_bound(c, args.L))
        bad = [r for r in reps if r.status != "ok"]
        _emit(_doc("HillCheck", inputs, {"G": G, "bound": reps[0].bound,
                                         "max_theta_plus": max(r.max_theta_plus for r in reps),
                                         "min_margin": min(r.margin for r in reps),
                                         "failures": len(bad)}))
        return EXIT_CERTIFICATE if bad else EXIT_OK
    if args.check == "embed":
        G, seps = _budget_trials(args, lambda c: check_embedding(c, args.resolution))
        _emit(_doc("EmbeddingCheck", {**inputs, "resolution": args.resolution},
                   {"G": G, "min_separation": min(seps)}))
        return EXIT_OK if min(seps) > 0 else EXIT_CERTIFICATE
    if args.check == "bilip":
        G, reps = _budget_trials(args, lambda c: bilipschitz_report(c, args.L))
        bad = [r for r in reps if r.status != "ok"]
        worst = min(reps, key=lambda r: r.measured - r.predicted)
        _emit(_doc("BilipschitzCheck", inputs, {"G": G, "worst": worst.to_dict(),
                                                "failures": len(bad)}))
        return EXIT_CERTIFICATE if bad else EXIT_OK
    # horocycle
    curve = horocycle_polygon(args.L, args.n)
    rep = check_hill_bound(curve, args.L)
    _emit(_doc("Horocycle", {"L": args.L, "n": args.n}, {
        "bend_angles": curve.bend_angles.tolist(),
        "closed_form": horocycle_bend_angle(args.L),
        "roundness": roundness(curve, args.L), "hill": rep.to_dict()}))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="domebound",
        description="Dilatation bounds from a staircase domain, and bent-geodesic checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gfunc", help="solve the tangent problem for G(L)")
    s.add_argument("--L", type=float, required=True)
    s.set_defaults(fn=cmd_gfunc)

    s = sub.add_parser("bound", help="compute H(L) and K(L)")
    s.add_argument("--L", type=float, default=1.48)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--quad", type=int, default=8)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON document (default)")
    fmt.add_argument("--csv", action="store_true", help="two-column quantity,value table")
    s.set_defaults(fn=cmd_bound)

    s = sub.add_parser("optimize", help="minimise K(L) over an interval")
    s.add_argument("--min", type=float, default=1.0)
    s.add_argument("--max", type=float, default=1.9)
    s.add_argument("--steps", type=int, default=19)
    s.add_argument("--tol", type=float, default=1e-3)
    s.set_defaults(fn=cmd_optimize)

    s = sub.add_parser("gcurve", help="table and SVG of G(L) against 2 asin(tanh(L/2))")
    s.add_argument("--points", type=int, default=200)
    s.add_argument("--svg")
    s.set_defaults(fn=cmd_gcurve)

    s = sub.add_parser("polygon", help="staircase polygon for one L")
    s.add_argument("--L", type=float, default=1.48)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--svg")
    s.add_argument("--view", type=float, default=6.0, help="half-width of the drawn window")
    s.set_defaults(fn=cmd_polygon)

    s = sub.add_parser("geodesic", help="piecewise-geodesic checks")
    s.add_argument("check", choices=["hill", "embed", "bilip", "horo"])
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--dimension", type=int, choices=[2, 3], default=2)
    s.add_argument("--resolution", type=float, default=1e-2)
    s.add_argument("--n", type=int, default=20, help="horocycle points")
    s.set_defaults(fn=cmd_geodesic)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except SolverError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except CertificateError as exc:
        print(f"certificate failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
