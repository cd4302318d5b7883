"""Command-line front end.

Subcommands:
  mean           compute the L^p center of mass of a dataset JSON file
  stepsize       print the resolved step-size policies / the exit-time table
  circle-example run the scripted circle scenarios
  sphere-configs run the cross/pair configurations on S^2
  check          Monte Carlo suites: comparison | tethering | hull

GEOMEAN_SEED in the environment overrides --seed.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import emit, experiments, frechet, geocheck, solver, stepsize
from .errors import CutLocusError, DomainError, GeomeanError, PreconditionError
from .kernels import b_lower, c_upper
from .manifolds import make_space
from .solver import SolverConfig, descend, minimal_ball_estimate

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_CUT_LOCUS = 2
EXIT_NO_CONVERGENCE = 3
EXIT_PRECONDITION = 4


def _seed(args):
    env = os.environ.get("GEOMEAN_SEED")
    return int(env) if env is not None else args.seed


def _outdir(args):
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _build_policy(args):
    kind = args.policy
    if kind == "user_constant" or (kind is None and args.t is not None):
        return stepsize.StepPolicy("user_constant", t=args.t)
    if kind == "exit_compromise":
        return stepsize.StepPolicy("exit_compromise", rho_prime=args.rho_prime)
    return stepsize.StepPolicy(kind or "conjecture")


def trailing_rate(ds, trace, t, k_start=None):
    """Rate prediction from Hessian radial bounds on a ball around the
    final point that contains the trace tail; None when the region is not
    strongly convex enough (h <= 0)."""
    if k_start is None:
        k_start = len(trace.records) // 2
    sp = ds.space
    cst = sp.constants()
    xbar = trace.final
    tail_r = max(trace.dist_to_final[k_start:], default=0.0)
    D = tail_r + max(sp.distance(xbar, xi) for xi in ds.points)
    try:
        h = b_lower(cst.Delta, D)
    except DomainError:
        return None
    if h <= 0:
        return None
    H = c_upper(cst.delta, D)
    f_gap = trace.records[k_start].cost - trace.records[-1].cost
    if not (0 < t < 2.0 / H):
        return None
    return stepsize.rate_estimate(h, H, t, max(f_gap, 0.0))


def cmd_mean(args):
    try:
        with open(args.dataset) as f:
            obj = json.load(f)
        ds = frechet.dataset_from_json(obj, ball_fallback=minimal_ball_estimate)
    except (OSError, ValueError, KeyError, DomainError) as e:
        print(f"error: cannot load dataset: {e}", file=sys.stderr)
        return EXIT_PARSE

    policy = _build_policy(args)
    try:
        t = policy.resolve(ds.space, ds.ball_radius, args.p)
    except (PreconditionError, DomainError) as e:
        print(f"error: step policy: {e}", file=sys.stderr)
        return EXIT_PRECONDITION

    cfg = SolverConfig(p=args.p, step=t, grad_tol=args.grad_tol,
                       max_iters=args.max_iters)
    tr = descend(ds, cfg)
    out = _outdir(args)
    emit.write_trace_csv(os.path.join(out, "trace.csv"), tr,
                         ds.space.ambient_dim)
    rate = trailing_rate(ds, tr, t)
    summary = {
        "status": tr.status,
        "uniqueness_certified": tr.uniqueness_certified,
        "policy": policy.kind,
        "step": t,
        "p": args.p,
        "iterations": tr.n_iters,
        "final": [float(c) for c in tr.final],
        "final_cost": tr.records[-1].cost,
        "final_grad_norm": tr.records[-1].grad_norm,
        "verdicts": tr.verdicts,
        "predicted_q": None if rate is None else rate.q,
        "empirical_q": solver.fit_tail_rate(tr),
    }
    if not tr.uniqueness_certified:
        summary["warning"] = "rho exceeds r_cx: uniqueness not certified"
    with open(os.path.join(out, "summary.json"), "w") as f:
        json.dump(summary, f, indent=2)
    print(json.dumps(summary, indent=2))
    return tr.exit_code


def cmd_stepsize(args):
    out = _outdir(args)
    if args.table:
        rows = experiments.run_stepsize_table(out)
        for r in rows:
            print(f"{r['label']:28s} value={r['value']:.6f} "
                  f"reference={r['reference']:.4f} abs_error={r['abs_error']:.2e}")
        return EXIT_OK
    space = make_space(args.space, args.dim, args.kappa)
    rows = []
    for kind in ("conjecture", "constant_curvature", "spread_compromise",
                 "exit_compromise"):
        pol = stepsize.StepPolicy(kind, rho_prime=args.rho_prime)
        try:
            t = pol.resolve(space, args.rho, args.p)
            stay = (stepsize.resolve_spread_compromise(space, args.rho, args.p)
                    .stay_ball_radius if kind == "spread_compromise"
                    else args.rho)
            rows.append({"policy": kind, "resolved_t": t, "stay_ball": stay,
                         "preconditions": "ok"})
        except GeomeanError as e:
            rows.append({"policy": kind, "resolved_t": math.nan,
                         "stay_ball": math.nan, "preconditions": str(e)})
    header = ["policy", "resolved_t", "stay_ball", "preconditions"]
    emit.write_csv(os.path.join(out, "stepsize_policies.csv"), header,
                   [[r[h] for h in header] for r in rows])
    print(json.dumps(rows, indent=2, default=str))
    return EXIT_OK


def cmd_circle_example(args):
    report = experiments.run_circle_example(_outdir(args))
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_sphere_configs(args):
    rho_list = ([float(r) for r in args.rho_list.split(",")]
                if args.rho_list else (0.35 * math.pi, 0.47 * math.pi))
    report = experiments.run_sphere_configs(rho_list, args.t or 1.0,
                                            _outdir(args), _seed(args))
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_check(args):
    space = make_space(args.space, args.dim, args.kappa)
    seed = _seed(args)
    if args.suite == "comparison":
        rep = geocheck.comparison_check(space, args.trials, seed,
                                        exploratory=space.kappa <= 0)
    elif args.suite == "tethering":
        rep = geocheck.tethering_check(space, args.trials, (0.25, 0.5, 1.0),
                                       seed,
                                       exploratory=space.constants().delta < 0)
    else:
        rep = _hull_check(space, args.trials, seed)
    out = _outdir(args)
    with open(os.path.join(out, f"check_{args.suite}.json"), "w") as f:
        json.dump(rep, f, indent=2)
    print(json.dumps(rep, indent=2))
    return EXIT_OK


def _hull_check(space, n_trials, seed):
    """Hull-trap sweep: once a descent iterate enters the convex hull of
    the data, later iterates must stay inside."""
    rng = np.random.Generator(np.random.Philox(seed))
    cst = space.constants()
    cap = cst.r_cx if math.isfinite(cst.r_cx) else 1.5
    violations = 0
    for _ in range(n_trials):
        o = space.random_point(rng)
        rho = cap * (0.1 + 0.9 * rng.uniform())
        n = int(rng.integers(3, 7))
        pts = [space.random_in_ball(o, rho, rng) for _ in range(n)]
        ds = frechet.make_dataset(space, pts, None, o, rho)
        x0 = space.random_in_ball(o, rho, rng)
        tr = descend(ds, SolverConfig(p=2.0, step=1.0, grad_tol=1e-9,
                                      max_iters=60), x0=x0)
        entered = False
        for rec in tr.records:
            inside = geocheck.hull_membership(space, pts, rec.point,
                                              center=o, tol=1e-8)
            if entered and not inside:
                violations += 1
                break
            entered = entered or inside
    return {"suite": "hull", "trials": n_trials, "violations": violations,
            "min_margin": math.nan, "seed": seed}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="geomean",
        description="Riemannian L^p centers of mass on constant-curvature spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--space", default="sphere",
                       choices=["euclidean", "sphere", "hyperbolic", "circle",
                                "real_projective", "so3"])
        p.add_argument("--dim", type=int, default=2)
        p.add_argument("--kappa", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    pm = sub.add_parser("mean", help="compute a center of mass")
    pm.add_argument("dataset", help="dataset JSON file")
    pm.add_argument("--p", type=float, default=2.0)
    pm.add_argument("--policy", default=None,
                    choices=["user_constant", "conjecture", "constant_curvature",
                             "spread_compromise", "exit_compromise"])
    pm.add_argument("--t", type=float, default=None)
    pm.add_argument("--rho-prime", dest="rho_prime", type=float, default=None)
    pm.add_argument("--grad-tol", dest="grad_tol", type=float, default=1e-10)
    pm.add_argument("--max-iters", dest="max_iters", type=int, default=1000)
    pm.add_argument("--out", default=None)
    pm.set_defaults(func=cmd_mean)

    ps = sub.add_parser("stepsize", help="resolve step-size policies")
    common(ps)
    ps.add_argument("--p", type=float, default=2.0)
    ps.add_argument("--rho", type=float, default=0.5)
    ps.add_argument("--rho-prime", dest="rho_prime", type=float, default=None)
    ps.add_argument("--table", action="store_true",
                    help="emit the exit-time reference table")
    ps.set_defaults(func=cmd_stepsize)

    pc = sub.add_parser("circle-example", help="scripted circle scenarios")
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=cmd_circle_example)

    pg = sub.add_parser("sphere-configs", help="cross/pair configurations")
    pg.add_argument("--rho-list", dest="rho_list", default=None,
                    help="comma-separated rho values")
    pg.add_argument("--t", type=float, default=None)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", default=None)
    pg.set_defaults(func=cmd_sphere_configs)

    pk = sub.add_parser("check", help="Monte Carlo verification suites")
    pk.add_argument("suite", choices=["comparison", "tethering", "hull"])
    common(pk)
    pk.add_argument("--trials", type=int, default=1000)
    pk.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CutLocusError as e:
        print(f"error: cut locus: {e}", file=sys.stderr)
        return EXIT_CUT_LOCUS
    except PreconditionError as e:
        print(f"error: precondition: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
