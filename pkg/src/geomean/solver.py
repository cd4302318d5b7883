"""Constant step-size gradient descent with trajectory monitors.

The update is x^{k+1} = exp_{x^k}(-t grad f_p(x^k)).  Alongside the bare
iteration the solver records, per step, whether the iterate stayed in the
monitor ball, whether the connecting geodesic stayed inside (sampled at
interior parameters), and whether the cost decreased.  A cut-locus hit
aborts the run; the offending iterate is recorded rather than perturbed.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutLocusError, DomainError, PreconditionError
from . import frechet


@dataclass
class SolverConfig:
    p: float = 2.0
    step: float = 1.0             # resolved constant step size
    grad_tol: float = 1e-10
    max_iters: int = 1000
    monitor_center: np.ndarray = None   # defaults to the dataset ball
    monitor_radius: float = None
    record_substeps: int = 16     # interior geodesic samples per step
    hessian_upper: float = None   # enables the descent-inequality monitor

    def __post_init__(self):
        if self.grad_tol <= 0:
            raise DomainError("grad_tol must be positive")
        if self.max_iters < 1:
            raise DomainError("max_iters must be at least 1")
        if self.step <= 0:
            raise DomainError("step must be positive")


@dataclass
class IterateRecord:
    k: int
    point: np.ndarray
    cost: float
    grad_norm: float
    dist_to_o: float
    step_used: float


@dataclass
class Trace:
    records: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    final: np.ndarray = None
    status: str = None            # converged | max_iters | cut_locus
    cut_locus_index: int = None
    dist_to_final: list = None
    uniqueness_certified: bool = True

    @property
    def n_iters(self):
        return len(self.records) - 1

    @property
    def exit_code(self):
        return {"converged": 0, "cut_locus": 2, "max_iters": 3}[self.status]


_BALL_TOL = 1e-9


def descend(ds, cfg, x0=None):
    """Run constant-step gradient descent on dataset ds.

    Starts from x0 (default: the ball center o).  Returns a Trace whose
    verdicts report the monitored convergence hypotheses:

      stayed_in_ball      every iterate in the monitor ball
      continuously_stayed every sampled interior geodesic point in it too
      monotone_cost       f never increased (beyond 1e-12)
      descent_inequality  quantified per-step decrease (needs
                          cfg.hessian_upper; None when not monitored)
      converged           gradient norm reached grad_tol
    """
    sp = ds.space
    x = sp.project(np.asarray(ds.ball_center if x0 is None else x0, dtype=float))
    o = ds.ball_center
    mon_o = o if cfg.monitor_center is None else cfg.monitor_center
    mon_rho = ds.ball_radius if cfg.monitor_radius is None else cfg.monitor_radius
    t = cfg.step

    tr = Trace(uniqueness_certified=ds.uniqueness_certified)
    verd = {"stayed_in_ball": True, "continuously_stayed": True,
            "monotone_cost": True, "converged": False,
            "descent_inequality": None if cfg.hessian_upper is None else True}
    ball_slack = _BALL_TOL * max(1.0, mon_rho)

    def in_ball(pt):
        return sp.distance(mon_o, pt) <= mon_rho + ball_slack

    f = frechet.cost(ds, cfg.p, x)
    for k in range(cfg.max_iters + 1):
        try:
            g = frechet.gradient(ds, cfg.p, x)
        except CutLocusError as e:
            tr.records.append(IterateRecord(k, x, f, math.nan,
                                            sp.distance(o, x), math.nan))
            tr.status = "cut_locus"
            tr.cut_locus_index = e.index
            break
        gn = sp.norm(x, g)
        tr.records.append(IterateRecord(k, x, f, gn, sp.distance(o, x), t))
        if not in_ball(x):
            verd["stayed_in_ball"] = False
            verd["continuously_stayed"] = False
        if gn <= cfg.grad_tol:
            verd["converged"] = True
            tr.status = "converged"
            break
        if k == cfg.max_iters:
            tr.status = "max_iters"
            break

        step_vec = -t * g
        if verd["continuously_stayed"] and cfg.record_substeps > 0:
            for j in range(1, cfg.record_substeps + 1):
                s = j / (cfg.record_substeps + 1)
                if not in_ball(sp.exp(x, s * step_vec)):
                    verd["continuously_stayed"] = False
                    break
        x_next = sp.exp(x, step_vec)
        f_next = frechet.cost(ds, cfg.p, x_next)
        if f_next > f + 1e-12:
            verd["monotone_cost"] = False
        if cfg.hessian_upper is not None:
            bound = f - gn * gn * t * (1.0 - cfg.hessian_upper * t / 2.0)
            if f_next > bound + 1e-10:
                verd["descent_inequality"] = False
        x, f = x_next, f_next

    tr.final = x
    tr.verdicts = verd
    tr.dist_to_final = [sp.distance(r.point, x) for r in tr.records]
    return tr


def one_step(ds, p, x, t):
    """A single descent update from x; raises CutLocusError at cut points."""
    g = frechet.gradient(ds, p, x)
    return ds.space.exp(x, -t * g)


def multistart_uniqueness(ds, cfg, n_starts, rng):
    """Descend from n_starts uniform starts in B(o, rho); report whether
    all runs agree on the minimizer."""
    if not ds.uniqueness_certified:
        raise PreconditionError("multistart_uniqueness: rho exceeds r_cx")
    sp = ds.space
    finals = []
    for _ in range(n_starts):
        x0 = sp.random_in_ball(ds.ball_center, ds.ball_radius, rng)
        finals.append(descend(ds, cfg, x0=x0).final)
    spread = max((sp.distance(a, b) for i, a in enumerate(finals)
                  for b in finals[i + 1:]), default=0.0)
    return {"all_agree": spread <= 10.0 * cfg.grad_tol, "spread": spread,
            "finals": finals}


def fit_tail_rate(trace):
    """Empirical contraction factor from the trace tail.

    Fits log d(x^k, final) ~ (k/2) log q over the later iterations and
    returns q; None when the trace is too short to fit.
    """
    pts = [(r.k, d) for r, d in zip(trace.records, trace.dist_to_final)
           if d > 1e-14]
    pts = pts[len(pts) // 3:]
    if len(pts) < 3:
        return None
    ks = np.array([p[0] for p in pts], dtype=float)
    lds = np.log([p[1] for p in pts])
    slope = np.polyfit(ks, lds, 1)[0]
    return float(np.exp(2.0 * slope))


def minimal_ball_estimate(space, points, iters=200):
    """Approximate geodesic 1-center of a point set.

    Badoiu-Clarkson style: from a seed, repeatedly pull the center toward
    the current farthest point with shrinking step 1/(k+1).  Accurate to a
    couple of percent in the radius for the sizes used here.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(points) == 1:
        return points[0].copy(), 0.0
    r_cx = space.constants().r_cx
    dmax = max(space.distance(a, b) for i, a in enumerate(points)
               for b in points[i + 1:])
    if dmax >= 2.0 * r_cx:
        raise PreconditionError(
            f"minimal_ball_estimate: point spread {dmax} >= 2 r_cx = {2 * r_cx}")
    # seed: data point with the smallest maximum distance
    center = min(points, key=lambda c: max(space.distance(c, q) for q in points))
    center = center.copy()
    for k in range(iters):
        far = max(points, key=lambda q: space.distance(center, q))
        center = space.exp(center, space.log(center, far) / (k + 2.0))
    radius = max(space.distance(center, q) for q in points)
    return center, radius
