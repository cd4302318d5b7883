"""The objective f_p, its gradient, and Hessian eigenvalue bounds.

f_p(x) = (1/p) sum_i w_i d(x, x_i)^p  for  2 <= p < infinity.

The gradient is -sum_i w_i d(x,x_i)^(p-2) log_x(x_i); for p = 2 the factor
d^0 is taken to be 1 even at d = 0 (half of d^2 is smooth there).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutLocusError, DomainError, PreconditionError
from .kernels import b_lower, c_upper
from .manifolds import ManifoldSpace, space_from_json


@dataclass
class WeightedDataset:
    """Data points with weights and a ball B(o, rho) certified to hold them."""

    space: ManifoldSpace
    points: np.ndarray          # (N, ambient_dim)
    weights: np.ndarray         # (N,), nonnegative, sums to 1
    ball_center: np.ndarray
    ball_radius: float
    meta: dict = field(default_factory=dict)

    @property
    def n_points(self):
        return len(self.points)

    @property
    def uniqueness_certified(self):
        """True when rho <= r_cx, so the center of mass is unique."""
        return self.ball_radius <= self.space.constants().r_cx

    def to_json(self):
        return {
            "space": self.space.to_json(),
            "points": [list(map(float, p)) for p in self.points],
            "weights": [float(w) for w in self.weights],
            "ball": {"center": list(map(float, self.ball_center)),
                     "radius": float(self.ball_radius)},
        }


def make_dataset(space, points, weights=None, ball_center=None, ball_radius=None):
    """Validate and assemble a WeightedDataset.

    Weights default to uniform.  A weight sum within 1e-9 of 1 is
    renormalized exactly once; anything worse is rejected.  Points must
    lie in the closed ball (boundary allowed up to rounding, so symmetric
    configurations placed exactly on the sphere of radius rho validate).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = len(points)
    if n < 1:
        raise DomainError("dataset needs at least one point")
    for pt in points:
        space.check_point(pt)
    if weights is None:
        weights = np.full(n, 1.0 / n)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (n,):
            raise DomainError(f"got {len(weights)} weights for {n} points")
        if np.any(weights < -1e-12) or np.any(weights > 1.0 + 1e-9):
            raise DomainError("weights must lie in [0, 1]")
        weights = np.clip(weights, 0.0, None)
        s = float(weights.sum())
        if abs(s - 1.0) > 1e-9:
            raise DomainError(f"weights sum to {s}, not 1")
        weights = weights / s
    if ball_center is None or ball_radius is None:
        raise DomainError("dataset needs an enclosing ball (o, rho)")
    ball_center = space.check_point(ball_center)
    ball_radius = float(ball_radius)
    slack = 1e-9 * max(1.0, ball_radius)
    for i, pt in enumerate(points):
        d = space.distance(ball_center, pt)
        if d > ball_radius + slack:
            raise DomainError(
                f"point {i} at distance {d} outside ball of radius {ball_radius}")
    return WeightedDataset(space, points, weights, ball_center, ball_radius)


def dataset_from_json(obj, ball_fallback=None):
    """Load a dataset from the JSON schema; `ball_fallback(space, points)`
    supplies (center, radius) when the "ball" entry is absent."""
    space = space_from_json(obj["space"])
    points = np.asarray(obj["points"], dtype=float)
    weights = obj.get("weights")
    ball = obj.get("ball")
    if ball is not None:
        center = np.asarray(ball["center"], dtype=float)
        radius = float(ball["radius"])
    elif ball_fallback is not None:
        center, radius = ball_fallback(space, points)
    else:
        raise DomainError("dataset JSON has no ball and no fallback was given")
    return make_dataset(space, points, weights, center, radius)


def _check_p(p):
    p = float(p)
    if not (2.0 <= p < math.inf):
        raise DomainError(f"exponent p must satisfy 2 <= p < inf, got {p}")
    return p


def cost(ds, p, x):
    p = _check_p(p)
    sp = ds.space
    return sum(w * sp.distance(x, xi) ** p
               for w, xi in zip(ds.weights, ds.points)) / p


def gradient(ds, p, x):
    """Riemannian gradient of f_p at x (ambient tangent array).

    Raises CutLocusError with the offending data index if x sits in the
    cut-locus band of some x_i.
    """
    p = _check_p(p)
    sp = ds.space
    g = np.zeros(sp.ambient_dim)
    for i, (w, xi) in enumerate(zip(ds.weights, ds.points)):
        try:
            lg = sp.log(x, xi)
        except CutLocusError as e:
            raise CutLocusError(f"gradient: data point {i} at cut locus: {e}",
                                index=i) from None
        if p != 2.0:
            lg = lg * sp.distance(x, xi) ** (p - 2.0)
        g -= w * lg
    return g


def grad_norm(ds, p, x):
    g = gradient(ds, p, x)
    return float(ds.space.norm(x, g))


def hessian_radial_bounds(space, d_xy):
    """Eigenvalue bounds {lower, upper} of the Hessian of x -> d(x,y)^2/2
    at distance d_xy, from the space's curvature bounds (delta, Delta)."""
    cst = space.constants()
    top = cst.inj
    if cst.Delta > 0:
        top = min(top, math.pi / math.sqrt(cst.Delta))
    if d_xy >= top:
        raise DomainError(
            f"hessian_radial_bounds: d={d_xy} >= min(inj, pi/sqrt(Delta))={top}")
    return {"lower": b_lower(cst.Delta, d_xy), "upper": c_upper(cst.delta, d_xy)}


def uniform_hessian_bound(space, rho, p):
    """H_{B(o,rho),p} = (2 rho)^(p-2) max(p-1, c_delta(2 rho)), valid for
    rho <= r_cx."""
    p = _check_p(p)
    cst = space.constants()
    if rho > cst.r_cx:
        raise PreconditionError(
            f"uniform_hessian_bound: rho={rho} exceeds r_cx={cst.r_cx}")
    if rho <= 0:
        raise DomainError(f"uniform_hessian_bound: need rho > 0, got {rho}")
    return (2.0 * rho) ** (p - 2.0) * max(p - 1.0, c_upper(cst.delta, 2.0 * rho))


def fd_hessian_quadratic_form(ds, p, x, u, h=None):
    """Central second difference of f_p along the unit direction u at x."""
    sp = ds.space
    if h is None:
        h = 1e-4 * min(1.0, sp.constants().inj)
    u = np.asarray(u, dtype=float)
    fp = cost(ds, p, sp.exp(x, h * u))
    f0 = cost(ds, p, x)
    fm = cost(ds, p, sp.exp(x, -h * u))
    return (fp - 2.0 * f0 + fm) / (h * h)
