"""Constant-curvature model spaces with exp/log maps and geometric constants.

Points are plain numpy arrays in an extrinsic embedding:

  * Euclidean(n): vectors in R^n.
  * Sphere(n, kappa>0) and Circle(kappa>0): unit vectors in R^{n+1}; the
    metric scales distances by 1/sqrt(kappa).
  * Hyperbolic(n, kappa<0): hyperboloid vectors X with <X,X>_M = -1/|kappa|,
    time coordinate first and positive.
  * RealProjective(n, kappa>0) and SO3: unit vectors up to sign, stored with
    a canonical representative (first coordinate of magnitude > 1e-9 made
    positive).  SO3 is RealProjective(3) on unit quaternions with kappa=1/4,
    which makes the distance the rotation angle 2*arccos|<q1,q2>|.

Tangent vectors at x are ambient arrays orthogonal to x under the ambient
(or Minkowski) inner product; their stored norm equals the geodesic speed.

Angles near 0 and pi are computed via atan2 of a projected norm rather
than arccos, so distances stay accurate right up to the cut locus (needed
for the cut-locus guard band of log to fire reliably).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutLocusError, DomainError
from .kernels import sn

_CANON_TOL = 1e-9  # first coordinate of magnitude above this fixes the sign


@dataclass(frozen=True)
class SpaceConstants:
    """Geometric constants of a space: injectivity radius, convexity radius,
    and the curvature bounds (delta, Delta) used in Hessian estimates."""
    inj: float
    r_cx: float
    delta: float
    Delta: float


class ManifoldSpace:
    """Base class; concrete spaces implement the embedding-specific parts."""

    kind = None

    def __init__(self, dim, kappa):
        self.dim = int(dim)
        self.kappa = float(kappa)

    # -- subclass responsibilities -------------------------------------
    def project(self, x):
        raise NotImplementedError

    def distance(self, x, y):
        raise NotImplementedError

    def exp(self, x, v):
        raise NotImplementedError

    def log(self, x, y):
        raise NotImplementedError

    def inner(self, x, u, v):
        """Riemannian inner product of tangent vectors at x."""
        raise NotImplementedError

    def tangent_project(self, x, g):
        """Orthogonal projection of an ambient vector onto T_x."""
        raise NotImplementedError

    def constants(self):
        raise NotImplementedError

    def random_point(self, rng):
        raise NotImplementedError

    # -- shared plumbing -----------------------------------------------
    @property
    def ambient_dim(self):
        return self.dim if self.kind == "euclidean" else self.dim + 1

    def norm(self, x, v):
        return math.sqrt(max(self.inner(x, v, v), 0.0))

    def geodesic(self, x, v, t):
        """Point at parameter t along the geodesic from x with velocity v."""
        return self.exp(x, t * np.asarray(v, dtype=float))

    def check_point(self, x, tol=1e-12):
        """Validate the representation constraint; raises DomainError."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise DomainError(
                f"{self.kind}: point shape {x.shape}, expected ({self.ambient_dim},)")
        err = self._constraint_error(x)
        if err > tol:
            raise DomainError(f"{self.kind}: representation violated by {err:.3e}")
        return x

    def _constraint_error(self, x):
        return 0.0

    def random_unit_tangent(self, x, rng):
        """Uniform direction on the unit sphere of T_x."""
        while True:
            v = self.tangent_project(x, rng.standard_normal(self.ambient_dim))
            n = self.norm(x, v)
            if n > 1e-8:
                return v / n

    def random_in_ball(self, center, radius, rng):
        """Uniform sample from the geodesic ball B(center, radius).

        Direction is uniform on the tangent sphere; the radius is drawn by
        rejection against the volume density sn(r)^(n-1) (Jacobi sine of
        the geometric curvature, so flat means density r^(n-1)).
        """
        if radius < 0:
            raise DomainError("random_in_ball: negative radius")
        if radius == 0:
            return center.copy()
        n = self.dim
        if n == 1:
            r = radius * rng.uniform()
        else:
            top = self._jacobi_sn(radius)
            while True:
                r = radius * rng.uniform()
                if rng.uniform() <= (self._jacobi_sn(r) / top) ** (n - 1):
                    break
        return self.exp(center, r * self.random_unit_tangent(center, rng))

    def _jacobi_sn(self, l):
        k = self.kappa
        return l if k == 0 else sn(k, l)

    def to_json(self):
        return {"kind": self.kind, "dim": self.dim, "kappa": self.kappa}

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, kappa={self.kappa})"


class Euclidean(ManifoldSpace):
    kind = "euclidean"

    def __init__(self, dim):
        super().__init__(dim, 0.0)

    def project(self, x):
        return np.asarray(x, dtype=float)

    def distance(self, x, y):
        return float(np.linalg.norm(np.asarray(y) - np.asarray(x)))

    def exp(self, x, v):
        return np.asarray(x, dtype=float) + np.asarray(v, dtype=float)

    def log(self, x, y):
        return np.asarray(y, dtype=float) - np.asarray(x, dtype=float)

    def inner(self, x, u, v):
        return float(np.dot(u, v))

    def tangent_project(self, x, g):
        return np.asarray(g, dtype=float)

    def constants(self):
        return SpaceConstants(inj=math.inf, r_cx=math.inf, delta=0.0, Delta=0.0)

    def random_point(self, rng):
        return rng.standard_normal(self.dim)


class Sphere(ManifoldSpace):
    """Round sphere of curvature kappa > 0, radius 1/sqrt(kappa) in effect."""

    kind = "sphere"

    def __init__(self, dim, kappa=1.0):
        if kappa <= 0:
            raise DomainError(f"Sphere: need kappa > 0, got {kappa}")
        super().__init__(dim, kappa)
        self._rk = math.sqrt(kappa)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        return x / np.linalg.norm(x)

    def _constraint_error(self, x):
        return abs(np.linalg.norm(x) - 1.0)

    def _angle(self, x, y):
        """Angle between unit vectors, stable at both 0 and pi."""
        cosq = float(np.dot(x, y))
        perp = y - cosq * x
        return math.atan2(float(np.linalg.norm(perp)), cosq)

    def distance(self, x, y):
        return self._angle(x, y) / self._rk

    def exp(self, x, v):
        v = np.asarray(v, dtype=float)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return np.asarray(x, dtype=float).copy()
        th = self._rk * nv
        return self.project(math.cos(th) * x + math.sin(th) * (v / nv))

    def log(self, x, y):
        d = self.distance(x, y)
        cst = self.constants()
        if d >= cst.inj * (1.0 - _CANON_TOL):
            raise CutLocusError(
                f"{self.kind}: log at distance {d} within cut-locus band of inj={cst.inj}")
        if d == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        u = y - float(np.dot(x, y)) * x
        nu = float(np.linalg.norm(u))
        return (d / nu) * u

    def inner(self, x, u, v):
        return float(np.dot(u, v))

    def tangent_project(self, x, g):
        g = np.asarray(g, dtype=float)
        return g - float(np.dot(g, x)) * x

    def constants(self):
        inj = math.pi / self._rk
        return SpaceConstants(inj=inj, r_cx=inj / 2.0,
                              delta=self.kappa, Delta=self.kappa)

    def random_point(self, rng):
        return self.project(rng.standard_normal(self.ambient_dim))


class Circle(Sphere):
    """The circle of curvature parameter kappa (radius 1/sqrt(kappa)).

    Intrinsically flat: inj = pi/sqrt(kappa) comes from the topology, but
    the curvature bounds for Hessian estimates are delta = Delta = 0.
    """

    kind = "circle"

    def __init__(self, kappa=1.0):
        super().__init__(1, kappa)

    def constants(self):
        inj = math.pi / self._rk
        return SpaceConstants(inj=inj, r_cx=inj / 2.0, delta=0.0, Delta=0.0)

    def point_from_angle(self, theta):
        """Point at arc-length coordinate theta/sqrt(kappa) from (1,0)."""
        return np.array([math.cos(theta), math.sin(theta)])

    def angle(self, x):
        """Inverse of point_from_angle, in (-pi, pi]."""
        a = math.atan2(x[1], x[0])
        return a if a > -math.pi else math.pi


class RealProjective(Sphere):
    """Real projective space RP^n: unit vectors modulo sign."""

    kind = "real_projective"

    def project(self, x):
        return _canonical_sign(super().project(x))

    def _lift(self, x, y):
        """Representative of y on the same side as x (nearest lift)."""
        return y if float(np.dot(x, y)) >= 0.0 else -y

    def distance(self, x, y):
        return self._angle(x, self._lift(x, y)) / self._rk

    def exp(self, x, v):
        return _canonical_sign(Sphere.exp(self, x, v))

    def log(self, x, y):
        return Sphere.log(self, x, self._lift(x, y))

    def constants(self):
        inj = math.pi / (2.0 * self._rk)
        return SpaceConstants(inj=inj, r_cx=inj / 2.0,
                              delta=self.kappa, Delta=self.kappa)


class SO3(RealProjective):
    """Rotation group as unit quaternions modulo sign.

    With kappa = 1/4 the induced distance is the rotation angle
    2*arccos|<q1,q2>| in [0, pi]; inj = pi and r_cx = pi/2.
    """

    kind = "so3"

    def __init__(self):
        super().__init__(3, 0.25)

    @staticmethod
    def from_axis_angle(axis, angle):
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        h = 0.5 * angle
        return _canonical_sign(np.concatenate(([math.cos(h)], math.sin(h) * axis)))

    @staticmethod
    def identity():
        return np.array([1.0, 0.0, 0.0, 0.0])


class Hyperbolic(ManifoldSpace):
    """Hyperboloid model of curvature kappa < 0, time coordinate first."""

    kind = "hyperbolic"

    def __init__(self, dim, kappa=-1.0):
        if kappa >= 0:
            raise DomainError(f"Hyperbolic: need kappa < 0, got {kappa}")
        super().__init__(dim, kappa)
        self._R = 1.0 / math.sqrt(-kappa)

    def minkowski(self, u, v):
        return float(-u[0] * v[0] + np.dot(u[1:], v[1:]))

    def project(self, x):
        x = np.asarray(x, dtype=float).copy()
        # recompute the time coordinate from the spatial part
        x[0] = math.sqrt(self._R**2 + float(np.dot(x[1:], x[1:])))
        return x

    def _constraint_error(self, x):
        if x[0] <= 0:
            return math.inf
        # relative to x0^2, the size of the cancelling terms
        return abs(self.minkowski(x, x) + self._R**2) / (1.0 + x[0] ** 2)

    def distance(self, x, y):
        R = self._R
        # tangential component has Minkowski norm R*sinh(d/R): asinh keeps
        # full precision at small separations where arccosh would not
        ch = -self.minkowski(x, y) / R**2
        t = y + (self.minkowski(x, y) / R**2) * x
        sh = math.sqrt(max(self.minkowski(t, t), 0.0)) / R
        if ch < 2.0:
            return R * math.asinh(sh)
        return R * math.acosh(max(ch, 1.0))

    def exp(self, x, v):
        v = np.asarray(v, dtype=float)
        nv = math.sqrt(max(self.minkowski(v, v), 0.0))
        if nv == 0.0:
            return np.asarray(x, dtype=float).copy()
        th = nv / self._R
        return self.project(math.cosh(th) * x + (self._R * math.sinh(th) / nv) * v)

    def log(self, x, y):
        d = self.distance(x, y)
        if d == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        u = y + (self.minkowski(x, y) / self._R**2) * x  # tangential part of y
        nu = math.sqrt(max(self.minkowski(u, u), 0.0))
        return (d / nu) * u

    def inner(self, x, u, v):
        return self.minkowski(u, v)

    def tangent_project(self, x, g):
        g = np.asarray(g, dtype=float)
        return g + (self.minkowski(g, x) / self._R**2) * x

    def constants(self):
        return SpaceConstants(inj=math.inf, r_cx=math.inf,
                              delta=self.kappa, Delta=self.kappa)

    def random_point(self, rng):
        origin = np.zeros(self.ambient_dim)
        origin[0] = self._R
        v = self.tangent_project(origin, rng.standard_normal(self.ambient_dim))
        return self.exp(origin, v)


def _canonical_sign(x):
    """Fix the sign of a projective representative: first coordinate of
    magnitude above the tolerance is made positive."""
    for c in x:
        if abs(c) > _CANON_TOL:
            return x if c > 0 else -x
    return x


_KINDS = {
    "euclidean": lambda dim, kappa: Euclidean(dim),
    "sphere": lambda dim, kappa: Sphere(dim, kappa),
    "hyperbolic": lambda dim, kappa: Hyperbolic(dim, kappa),
    "circle": lambda dim, kappa: Circle(kappa),
    "real_projective": lambda dim, kappa: RealProjective(dim, kappa),
    "so3": lambda dim, kappa: SO3(),
}


def make_space(kind, dim=2, kappa=1.0):
    try:
        ctor = _KINDS[kind]
    except KeyError:
        raise DomainError(f"unknown space kind {kind!r}") from None
    return ctor(dim, kappa)


def space_from_json(obj):
    """Build a space from the descriptor {"kind", "dim", "kappa"}."""
    return make_space(obj["kind"], int(obj.get("dim", 2)),
                      float(obj.get("kappa", 1.0)))
