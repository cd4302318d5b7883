import math

import numpy as np
import pytest

from geomean import geocheck
from geomean.errors import DomainError
from geomean.geocheck import (Chart, comparison_check, convex_combination,
                              hull_membership, sample_triangle,
                              secant_by_intersection, tethering_check,
                              triangle_data)
from geomean.kernels import secant_euclid, secant_sphere
from geomean.manifolds import Euclidean, Hyperbolic, RealProjective, SO3, Sphere


def test_secant_oracle_trivial_alpha1_zero(rng):
    sp = Sphere(2)
    _, _, x, y1, y2 = sample_triangle(sp, rng, max_radius=0.5)
    b = sp.distance(x, y1)
    assert secant_by_intersection(sp, x, y1, y2, 0.0) == pytest.approx(b, abs=1e-9)


def test_secant_oracle_vs_sphere_formula(rng):
    sp = Sphere(2)
    done = 0
    while done < 150:
        _, _, x, y1, y2 = sample_triangle(sp, rng,
                                          max_radius=sp.constants().r_cx / 2.2)
        b, c, alpha = triangle_data(sp, x, y1, y2)
        if min(b, c) < 1e-5 or not 1e-5 < alpha < math.pi - 1e-5:
            continue
        a1 = alpha * rng.uniform()
        z = secant_sphere(b, c, a1, alpha - a1)
        zo = secant_by_intersection(sp, x, y1, y2, a1)
        assert zo == pytest.approx(z, abs=1e-8)
        done += 1


def test_secant_oracle_vs_euclid(rng):
    eu = Euclidean(3)
    done = 0
    while done < 150:
        _, _, x, y1, y2 = sample_triangle(eu, rng)
        b, c, alpha = triangle_data(eu, x, y1, y2)
        if min(b, c) < 1e-5 or not 1e-5 < alpha < math.pi - 1e-5:
            continue
        a1 = alpha * rng.uniform()
        z = secant_euclid(b, c, a1, alpha - a1)
        zo = secant_by_intersection(eu, x, y1, y2, a1)
        assert zo == pytest.approx(z, abs=1e-10)
        done += 1


def test_comparison_check_sphere():
    rep = comparison_check(Sphere(2), 1500, seed=42)
    assert rep["violations"] == 0
    assert rep["min_margin"] >= -1e-12


def test_comparison_check_hyperbolic_reversed():
    rep = comparison_check(Hyperbolic(2), 150, seed=43, exploratory=True)
    assert rep["violations"] > 0  # reverse inequality dominates
    with pytest.raises(DomainError):
        comparison_check(Hyperbolic(2), 10, seed=0)


def test_convex_combination(rng):
    sp = Sphere(2)
    o = sp.random_point(rng)
    pts = [sp.random_in_ball(o, 0.8, rng) for _ in range(4)]
    # all weight on one point
    y = convex_combination(sp, o, pts, [1, 0, 0, 0], t=1.0)
    assert sp.distance(y, pts[0]) <= 1e-12

    # Euclidean: x + t sum w_i (x_i - x); at t=1 independent of x
    eu = Euclidean(3)
    epts = rng.standard_normal((3, 3))
    w = rng.dirichlet(np.ones(3))
    x1, x2 = rng.standard_normal(3), rng.standard_normal(3)
    c1 = convex_combination(eu, x1, epts, w, 1.0)
    c2 = convex_combination(eu, x2, epts, w, 1.0)
    assert np.allclose(c1, c2, atol=1e-12)
    assert np.allclose(c1, w @ epts, atol=1e-12)

    with pytest.raises(DomainError):
        convex_combination(sp, o, pts, [0.25] * 4, t=1.5)


def test_convex_combination_stays_in_ball(rng):
    sp = Sphere(2)
    for _ in range(100):
        o = sp.random_point(rng)
        rho = 0.5 * math.pi * rng.uniform() + 1e-3
        n = int(rng.integers(2, 6))
        pts = [sp.random_in_ball(o, rho, rng) for _ in range(n)]
        w = rng.dirichlet(np.ones(n))
        x = sp.random_in_ball(o, rho, rng)
        for t in (0.25, 0.5, 0.75, 1.0):
            y = convex_combination(sp, x, pts, w, t)
            assert sp.distance(o, y) <= rho + 1e-9


def test_combination_induction_s3(rng):
    # combinations with up to 8 points stay in the ball on S^3
    sp = Sphere(3)
    for _ in range(50):
        o = sp.random_point(rng)
        rho = 0.45 * math.pi * rng.uniform() + 1e-3
        n = int(rng.integers(2, 9))
        pts = [sp.random_in_ball(o, rho, rng) for _ in range(n)]
        w = rng.dirichlet(np.ones(n))
        x = sp.random_in_ball(o, rho, rng)
        y = convex_combination(sp, x, pts, w, 1.0)
        assert sp.distance(o, y) <= rho + 1e-9


def test_weight_angle_bijection(rng):
    # the two-point combination from x traces the secant cut at the
    # matching angle: its length never exceeds the oracle secant length
    sp = Sphere(2)
    done = 0
    while done < 50:
        _, _, x, y1, y2 = sample_triangle(sp, rng,
                                          max_radius=sp.constants().r_cx / 2.2)
        b, c, alpha = triangle_data(sp, x, y1, y2)
        if min(b, c) < 1e-4 or not 1e-4 < alpha < math.pi - 1e-4:
            continue
        w = rng.uniform()
        v = w * sp.log(x, y1) + (1 - w) * sp.log(x, y2)
        nv = sp.norm(x, v)
        if nv < 1e-9:
            continue
        cos_a1 = sp.inner(x, v, sp.log(x, y1)) / (nv * b)
        a1 = math.acos(min(1.0, max(-1.0, cos_a1)))
        z = secant_by_intersection(sp, x, y1, y2, a1)
        for t in (0.25, 0.5, 1.0):
            assert t * nv <= z + 1e-8
            # the traced point sits on the launched geodesic
            y = convex_combination(sp, x, [y1, y2], [w, 1 - w], t)
            assert sp.distance(y, sp.exp(x, (t * nv) * (v / nv))) <= 1e-10
        done += 1


def test_chart_sends_geodesics_to_lines(rng):
    for space in (Sphere(2), Hyperbolic(2), RealProjective(2), SO3(),
                  Euclidean(2)):
        cst = space.constants()
        cap = min(cst.r_cx, 1.2) if math.isfinite(cst.r_cx) else 1.2
        o = space.random_point(rng)
        chart = Chart(space, o)
        for _ in range(50):
            a = space.random_in_ball(o, 0.9 * cap, rng)
            b = space.random_in_ball(o, 0.9 * cap, rng)
            mid = space.exp(a, 0.5 * space.log(a, b))
            pa, pb, pm = (chart.forward(q) for q in (a, b, mid))
            # pm lies on the segment [pa, pb]
            seg = pb - pa
            lam = float(np.dot(pm - pa, seg) / max(np.dot(seg, seg), 1e-30))
            assert -1e-9 <= lam <= 1 + 1e-9
            assert np.linalg.norm(pm - (pa + lam * seg)) <= 1e-9


def test_hull_membership(rng):
    sp = Sphere(2)
    o = np.array([0.0, 0.0, 1.0])
    dirs = [np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]),
            np.array([0, 1.0, 0]), np.array([0, -1.0, 0])]
    verts = [sp.exp(o, 0.5 * u) for u in dirs]
    assert hull_membership(sp, verts, verts[0])
    assert hull_membership(sp, verts, o)
    mid = sp.exp(verts[0], 0.5 * sp.log(verts[0], verts[2]))
    assert hull_membership(sp, verts, mid)
    outside = sp.exp(o, 0.7 * dirs[0])
    assert not hull_membership(sp, verts, outside)


def test_hull_contains_l2_mean(rng):
    from geomean.frechet import make_dataset
    from geomean.solver import SolverConfig, descend
    sp = Sphere(2)
    for _ in range(20):
        o = sp.random_point(rng)
        rho = 0.4 * math.pi * rng.uniform() + 0.05
        pts = [sp.random_in_ball(o, rho, rng) for _ in range(4)]
        w = rng.dirichlet(np.ones(4))
        ds = make_dataset(sp, pts, w, o, rho)
        tr = descend(ds, SolverConfig(p=2, step=1.0, grad_tol=1e-12,
                                      max_iters=300))
        if np.all(w > 0.02):
            assert hull_membership(sp, pts, tr.final, center=o, tol=1e-7)


def test_tethering_check_spaces():
    for space in (Sphere(2), SO3()):
        rep = tethering_check(space, 400, (0.25, 0.5, 1.0), seed=7)
        assert rep["violations"] == 0
    rep = tethering_check(Hyperbolic(2), 400, (1.0,), seed=8, exploratory=True)
    assert rep["trials"] == 400  # report-only mode
    with pytest.raises(DomainError):
        tethering_check(Hyperbolic(2), 10, (1.0,), seed=0)


def test_tethering_t0_identity(rng):
    from geomean.frechet import make_dataset
    from geomean.solver import one_step
    sp = Sphere(2)
    o = sp.random_point(rng)
    pts = [sp.random_in_ball(o, 0.5, rng) for _ in range(3)]
    ds = make_dataset(sp, pts, None, o, 0.5)
    x = sp.random_in_ball(o, 0.5, rng)
    assert sp.distance(one_step(ds, 2, x, 1e-300), x) <= 1e-12
