import math

import numpy as np
import pytest

from geomean import frechet
from geomean.errors import PreconditionError
from geomean.experiments import cross_config
from geomean.frechet import cost, make_dataset, uniform_hessian_bound
from geomean.manifolds import Circle, Euclidean, SO3, Sphere
from geomean.solver import (SolverConfig, descend, fit_tail_rate,
                            minimal_ball_estimate, multistart_uniqueness,
                            one_step)

TH1, TH2 = 2 * math.pi / 5, -2 * math.pi / 5


def circle_ds(weights):
    ci = Circle(1.0)
    return make_dataset(ci, [ci.point_from_angle(TH1), ci.point_from_angle(TH2)],
                        weights, ci.point_from_angle(0.0), TH1)


def test_euclidean_one_iteration():
    eu = Euclidean(3)
    rng = np.random.Generator(np.random.Philox(0))
    pts = rng.standard_normal((4, 3))
    w = np.array([0.1, 0.2, 0.3, 0.4])
    o = w @ pts
    rad = max(np.linalg.norm(p - o) for p in pts) + 1e-9
    ds = make_dataset(eu, pts, w, o, rad)
    tr = descend(ds, SolverConfig(p=2, step=1.0, grad_tol=1e-12),
                 x0=pts[0])
    assert tr.status == "converged"
    assert tr.n_iters == 1
    assert np.allclose(tr.final, o, atol=1e-12)
    assert tr.exit_code == 0


def test_circle_scenarios():
    ci = Circle(1.0)
    ds = circle_ds((0.1, 0.9))
    x1 = ci.point_from_angle(TH1)

    tr = descend(ds, SolverConfig(p=2, step=1.0, grad_tol=1e-13), x0=x1)
    assert tr.status == "converged"
    assert ci.angle(tr.final) == pytest.approx(-8 * math.pi / 25, abs=1e-10)

    # t = 25/18 lands exactly on the antipode of x1: cut-locus abort
    y = one_step(ds, 2, x1, 25.0 / 18.0)
    assert ci.angle(y) == pytest.approx(-3 * math.pi / 5, abs=1e-12)
    tr = descend(ds, SolverConfig(p=2, step=25.0 / 18.0, grad_tol=1e-13), x0=x1)
    assert tr.status == "cut_locus"
    assert tr.exit_code == 2
    assert tr.cut_locus_index == 0

    ds = circle_ds((0.25, 0.75))
    tr = descend(ds, SolverConfig(p=2, step=1.0, grad_tol=1e-13), x0=x1)
    assert ci.angle(tr.final) == pytest.approx(-math.pi / 5, abs=1e-10)

    y = one_step(ds, 2, x1, 11.0 / 6.0)
    assert ci.angle(y) == pytest.approx(-7 * math.pi / 10, abs=1e-12)
    tr = descend(ds, SolverConfig(p=2, step=11.0 / 6.0, grad_tol=1e-13), x0=x1)
    assert ci.angle(tr.final) == pytest.approx(-7 * math.pi / 10, abs=1e-10)
    assert tr.verdicts["stayed_in_ball"] is False


def test_one_step_fixed_point():
    ds = cross_config(0.5)
    o = ds.ball_center
    assert np.allclose(one_step(ds, 2, o, 1.0), o, atol=1e-13)


def test_max_iters_status():
    ds = cross_config(0.47 * math.pi)
    rng = np.random.Generator(np.random.Philox(1))
    x0 = ds.space.random_in_ball(ds.ball_center, ds.ball_radius, rng)
    tr = descend(ds, SolverConfig(p=2, step=0.05, grad_tol=1e-14, max_iters=3),
                 x0=x0)
    assert tr.status == "max_iters"
    assert tr.exit_code == 3
    assert tr.n_iters == 3


def test_descent_inequality_monitor(rng):
    # quantified per-step decrease with H from the uniform bound
    for trial in range(30):
        sp = Sphere(2)
        o = sp.random_point(rng)
        rho = 0.4 * math.pi * rng.uniform() + 0.05
        pts = [sp.random_in_ball(o, rho, rng) for _ in range(4)]
        ds = make_dataset(sp, pts, None, o, rho)
        H = uniform_hessian_bound(sp, rho, 2)
        t = 1.8 / H * rng.uniform() + 0.05
        x0 = sp.random_in_ball(o, rho, rng)
        tr = descend(ds, SolverConfig(p=2, step=t, grad_tol=1e-11,
                                      max_iters=300, hessian_upper=H), x0=x0)
        if tr.verdicts["continuously_stayed"]:
            assert tr.verdicts["descent_inequality"] is True


def test_stay_in_ball_sampled(rng):
    for space in (Sphere(2), SO3()):
        cap = space.constants().r_cx
        for _ in range(50):
            o = space.random_point(rng)
            rho = cap * (0.05 + 0.95 * rng.uniform())
            n = int(rng.integers(1, 6))
            pts = [space.random_in_ball(o, rho, rng) for _ in range(n)]
            ds = make_dataset(space, pts, rng.dirichlet(np.ones(n)), o, rho)
            t = rng.uniform() * 0.999 + 0.001
            x0 = space.random_in_ball(o, rho, rng)
            tr = descend(ds, SolverConfig(p=2, step=t, grad_tol=1e-9,
                                          max_iters=200), x0=x0)
            assert tr.verdicts["stayed_in_ball"] is True
            assert tr.verdicts["continuously_stayed"] is True
            assert tr.verdicts["monotone_cost"] is True


def test_stay_equivalence(rng):
    # when the endpoint stays in a strongly convex monitor ball and steps
    # are short, continuous stay follows
    sp = Sphere(3)
    for _ in range(30):
        o = sp.random_point(rng)
        rho = 0.45 * math.pi * rng.uniform() + 0.01
        pts = [sp.random_in_ball(o, rho, rng) for _ in range(3)]
        ds = make_dataset(sp, pts, None, o, rho)
        x0 = sp.random_in_ball(o, rho, rng)
        tr = descend(ds, SolverConfig(p=2, step=0.8, grad_tol=1e-9,
                                      max_iters=200), x0=x0)
        if tr.verdicts["stayed_in_ball"]:
            assert tr.verdicts["continuously_stayed"] is True


def test_multistart_uniqueness(rng):
    ds = cross_config(0.35 * math.pi)
    cfg = SolverConfig(p=2, step=1.0, grad_tol=1e-12, max_iters=500)
    rep = multistart_uniqueness(ds, cfg, 16, rng)
    assert rep["all_agree"]
    assert ds.space.distance(rep["finals"][0], ds.ball_center) <= 1e-9

    sp = Sphere(2)
    p1 = sp.exp(np.array([0.0, 0.0, 1.0]), np.array([0.2, 0.0, 0.0]))
    ds1 = make_dataset(sp, [p1], None, np.array([0.0, 0.0, 1.0]), 0.3)
    rep = multistart_uniqueness(ds1, cfg, 5, rng)
    assert rep["all_agree"]
    assert sp.distance(rep["finals"][0], p1) <= 1e-9

    bad = make_dataset(sp, [p1], None, np.array([0.0, 0.0, 1.0]), 2.0)
    with pytest.raises(PreconditionError):
        multistart_uniqueness(bad, cfg, 3, rng)


def test_multistart_so3_brute_force(rng):
    so3 = SO3()
    o = so3.random_point(rng)
    rho = 0.4 * so3.constants().r_cx
    pts = [so3.random_in_ball(o, rho, rng) for _ in range(10)]
    ds = make_dataset(so3, pts, None, o, rho)
    cfg = SolverConfig(p=2, step=1.0, grad_tol=1e-12, max_iters=500)
    rep = multistart_uniqueness(ds, cfg, 8, rng)
    assert rep["all_agree"]
    xbar = rep["finals"][0]
    # brute-force check: no sampled point in the ball does better
    f_bar = cost(ds, 2, xbar)
    best = min(cost(ds, 2, so3.random_in_ball(o, rho, rng))
               for _ in range(20000))
    assert f_bar <= best + 1e-12


def test_minimal_ball_trivial():
    ci = Circle(1.0)
    c, r = minimal_ball_estimate(ci, [ci.point_from_angle(0.7)])
    assert r == 0.0
    pts = [ci.point_from_angle(0.6), ci.point_from_angle(-0.6)]
    c, r = minimal_ball_estimate(ci, pts)
    assert ci.angle(c) == pytest.approx(0.0, abs=5e-3)
    assert r == pytest.approx(0.6, rel=0.02)


def test_minimal_ball_cap_fixture(rng):
    sp = Sphere(2)
    o = sp.random_point(rng)
    pts = [sp.random_in_ball(o, 0.6, rng) for _ in range(20)]
    c_est, r_est = minimal_ball_estimate(sp, pts)
    # dense tangent-grid oracle around the estimate
    b1 = sp.random_unit_tangent(c_est, rng)
    b2 = sp.tangent_project(c_est, np.cross(c_est, b1))
    b2 /= np.linalg.norm(b2)
    r_true = min(
        max(sp.distance(sp.exp(c_est, a * b1 + b * b2), q) for q in pts)
        for a in np.linspace(-0.15, 0.15, 61)
        for b in np.linspace(-0.15, 0.15, 61))
    assert r_est <= r_true * 1.02
    with pytest.raises(PreconditionError):
        minimal_ball_estimate(sp, [np.array([1.0, 0, 0]), np.array([-1.0, 0, 0])])


def test_fit_tail_rate(rng):
    ds = cross_config(0.35 * math.pi)
    x0 = ds.space.random_in_ball(ds.ball_center, ds.ball_radius, rng)
    tr = descend(ds, SolverConfig(p=2, step=0.5, grad_tol=1e-12, max_iters=500),
                 x0=x0)
    q = fit_tail_rate(tr)
    assert q is not None and 0 < q < 1
