import math

import numpy as np
import pytest

from micz import dynamics
from micz.conic import (
    lift_to_cone,
    orbit_residuals,
    plane_frame,
    plane_residuals,
    sample_orbit,
)
from micz.errors import OriginPoint
from micz.linalg import ETA, mdot
from micz.orbit_params import (
    EuclideanOrbitParams,
    MinkowskiOrbitParams,
    OrbitClass,
    classify,
    is_circle,
    to_euclidean,
    to_minkowski,
)
from micz.verify import random_euclidean, random_of_class

CANON_ELL = MinkowskiOrbitParams([1, 0, 0, 0], [0, 1, 0, 0])
CANON_PAR = MinkowskiOrbitParams([1, 0, 1, 0], [0, 1, 0, 0])
CHARGED = EuclideanOrbitParams([0.5, 0, 0.5], [0, 0, 2])


def test_orbit_residuals_on_and_off_the_circle():
    p = EuclideanOrbitParams([0, 0, 0], [0, 0, 1])
    res = orbit_residuals(p, [1, 0, 0])
    assert (res.rho1, res.rho2, res.rho_plane) == (0.0, 0.0, 0.0)
    res = orbit_residuals(p, [2, 0, 0])
    assert (res.rho1, res.rho2, res.rho_plane) == (1.0, 0.0, 0.0)
    with pytest.raises(OriginPoint):
        orbit_residuals(p, [0, 0, 0])


def test_charged_orbit_samples_have_zero_residuals():
    for r in sample_orbit(to_minkowski(CHARGED), 50):
        assert orbit_residuals(CHARGED, r).max_abs() < 1e-12


@pytest.mark.parametrize("r, x", [((1, 0, 0), (1, 1, 0, 0)), ((3, 4, 0), (5, 3, 4, 0))])
def test_lift_to_cone(r, x):
    np.testing.assert_array_equal(lift_to_cone(r), x)


def test_lift_rejects_vertex():
    with pytest.raises(OriginPoint):
        lift_to_cone([0, 0, 0])


def test_plane_residuals():
    assert plane_residuals(CANON_ELL, [1, 0, 1, 0]) == (0.0, 0.0)
    # on the plane, yet not on the cone
    x = np.array([1.0, 0, 0, 0])
    assert plane_residuals(CANON_ELL, x) == (0.0, 0.0)
    assert mdot(x, x) == 1.0
    q = MinkowskiOrbitParams([1, 0.5, 0, 0], [0, 0, 0, 1])
    for r in sample_orbit(q, 20):
        assert max(map(abs, plane_residuals(q, lift_to_cone(r)))) < 1e-12


def test_plane_frame_canonical_pairs():
    fr = plane_frame(CANON_ELL)
    np.testing.assert_allclose(fr.x_base, [1, 0, 0, 0], atol=1e-15)
    fr = plane_frame(CANON_PAR)
    x = fr.x_base
    assert x[0] - x[2] == pytest.approx(1.0, abs=1e-15)
    assert x[1] == pytest.approx(0.0, abs=1e-15)


def test_plane_frame_invariants_and_determinism():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        q = to_minkowski(random_euclidean(rng))
        fr = plane_frame(q)
        assert abs(mdot(q.a, fr.x_base) - 1) < 1e-12
        assert abs(mdot(q.l, fr.x_base)) < 1e-12
        for w in (fr.w1, fr.w2):
            assert abs(mdot(q.a, w)) < 1e-12 * max(1.0, np.max(np.abs(q.a)))
            assert abs(mdot(q.l, w)) < 1e-12 * max(1.0, np.max(np.abs(q.l)))
        assert abs(fr.w1 @ fr.w2) < 1e-12
        again = plane_frame(q)
        assert np.array_equal(again.w1, fr.w1) and np.array_equal(again.w2, fr.w2)


def test_canonical_elliptic_samples_form_unit_circle():
    pts = sample_orbit(CANON_ELL, 4)
    assert len(pts) == 4
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, rtol=1e-15)
    np.testing.assert_allclose(pts[:, 0], 0.0, atol=1e-15)


def test_canonical_parabolic_samples_lie_on_parabola():
    pts = sample_orbit(CANON_PAR, 25)
    r = np.linalg.norm(pts, axis=1)
    np.testing.assert_allclose(r - pts[:, 1], 1.0, rtol=0, atol=1e-9)
    np.testing.assert_allclose(pts[:, 0], 0.0, atol=1e-12)
    # default cap: x0 <= 1e3 / a0, and the far ends reach it
    assert r.max() <= 1e3 * (1 + 1e-12)
    assert r.max() > 0.99e3


def test_range_cap_bounds_hyperbolic_samples():
    q = to_minkowski(EuclideanOrbitParams([1.5, 0, 0], [0, 0.3, 1]))
    assert classify(q) is OrbitClass.HYPERBOLIC
    for cap in (10.0, 1e3):
        r = np.linalg.norm(sample_orbit(q, 30, range_cap=cap), axis=1)
        assert r.max() <= cap / q.a0 * (1 + 1e-12)
    with pytest.raises(ValueError):
        sample_orbit(q, 30, range_cap=1e-6)


@pytest.mark.parametrize("kind", list(OrbitClass))
def test_samples_lift_into_plane_and_cone(kind):
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = random_of_class(rng, kind)
        q = to_minkowski(p)
        for r in sample_orbit(q, 40):
            assert orbit_residuals(p, r).max_abs() < 1e-9
            x = lift_to_cone(r)
            assert max(map(abs, plane_residuals(q, x))) < 1e-9
            assert abs(mdot(x, x)) < 1e-9 * x[0] ** 2


def test_rho_plane_is_a_combination_of_the_orbit_equations():
    rng = np.random.default_rng(3)
    for _ in range(500):
        p = random_euclidean(rng)
        r = rng.normal(size=3) * 3
        res = orbit_residuals(p, r)
        # mu * (first equation) + (second equation)
        combo = res.rho2 + p.mu * res.rho1
        scale = (1 + abs(p.mu)) * (np.linalg.norm(r) * (1 + np.abs(p.A).max() + np.abs(p.L).max()) + p.gap)
        assert abs(res.rho_plane - combo) < 1e-14 * scale


def test_distinct_parameters_give_distinct_orbits():
    rng = np.random.default_rng(5)
    for _ in range(300):
        p, other = random_euclidean(rng), random_euclidean(rng)
        q, q_other = to_minkowski(p), to_minkowski(other)
        pts = sample_orbit(q, 32)
        # the orbit of q_other passes through none of p's samples
        off = max(orbit_residuals(other, r).max_abs() for r in pts)
        assert off > 1e-6
        # and p's own residuals stay at rounding level
        assert max(orbit_residuals(p, r).max_abs() for r in pts) < 1e-9
        assert np.max(np.abs(q.a - q_other.a)) > 1e-6 or np.max(np.abs(q.l - q_other.l)) > 1e-6


def test_orientation_reversal_is_a_different_orbit():
    # (A, L) and (A, -L) share the curve only when mu = 0; ordering tells them apart
    p = EuclideanOrbitParams([0.5, 0, 0], [0, 0, 1])
    flipped = EuclideanOrbitParams([0.5, 0, 0], [0, 0, -1])
    fwd = sample_orbit(to_minkowski(p), 16)
    back = sample_orbit(to_minkowski(flipped), 16)
    turn = lambda pts: np.cross(pts[1] - pts[0], pts[2] - pts[1])  # noqa: E731
    assert turn(fwd)[2] > 0 > turn(back)[2]


def test_circle_criterion_gives_constant_radius():
    rng = np.random.default_rng(9)
    for _ in range(100):
        L = rng.uniform(-2, 2, 3)
        p = EuclideanOrbitParams(rng.uniform(-0.9, 0.9) * L / np.linalg.norm(L), L)
        if p.gap < 0.01:
            continue
        assert is_circle(p)
        r = np.linalg.norm(sample_orbit(to_minkowski(p), 24), axis=1)
        assert np.ptp(r) < 1e-9


def _turning(q, pts):
    fr = plane_frame(q)
    st = np.array([fr.coordinates(lift_to_cone(r)) for r in pts])
    d = np.diff(st, axis=0)
    return d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]


@pytest.mark.parametrize("kind", list(OrbitClass))
def test_sample_order_follows_frame_orientation(kind):
    rng = np.random.default_rng(21)
    for _ in range(200):
        p = random_of_class(rng, kind)
        q = to_minkowski(p)
        fr = plane_frame(q)
        assert np.linalg.det(np.array([ETA @ q.a, ETA @ q.l, fr.w1, fr.w2])) < 0
        assert np.all(_turning(q, sample_orbit(q, 40)) > 0)
        # spatial turning agrees with the binormal L - mu A
        pts = sample_orbit(q, 40)
        turns = np.cross(pts[1:-1] - pts[:-2], pts[2:] - pts[1:-1])
        assert np.all(turns @ (p.L - p.mu * p.A) > 0)


def test_samples_match_an_integrated_trajectory():
    """Two independent routes to the same orbit: plane-cone section vs equation of motion."""
    rng = np.random.default_rng(2)
    for kind in (OrbitClass.ELLIPTIC, OrbitClass.ELLIPTIC, OrbitClass.HYPERBOLIC):
        p = random_of_class(rng, kind, min_gap=0.3)
        q = to_minkowski(p)
        s0 = dynamics.synthesize_initial_state(p)
        cfg = dynamics.IntegratorConfig(max_step=0.01)
        fwd = dynamics.integrate(s0, 30.0, cfg)
        back = dynamics.integrate(
            dynamics.PhaseState(0.0, s0.q, -s0.v, -s0.mu), 30.0, cfg)
        cloud = np.vstack([fwd.q, back.q])
        pts = sample_orbit(q, 40, range_cap=20.0)
        rmax = np.linalg.norm(cloud, axis=1).max()
        for r in pts:
            if np.linalg.norm(r) > 0.9 * rmax:
                continue
            gap = np.min(np.linalg.norm(cloud - r, axis=1))
            assert gap < 0.05 * max(1.0, np.linalg.norm(r))


def test_sample_count_precondition():
    with pytest.raises(ValueError):
        sample_orbit(CANON_ELL, 2)
    assert to_euclidean(CANON_ELL).mu == 0
    assert math.isclose(np.linalg.norm(sample_orbit(CANON_ELL, 3), axis=1).max(), 1.0)
