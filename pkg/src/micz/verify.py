"""Seeded random parameter generators and the invariant families run by ``micz verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conic, dynamics, lorentz
from .errors import InvalidParams, SignFlip
from .linalg import cross3, dot3, mdot
from .orbit_params import (
    EuclideanOrbitParams,
    MinkowskiOrbitParams,
    OrbitClass,
    classify,
    eccentricity,
    energy_euclidean,
    energy_minkowski,
    is_circle,
    one_minus_e_squared,
    to_euclidean,
    to_minkowski,
    validate_minkowski,
)

HORIZON = 50.0


def random_euclidean(rng, min_gap: float = 0.01, box: float = 2.0) -> EuclideanOrbitParams:
    """Components uniform in [-box, box], rejecting L^2 - (L.A)^2 <= min_gap."""
    while True:
        p = EuclideanOrbitParams(rng.uniform(-box, box, 3), rng.uniform(-box, box, 3))
        if p.gap > min_gap:
            return p


def random_of_class(rng, kind: OrbitClass, min_gap: float = 0.01) -> EuclideanOrbitParams:
    """Random parameters of a given class, chosen through |A| (1 - A^2 fixes the sign of E).

    Elliptic |A| is uniform in [0, 0.9], parabolic |A| = 1, hyperbolic |A| in [1.1, 2];
    L is uniform in [-2, 2]^3.
    """
    while True:
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        if kind is OrbitClass.ELLIPTIC:
            size = rng.uniform(0.0, 0.9)
        elif kind is OrbitClass.PARABOLIC:
            size = 1.0
        else:
            size = rng.uniform(1.1, 2.0)
        p = EuclideanOrbitParams(size * d, rng.uniform(-2.0, 2.0, 3))
        if p.gap > min_gap:
            return p


def with_charge(rng, mu: float, min_gap: float = 0.01) -> EuclideanOrbitParams:
    """Random elliptic parameters with L.A equal to ``mu``."""
    while True:
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        A = rng.uniform(0.2, 0.9) * d
        L = rng.uniform(-2.0, 2.0, 3)
        L = L + (mu - dot3(L, A)) / dot3(A, A) * A
        p = EuclideanOrbitParams(A, L)
        if p.gap > min_gap:
            return p


def random_parabolic_pair(seed: int, max_rapidity: float = 2.0) -> MinkowskiOrbitParams:
    """The canonical null pair moved by a random group element."""
    return lorentz.act(lorentz.random_element(seed, max_rapidity), lorentz.CANONICAL_PARABOLIC)


def random_future_vector(rng, null: bool) -> np.ndarray:
    v = rng.normal(size=3) * rng.uniform(0.1, 3.0)
    x0 = math.sqrt(dot3(v, v)) * (1.0 if null else rng.uniform(1.01, 3.0))
    return np.concatenate(([x0], v))


def rel(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def vec_rel(x, y) -> float:
    scale = max(float(np.max(np.abs(x))), float(np.max(np.abs(y))))
    return 0.0 if scale == 0 else float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) / scale


@dataclass
class Family:
    """Worst residual of one invariant family against its tolerance."""

    name: str
    tolerance: float
    worst: float = 0.0
    checked: int = 0
    failures: int = 0

    def record(self, value: float, ok: bool | None = None):
        self.checked += 1
        self.worst = max(self.worst, float(value))
        if ok is None:
            ok = value < self.tolerance
        if not ok:
            self.failures += 1

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.failures == 0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "worst": self.worst,
            "tolerance": self.tolerance,
        }


def check_validation(rng, count: int, perturb: float = 0.0) -> Family:
    fam = Family("validation", 1e-9)
    for _ in range(count):
        q = to_minkowski(random_euclidean(rng))
        if perturb:
            q = MinkowskiOrbitParams(q.a, q.l + np.array([0.0, perturb, 0.0, 0.0]))
        try:
            validate_minkowski(q)
            fam.record(max(abs(mdot(q.l, q.l) + 1), abs(mdot(q.a, q.l))))
        except InvalidParams as exc:
            fam.record(max(v for _, v in exc.violations if v is not None), ok=False)
    return fam


def check_bijection(rng, count: int) -> list[Family]:
    trip = Family("round_trip", 1e-12)
    inv = Family("minkowski_invariants", 1e-12)
    energy = Family("energy_coherence", 1e-12)
    ecc = Family("eccentricity_identity", 1e-12)
    for _ in range(count):
        p = random_euclidean(rng)
        q = to_minkowski(p)
        back = to_euclidean(q)
        trip.record(max(vec_rel(back.A, p.A), vec_rel(back.L, p.L)))
        defect = max(abs(mdot(q.l, q.l) + 1), abs(mdot(q.a, q.l)))
        inv.record(defect, ok=defect < inv.tolerance and q.a0 > 0)
        E = energy_euclidean(p)
        energy.record(abs(E - energy_minkowski(q)) / (1 + abs(E)))
        e = eccentricity(p)
        ecc.record(rel(1 - e * e, one_minus_e_squared(p)))
    return [trip, inv, energy, ecc]


def check_synthesis(rng, count: int) -> Family:
    fam = Family("synthesis", 1e-10)
    for _ in range(count):
        p = random_euclidean(rng)
        s = dynamics.synthesize_initial_state(p)
        dL = np.max(np.abs(dynamics.angular_momentum(s) - p.L))
        dA = np.max(np.abs(dynamics.lenz_vector(s) - p.A))
        fam.record(max(dL, dA))
    return fam


def check_dynamics(rng, count: int, T: float = HORIZON, rel_tol: float = 1e-10) -> list[Family]:
    """Integrated trajectories for parameters cycling through the three classes."""
    conserve = Family("conservation", 1e-6)
    charge = Family("charge_identity", 1e-8)
    locus = Family("locus_integrated", 1e-6)
    orient = Family("orientation", 0.0)
    classes = Family("classification", 0.0)
    cfg = dynamics.IntegratorConfig(rel_tol=rel_tol)
    kinds = [OrbitClass.ELLIPTIC, OrbitClass.PARABOLIC, OrbitClass.HYPERBOLIC]
    for i in range(count):
        kind = kinds[i % 3]
        p = random_of_class(rng, kind)
        q = to_minkowski(p)
        tr = dynamics.integrate(dynamics.synthesize_initial_state(p), T, cfg)
        dr = dynamics.drift_report(tr)
        conserve.record(max(dr.max_dL, dr.max_dA, dr.max_dE))
        L, A, E = dynamics.conserved_quantities(tr)
        charge.record(float(np.max(np.abs(np.sum(L * A, axis=1) - p.mu))))
        locus.record(max(conic.orbit_residuals(p, r).max_abs() for r in tr.q))
        binormal = p.L - p.mu * p.A
        worst_dot = min(
            dot3(cross3(s.v, dynamics.acceleration(s.q, s.v, s.mu)), binormal) for s in tr
        )
        orient.record(-worst_dot, ok=worst_dot > 0)
        classes.record(0.0, ok=classification_consistent(p, q, tr, kind))
    return [conserve, charge, locus, orient, classes]


def classification_consistent(p, q, tr, kind) -> bool:
    """Class from a.a, class from -E and the radial behaviour all agree with ``kind``."""
    E = energy_minkowski(q)
    by_energy = (OrbitClass.ELLIPTIC if E < -1e-10 else
                 OrbitClass.HYPERBOLIC if E > 1e-10 else OrbitClass.PARABOLIC)
    if classify(q) is not kind or by_energy is not kind:
        return False
    r = tr.radius
    if kind is OrbitClass.ELLIPTIC:
        return bool(np.max(r) < 2.0 * (1.0 + eccentricity(p)) / (-2.0 * E) + 1e-9)
    late = r[len(r) // 2:]
    return bool(len(late) > 1 and np.all(np.diff(late) > 0))


def check_sampling(rng, count: int, n: int = 64) -> Family:
    fam = Family("locus_sampled", 1e-9)
    kinds = [OrbitClass.ELLIPTIC, OrbitClass.PARABOLIC, OrbitClass.HYPERBOLIC]
    for i in range(count):
        p = random_of_class(rng, kinds[i % 3])
        q = to_minkowski(p)
        worst = 0.0
        for r in conic.sample_orbit(q, n):
            x = conic.lift_to_cone(r)
            worst = max(worst, conic.orbit_residuals(p, r).max_abs(),
                        *map(abs, conic.plane_residuals(q, x)), abs(mdot(x, x)) / x[0] ** 2)
        fam.record(worst)
    return fam


def check_canonicalization(rng, count: int, seed: int = 0) -> list[Family]:
    ell = Family("canonicalize_elliptic", 1e-8)
    par = Family("canonicalize_parabolic", 1e-8)
    trans = Family("transport", 1e-7)
    for i in range(count):
        q = to_minkowski(random_of_class(rng, OrbitClass.ELLIPTIC))
        ell.record(lorentz.params_distance(
            lorentz.act(lorentz.canonicalize_elliptic(q), q), lorentz.CANONICAL_ELLIPTIC))
        pp = random_parabolic_pair(seed * 1_000_003 + 2 * i)
        par.record(lorentz.params_distance(
            lorentz.act(lorentz.canonicalize_parabolic(pp), pp), lorentz.CANONICAL_PARABOLIC))
        pairs = [
            (to_minkowski(with_charge(rng, 0.0)), to_minkowski(with_charge(rng, 1.0))),
            (q, to_minkowski(random_of_class(rng, OrbitClass.ELLIPTIC))),
            (pp, random_parabolic_pair(seed * 1_000_003 + 2 * i + 1)),
        ]
        for p1, p2 in pairs:
            trans.record(lorentz.params_distance(lorentz.act(lorentz.transport(p1, p2), p1), p2))
    return [ell, par, trans]


def check_sign_preservation(rng, count: int, seed: int = 0) -> list[Family]:
    keep = Family("sign_preserved", 0.0)
    flip = Family("sign_flip_counterexample", 0.0)
    for i in range(count):
        g = lorentz.random_element(seed * 1_000_003 + i)
        a = random_future_vector(rng, null=bool(i % 2))
        image = g.lam * (g.Lam.m @ a)
        keep.record(max(0.0, -image[0]), ok=image[0] > 0)
    for _ in range(count):
        q = to_minkowski(random_of_class(rng, OrbitClass.HYPERBOLIC))
        g = lorentz.OrientedSymmetry(1.0, lorentz.sign_flip_boost(q.a))
        try:
            lorentz.act(g, q)
            flip.record(1.0, ok=False)
        except SignFlip:
            flip.record(0.0, ok=True)
    return [keep, flip]


def check_circle() -> list[Family]:
    fam = Family("circle_regression", 1e-6)
    s0 = dynamics.PhaseState(0.0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0)
    tr = dynamics.integrate(s0, 2.0 * math.pi)
    fam.record(float(max(np.max(np.abs(tr.q[-1] - s0.q)), np.max(np.abs(tr.v[-1] - s0.v)))))
    circ = Family("circle_criterion", 0.0)
    circ.record(0.0, ok=is_circle(dynamics.orbit_params_of(s0)))
    return [fam, circ]


def run_verify(seed: int = 0, count: int = 100, perturb: float = 0.0) -> dict:
    """Run every invariant family; the report depends only on the arguments."""
    rng = np.random.default_rng(seed)
    families = [check_validation(rng, count, perturb)]
    families += check_bijection(rng, count)
    families.append(check_synthesis(rng, count))
    families += check_dynamics(rng, count)
    families.append(check_sampling(rng, count))
    families += check_canonicalization(rng, count, seed)
    families += check_sign_preservation(rng, count, seed)
    families += check_circle()
    return {
        "seed": seed,
        "count": count,
        "perturb": perturb,
        "passed": all(f.passed for f in families),
        "families": {f.name: f.to_dict() for f in families},
    }
