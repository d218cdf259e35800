"""Equation of motion, constants of motion and trajectory integration.

Units have unit mass and unit coupling, so the motion obeys

    r'' = -r' x B + (mu^2 / r^4 - 1 / r^3) r,   B = mu r / r^3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853

from .errors import NearCollision, OriginPoint, StepLimitExceeded
from .linalg import cross3, dot3, norm3, vec3
from .orbit_params import EuclideanOrbitParams, validate_euclidean


@dataclass(frozen=True, eq=False)
class PhaseState:
    t: float
    q: np.ndarray
    v: np.ndarray
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "q", vec3(self.q))
        object.__setattr__(self, "v", vec3(self.v))
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "mu", float(self.mu))
        if norm3(self.q) == 0.0:
            raise OriginPoint("phase state position must be nonzero")

    def to_dict(self) -> dict:
        return {"t": self.t, "q": self.q.tolist(), "v": self.v.tolist(), "mu": self.mu}


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 1_000_000
    # set to a step size to use classical RK4 with fixed steps instead
    fixed_step: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.fixed_step is not None and not self.fixed_step > 0:
            raise ValueError("fixed_step must be positive")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Accepted integration steps stored column-wise.

    Iterating yields ``PhaseState`` objects in time order.
    """

    t: np.ndarray
    q: np.ndarray
    v: np.ndarray
    mu: float
    config_echo: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i) -> PhaseState:
        return PhaseState(self.t[i], self.q[i], self.v[i], self.mu)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def samples(self) -> list[PhaseState]:
        return list(self)

    @property
    def radius(self) -> np.ndarray:
        return np.linalg.norm(self.q, axis=1)


@dataclass(frozen=True)
class DriftReport:
    max_dL: float
    max_dA: float
    max_dE: float

    def to_dict(self) -> dict:
        return {"max_dL": self.max_dL, "max_dA": self.max_dA, "max_dE": self.max_dE}


def _radius(q) -> float:
    r = norm3(q)
    if r == 0.0:
        raise OriginPoint("the origin is excluded from configuration space")
    return r


def magnetic_field(q, mu: float) -> np.ndarray:
    r = _radius(q)
    return mu * np.asarray(q, dtype=np.float64) / r ** 3


def acceleration(q, v, mu: float) -> np.ndarray:
    r = _radius(q)
    q = np.asarray(q, dtype=np.float64)
    B = mu * q / r ** 3
    return -cross3(v, B) + (mu * mu / r ** 4 - 1.0 / r ** 3) * q


def angular_momentum(s: PhaseState) -> np.ndarray:
    return cross3(s.q, s.v) + s.mu * s.q / _radius(s.q)


def lenz_vector(s: PhaseState) -> np.ndarray:
    return cross3(angular_momentum(s), s.v) + s.q / _radius(s.q)


def energy(s: PhaseState) -> float:
    r = _radius(s.q)
    return 0.5 * dot3(s.v, s.v) - 1.0 / r + s.mu * s.mu / (2.0 * r * r)


def orbit_params_of(s: PhaseState) -> EuclideanOrbitParams:
    return EuclideanOrbitParams(lenz_vector(s), angular_momentum(s))


def _rhs(mu: float):
    mu2 = mu * mu

    def f(t, y):
        x, y_, z, vx, vy, vz = y
        r2 = x * x + y_ * y_ + z * z
        r = math.sqrt(r2)
        r3 = r2 * r
        bx, by, bz = mu * x / r3, mu * y_ / r3, mu * z / r3
        radial = mu2 / (r2 * r2) - 1.0 / r3
        return np.array([
            vx, vy, vz,
            -(vy * bz - vz * by) + radial * x,
            -(vz * bx - vx * bz) + radial * y_,
            -(vx * by - vy * bx) + radial * z,
        ])

    return f


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(s0: PhaseState, T: float, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate from ``s0`` over a time span ``T``, keeping every accepted step.

    The adaptive path uses the embedded Dormand-Prince 8(5,3) pair with step
    rejection. ``cfg.fixed_step`` switches to classical RK4 with constant steps
    (the last step is shortened to land on ``t0 + T``).
    """
    cfg = cfg or IntegratorConfig()
    if not T > 0:
        raise ValueError("T must be positive")
    f = _rhs(s0.mu)
    guard = math.sqrt(cfg.abs_tol)
    t_end = s0.t + T
    y = np.concatenate([s0.q, s0.v])
    ts, ys = [s0.t], [y]

    def accept(t, y):
        if math.sqrt(y[0] ** 2 + y[1] ** 2 + y[2] ** 2) < guard:
            raise NearCollision(f"|q| fell below {guard:g} at t={t:g}")
        if len(ts) > cfg.max_steps:
            raise StepLimitExceeded(f"more than {cfg.max_steps} steps before t={t_end:g}")
        ts.append(t)
        ys.append(y)

    if cfg.fixed_step is not None:
        t = s0.t
        while t < t_end:
            h = min(cfg.fixed_step, t_end - t)
            y = _rk4_step(f, t, y, h)
            t = t_end if h < cfg.fixed_step else t + h
            accept(t, y)
    else:
        solver = DOP853(f, s0.t, y, t_end, rtol=cfg.rel_tol, atol=cfg.abs_tol,
                        max_step=cfg.max_step)
        while solver.status == "running":
            msg = solver.step()
            if solver.status == "failed":
                raise StepLimitExceeded(f"integrator failed at t={solver.t:g}: {msg}")
            accept(solver.t, solver.y.copy())

    Y = np.array(ys)
    return Trajectory(np.array(ts), Y[:, :3], Y[:, 3:], s0.mu, cfg)


def conserved_quantities(tr: Trajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum, Lenz vector and energy at every sample, vectorized."""
    q, v, mu = tr.q, tr.v, tr.mu
    r = np.linalg.norm(q, axis=1)[:, None]
    L = np.cross(q, v) + mu * q / r
    A = np.cross(L, v) + q / r
    E = 0.5 * np.sum(v * v, axis=1) - 1.0 / r[:, 0] + mu * mu / (2.0 * r[:, 0] ** 2)
    return L, A, E


def drift_report(tr: Trajectory) -> DriftReport:
    L, A, E = conserved_quantities(tr)
    return DriftReport(
        float(np.max(np.linalg.norm(L - L[0], axis=1))),
        float(np.max(np.linalg.norm(A - A[0], axis=1))),
        float(np.max(np.abs(E - E[0]))),
    )


def synthesize_initial_state(p: EuclideanOrbitParams) -> PhaseState:
    """A phase state at t=0 whose angular momentum and Lenz vector are p's.

    A unit vector n in a plane containing L and A is chosen with L.n = mu and
    |A - n| maximal; then v = (A - n) x L / L^2 and q = v x (L - mu n) / v^2.
    The resulting q is the point of the orbit nearest the origin.
    """
    validate_euclidean(p)
    L, A = p.L, p.A
    mu = p.mu
    L2 = dot3(L, L)
    Lnorm = math.sqrt(L2)
    Lhat = L / Lnorm
    perp = A - dot3(A, Lhat) * Lhat
    if norm3(perp) > 1e-14 * max(1.0, norm3(A)):
        ehat = perp / norm3(perp)
        along = dot3(A, ehat)
    else:
        for axis in np.eye(3):
            if abs(dot3(axis, Lhat)) < 0.9:
                break
        ehat = axis - dot3(axis, Lhat) * Lhat
        ehat /= norm3(ehat)
        along = 0.0
    beta = math.sqrt(max(0.0, 1.0 - mu * mu / L2))
    # |A - n|^2 = A^2 + 1 - 2 A.n, so the larger distance has the smaller A.n
    if along > 0:
        beta = -beta
    n = (mu / Lnorm) * Lhat + beta * ehat
    v = cross3(A - n, L) / L2
    q = cross3(v, L - mu * n) / dot3(v, v)
    return PhaseState(0.0, q, v, mu)
