"""Orbits as geometric loci.

An orbit is the set of points r != 0 with r - A.r = L^2 - mu^2 and
L.r = mu r. Lifted to the future light cone via x = (|r|, r), the same set
is the section of the cone by the 2-plane {a.x = 1, l.x = 0}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OriginPoint
from .linalg import cross3, dot3, mdot, mvec4, norm3, spatial, vec3
from .orbit_params import (
    EuclideanOrbitParams,
    MinkowskiOrbitParams,
    OrbitClass,
    classify,
    validate_minkowski,
)

RANGE_CAP = 1e3


@dataclass(frozen=True)
class OrbitResiduals:
    rho1: float
    rho2: float
    rho_plane: float

    def max_abs(self) -> float:
        return max(abs(self.rho1), abs(self.rho2), abs(self.rho_plane))


@dataclass(frozen=True, eq=False)
class PlaneFrame:
    x_base: np.ndarray
    w1: np.ndarray
    w2: np.ndarray

    def coordinates(self, x) -> tuple[float, float]:
        """Coordinates (s, t) of a plane point x = x_base + s w1 + t w2."""
        d = np.asarray(x, dtype=np.float64) - self.x_base
        return float(self.w1 @ d), float(self.w2 @ d)


def orbit_residuals(p: EuclideanOrbitParams, r) -> OrbitResiduals:
    r = np.asarray(r, dtype=np.float64)
    rr = norm3(r)
    if rr == 0.0:
        raise OriginPoint("orbit residuals are undefined at the origin")
    mu = p.mu
    gap = p.gap
    rho1 = rr - dot3(p.A, r) - gap
    rho2 = dot3(p.L, r) - mu * rr
    rho_plane = dot3(p.L - mu * p.A, r) - mu * gap
    return OrbitResiduals(rho1, rho2, rho_plane)


def lift_to_cone(r) -> np.ndarray:
    r = vec3(r)
    rr = norm3(r)
    if rr == 0.0:
        raise OriginPoint("the cone vertex is not part of any orbit")
    return mvec4([rr, r[0], r[1], r[2]])


def plane_residuals(p: MinkowskiOrbitParams, x) -> tuple[float, float]:
    return mdot(p.a, x) - 1.0, mdot(p.l, x)


def plane_frame(p: MinkowskiOrbitParams) -> PlaneFrame:
    """Deterministic coordinates on the plane {a.x = 1, l.x = 0}.

    ``x_base`` is the Euclidean minimum-norm point of the plane. ``w1`` and
    ``w2`` are a Euclidean-orthonormal basis of its direction space, built by
    Gram-Schmidt from the coordinate axes. The pair is oriented so that
    det[eta a, eta l, w1, w2] < 0; with that choice, samples taken in the
    direction of motion turn counterclockwise in (s, t) for every orbit class.
    """
    rows = np.array([[p.a[0], -p.a[1], -p.a[2], -p.a[3]],
                     [p.l[0], -p.l[1], -p.l[2], -p.l[3]]])
    x_base = rows.T @ np.linalg.solve(rows @ rows.T, np.array([1.0, 0.0]))

    basis = []
    for row in rows:
        v = row - sum((row @ b) * b for b in basis)
        basis.append(v / np.linalg.norm(v))
    spans = []
    candidates = list(np.eye(4))
    for _ in range(2):
        residuals = []
        for e in candidates:
            v = e - sum((e @ b) * b for b in basis + spans)
            residuals.append(v)
        k = int(np.argmax([np.linalg.norm(v) for v in residuals]))
        v = residuals[k]
        # second pass of Gram-Schmidt keeps the frame orthogonal to ~1e-16
        v = v - sum((v @ b) * b for b in basis + spans)
        spans.append(v / np.linalg.norm(v))
        del candidates[k]
    w1, w2 = spans
    if np.linalg.det(np.array([rows[0], rows[1], w1, w2])) > 0:
        w2 = -w2
    return PlaneFrame(mvec4(x_base), mvec4(w1), mvec4(w2))


def _circle_basis(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal e1, e2 with e1 x e2 = u, for a unit vector u."""
    for axis in np.eye(3):
        if abs(dot3(axis, u)) < 0.9:
            break
    e1 = axis - dot3(axis, u) * u
    e1 /= norm3(e1)
    return e1, cross3(u, e1)


def sample_orbit(p: MinkowskiOrbitParams, n: int, range_cap: float = RANGE_CAP,
                 class_tol: float | None = None) -> np.ndarray:
    """Return an (n, 3) array of orbit points in the direction of motion.

    Directions n on the unit sphere with (1, n) . l = 0 form a circle around
    the spatial part of l; along it the cone point with a.x = 1 is
    x = (1, n) / (a.(1, n)). Closed orbits are sampled over the whole circle
    (endpoint excluded). Open orbits are sampled on the arc where
    x0 <= range_cap / a0, endpoints included.
    """
    if n < 3:
        raise ValueError("need at least 3 samples")
    validate_minkowski(p)
    lvec = spatial(p.l)
    lnorm = norm3(lvec)
    u = lvec / lnorm
    c = p.l[0] / lnorm  # cosine of the cone half-angle around u
    s = math.sqrt(max(0.0, 1.0 - c * c))
    e1, e2 = _circle_basis(u)
    avec = spatial(p.a)
    # a.(1, n(phi)) = g0 - R cos(phi - phi_a)
    g0 = p.a[0] - c * dot3(avec, u)
    ax, ay = s * dot3(avec, e1), s * dot3(avec, e2)
    R = math.hypot(ax, ay)
    phi_a = math.atan2(ay, ax)

    kind = classify(p) if class_tol is None else classify(p, class_tol)
    if kind is OrbitClass.ELLIPTIC:
        phi = phi_a + np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    else:
        # x0 <= range_cap / a0  <=>  a.(1, n) >= a0 / range_cap
        cos_cut = (g0 - p.a[0] / range_cap) / R
        if cos_cut <= -1.0:
            raise ValueError("range cap lies below the orbit's closest approach")
        delta = math.acos(min(1.0, cos_cut))
        phi = phi_a + np.linspace(delta, 2.0 * math.pi - delta, n)

    dirs = (c * u)[None, :] + s * (np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2)
    denom = p.a[0] - dirs @ avec
    return dirs / denom[:, None]
