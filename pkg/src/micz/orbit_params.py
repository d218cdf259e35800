"""The two orbit parametrizations and the scalar functionals defined on them.

``EuclideanOrbitParams`` is the pair (A, L) of Lenz vector and canonical
angular momentum with L^2 > (L.A)^2. ``MinkowskiOrbitParams`` is the pair of
Minkowski vectors (a, l) with l.l = -1, a.l = 0 and a0 > 0. Each scalar
formula lives on exactly one side; the other side reaches it through
``to_euclidean`` / ``to_minkowski``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrbit, InvalidParams
from .linalg import cross3, dot3, mdot, mvec4, norm3, vec3

EUCLIDEAN_SLACK = 1e-12
MINKOWSKI_TOL = 1e-9
CLASS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EuclideanOrbitParams:
    A: np.ndarray
    L: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", vec3(self.A))
        object.__setattr__(self, "L", vec3(self.L))

    @property
    def mu(self) -> float:
        return dot3(self.L, self.A)

    @property
    def gap(self) -> float:
        """L^2 - mu^2, which equals |r x r'|^2 along the orbit."""
        return dot3(self.L, self.L) - self.mu ** 2

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "L": self.L.tolist()}

    def __repr__(self):
        return f"EuclideanOrbitParams(A={self.A.tolist()}, L={self.L.tolist()})"


@dataclass(frozen=True, eq=False)
class MinkowskiOrbitParams:
    a: np.ndarray
    l: np.ndarray  # noqa: E741

    def __post_init__(self):
        object.__setattr__(self, "a", mvec4(self.a))
        object.__setattr__(self, "l", mvec4(self.l))

    @property
    def a0(self) -> float:
        return float(self.a[0])

    def reprojected(self) -> "MinkowskiOrbitParams":
        """Rescale l to l.l = -1 and remove the component of a along l.

        Requires l to be spacelike.
        """
        sq = mdot(self.l, self.l)
        if not sq < 0:
            raise InvalidParams([("l.l < 0", sq)])
        l = self.l / math.sqrt(-sq)  # noqa: E741
        a = self.a + mdot(self.a, l) * l
        return MinkowskiOrbitParams(a, l)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "l": self.l.tolist()}

    def __repr__(self):
        return f"MinkowskiOrbitParams(a={self.a.tolist()}, l={self.l.tolist()})"


class OrbitClass(enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


def validate_euclidean(p: EuclideanOrbitParams, slack: float = EUCLIDEAN_SLACK) -> None:
    """Raise ``DegenerateOrbit`` unless L^2 - (L.A)^2 > slack."""
    gap = p.gap
    if not gap > slack:
        raise DegenerateOrbit([("L^2 - (L.A)^2 > slack", slack - gap)])


def validate_minkowski(p: MinkowskiOrbitParams, tol: float = MINKOWSKI_TOL) -> None:
    """Raise ``InvalidParams`` listing every violated invariant of (a, l)."""
    violations = []
    ll = mdot(p.l, p.l) + 1.0
    if abs(ll) > tol:
        violations.append(("l.l = -1", abs(ll)))
    al = mdot(p.a, p.l)
    if abs(al) > tol:
        violations.append(("a.l = 0", abs(al)))
    if not p.a0 > 0:
        violations.append(("a0 > 0", -p.a0))
    if violations:
        raise InvalidParams(violations)


def magnetic_charge(p: EuclideanOrbitParams) -> float:
    return p.mu


def to_minkowski(p: EuclideanOrbitParams, slack: float = EUCLIDEAN_SLACK) -> MinkowskiOrbitParams:
    """Map (A, L) to (a, l) = ((1, A) / g, (mu, L) / sqrt(g)) with g = L^2 - mu^2."""
    validate_euclidean(p, slack)
    A, L = p.A, p.L
    mu = p.mu
    g = dot3(L, L) - mu * mu
    a = np.array([1.0, A[0], A[1], A[2]]) / g
    l = np.array([mu, L[0], L[1], L[2]]) / math.sqrt(g)  # noqa: E741
    return MinkowskiOrbitParams(a, l)


def to_euclidean(p: MinkowskiOrbitParams) -> EuclideanOrbitParams:
    """Map (a, l) to (A, L) = (a_spatial / a0, l_spatial / sqrt(a0))."""
    if not p.a0 > 0:
        raise InvalidParams([("a0 > 0", -p.a0)])
    return EuclideanOrbitParams(p.a[1:] / p.a0, p.l[1:] / math.sqrt(p.a0))


def energy_euclidean(p: EuclideanOrbitParams) -> float:
    return -(1.0 - dot3(p.A, p.A)) / (2.0 * p.gap)


def energy_minkowski(p: MinkowskiOrbitParams) -> float:
    return -mdot(p.a, p.a) / (2.0 * p.a0)


def eccentricity(p: EuclideanOrbitParams) -> float:
    """|L x A| / |L - mu A|."""
    return norm3(cross3(p.L, p.A)) / norm3(p.L - p.mu * p.A)


def one_minus_e_squared(p: EuclideanOrbitParams) -> float:
    """(L^2 - mu^2) / |L - mu A|^2 * (1 - A^2), an independent route to 1 - e^2."""
    w = p.L - p.mu * p.A
    return p.gap / dot3(w, w) * (1.0 - dot3(p.A, p.A))


def classify(p: MinkowskiOrbitParams, tol: float = CLASS_TOL) -> OrbitClass:
    sq = mdot(p.a, p.a)
    if sq > tol:
        return OrbitClass.ELLIPTIC
    if sq < -tol:
        return OrbitClass.HYPERBOLIC
    return OrbitClass.PARABOLIC


def is_circle(p: EuclideanOrbitParams, tol: float = CLASS_TOL) -> bool:
    return norm3(cross3(p.L, p.A)) <= tol * norm3(p.L)


def params_from_dict(data: dict):
    """Build either parameter type from a JSON-style dict, keyed by "A"/"L" or "a"/"l"."""
    if not isinstance(data, dict):
        raise InvalidParams([("params must be a JSON object", None)])
    keys = set(data)
    try:
        if {"A", "L"} <= keys:
            return EuclideanOrbitParams(data["A"], data["L"])
        if {"a", "l"} <= keys:
            return MinkowskiOrbitParams(data["a"], data["l"])
    except (TypeError, ValueError) as exc:
        raise InvalidParams([(f"malformed vector: {exc}", None)]) from exc
    raise InvalidParams([("expected keys A,L or a,l", None)])
