"""Euclidean 3-space and Minkowski 4-space primitives.

Vectors are plain float64 numpy arrays of shape (3,) or (4,). Minkowski
vectors are ordered ``(x0, x1, x2, x3)`` with signature (+, -, -, -).
"""
from __future__ import annotations

import enum
import math

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
ETA.setflags(write=False)


def _frozen(x, size: int, what: str) -> np.ndarray:
    arr = np.array(x, dtype=np.float64).reshape(-1)
    if arr.shape != (size,):
        raise ValueError(f"{what} needs {size} components, got {arr.size}")
    # a finite sum implies finite components; the full check runs only on overflow or nan
    if not (math.isfinite(sum(arr.tolist())) or np.all(np.isfinite(arr))):
        raise ValueError(f"{what} has non-finite components: {arr.tolist()}")
    arr.setflags(write=False)
    return arr


def vec3(x) -> np.ndarray:
    """Coerce ``x`` into a read-only, finite Euclidean 3-vector."""
    return _frozen(x, 3, "Vec3")


def mvec4(x) -> np.ndarray:
    """Coerce ``x`` into a read-only, finite Minkowski 4-vector."""
    return _frozen(x, 4, "MinkVec4")


def dot3(u, v) -> float:
    return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


def cross3(u, v) -> np.ndarray:
    return np.array([
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ], dtype=np.float64)


def norm3(u) -> float:
    return math.sqrt(dot3(u, u))


def mdot(u, v) -> float:
    """Lorentz product ``u0 v0 - u.v``."""
    return float(u[0] * v[0] - (u[1] * v[1] + u[2] * v[2] + u[3] * v[3]))


def spatial(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)[1:4]


class CausalClass(enum.Enum):
    TIMELIKE_FUTURE = "TimelikeFuture"
    TIMELIKE_PAST = "TimelikePast"
    NULL_FUTURE = "NullFuture"
    NULL_PAST = "NullPast"
    SPACELIKE = "Spacelike"
    ZERO = "Zero"


def causal_class(x, tol: float = 1e-10) -> CausalClass:
    """Classify ``x`` relative to the light cone, with ``tol`` on both x.x and the zero test."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if max(abs(float(c)) for c in x) <= tol:
        return CausalClass.ZERO
    sq = mdot(x, x)
    if sq < -tol:
        return CausalClass.SPACELIKE
    future = x[0] > 0
    if abs(sq) <= tol:
        return CausalClass.NULL_FUTURE if future else CausalClass.NULL_PAST
    return CausalClass.TIMELIKE_FUTURE if future else CausalClass.TIMELIKE_PAST
