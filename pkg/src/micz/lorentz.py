"""The group O+(1,3) x R+ acting on Minkowski orbit parameters.

An element (Lam, lam) sends (a, l) to (lam * Lam a, Lam l). Because Lam
preserves the Lorentz product, l.l = -1 and a.l = 0 survive the action, and
a0 > 0 survives it exactly when a is future timelike or future null. The
canonicalizers below build, step by step, the element carrying any elliptic
(resp. parabolic) pair to

    a = (1, 0, 0, 0), l = (0, 1, 0, 0)    (resp. a = (1, 0, 1, 0)),

so composing one with the inverse of another transports any orbit to any
other orbit of the same class, across magnetic charges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClassBoundary,
    HyperbolicUnsupported,
    InvalidTransform,
    NonUnitDirection,
    SignFlip,
    WrongClass,
)
from .linalg import ETA, cross3, dot3, mdot, norm3, spatial, vec3
from .orbit_params import CLASS_TOL, MinkowskiOrbitParams, OrbitClass, classify

GROUP_TOL = 1e-10

CANONICAL_ELLIPTIC = MinkowskiOrbitParams([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0])
CANONICAL_PARABOLIC = MinkowskiOrbitParams([1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0])


def lorentz_defect(m: np.ndarray) -> float:
    """max |m^T eta m - eta|, scaled down by the squared entry size of m."""
    scale = max(1.0, float(np.max(np.abs(m)))) ** 2
    return float(np.max(np.abs(m.T @ ETA @ m - ETA))) / scale


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.float64)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise InvalidTransform("expected a finite 4x4 matrix")
        defect = lorentz_defect(m)
        if defect > GROUP_TOL:
            raise InvalidTransform(f"m^T eta m differs from eta by {defect:.3e}")
        if m[0, 0] < 1.0 - GROUP_TOL:
            raise InvalidTransform(f"not orthochronous: m00 = {m[0, 0]!r}")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def __matmul__(self, other):
        if isinstance(other, LorentzTransform):
            return LorentzTransform(self.m @ other.m)
        return self.m @ np.asarray(other, dtype=np.float64)

    def inverse(self) -> "LorentzTransform":
        return LorentzTransform(ETA @ self.m.T @ ETA)


IDENTITY = LorentzTransform(np.eye(4))


@dataclass(frozen=True, eq=False)
class OrientedSymmetry:
    lam: float
    Lam: LorentzTransform

    def __post_init__(self):
        lam = float(self.lam)
        if not (lam > 0 and math.isfinite(lam)):
            raise InvalidTransform(f"scaling must be positive, got {lam!r}")
        object.__setattr__(self, "lam", lam)
        if not isinstance(self.Lam, LorentzTransform):
            object.__setattr__(self, "Lam", LorentzTransform(self.Lam))

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "matrix": self.Lam.m.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "OrientedSymmetry":
        return cls(data["lambda"], LorentzTransform(data["matrix"]))


def identity() -> OrientedSymmetry:
    return OrientedSymmetry(1.0, IDENTITY)


def scaling(lam: float) -> OrientedSymmetry:
    return OrientedSymmetry(lam, IDENTITY)


def _unit(direction, what="direction") -> np.ndarray:
    d = vec3(direction)
    if abs(norm3(d) - 1.0) > 1e-12:
        raise NonUnitDirection(f"{what} must be a unit vector, |d| = {norm3(d)!r}")
    return d


def _embed(R: np.ndarray) -> np.ndarray:
    m = np.eye(4)
    m[1:, 1:] = R
    return m


def boost(direction, rapidity: float) -> LorentzTransform:
    """Pure boost sending (1, 0) to (cosh chi, sinh chi * direction)."""
    d = _unit(direction)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    m = np.eye(4)
    m[0, 0] = ch
    m[0, 1:] = sh * d
    m[1:, 0] = sh * d
    m[1:, 1:] += (ch - 1.0) * np.outer(d, d)
    return LorentzTransform(m)


def rotation_matrix3(axis, angle: float) -> np.ndarray:
    k = _unit(axis, "rotation axis")
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def rotation(axis, angle: float) -> LorentzTransform:
    """Right-handed spatial rotation about ``axis``, fixing x0."""
    return LorentzTransform(_embed(rotation_matrix3(axis, angle)))


def spatial_reflection(normal) -> LorentzTransform:
    """Reflection of space in the plane orthogonal to ``normal``; det = -1."""
    n = _unit(normal, "reflection normal")
    return LorentzTransform(_embed(np.eye(3) - 2.0 * np.outer(n, n)))


def spatial_transform(R) -> LorentzTransform:
    """Embed an orthogonal 3x3 matrix into O+(1,3)."""
    return LorentzTransform(_embed(np.asarray(R, dtype=np.float64)))


def compose(g1: OrientedSymmetry, g2: OrientedSymmetry) -> OrientedSymmetry:
    """The element acting as g2 first, then g1."""
    return OrientedSymmetry(g1.lam * g2.lam, g1.Lam @ g2.Lam)


def inverse(g: OrientedSymmetry) -> OrientedSymmetry:
    return OrientedSymmetry(1.0 / g.lam, g.Lam.inverse())


def act(g: OrientedSymmetry, p: MinkowskiOrbitParams) -> MinkowskiOrbitParams:
    """(lam * Lam a, Lam l); raises SignFlip if the image leaves a0 > 0."""
    a = g.lam * (g.Lam.m @ p.a)
    l = g.Lam.m @ p.l  # noqa: E741
    if not a[0] > 0:
        raise SignFlip(f"image has a0 = {a[0]!r}; a.a = {mdot(p.a, p.a)!r} is not >= 0")
    return MinkowskiOrbitParams(a, l)


def params_distance(p: MinkowskiOrbitParams, q: MinkowskiOrbitParams) -> float:
    """Largest componentwise gap between two parameter pairs."""
    return float(max(np.max(np.abs(p.a - q.a)), np.max(np.abs(p.l - q.l))))


def _align(u: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """Rotation matrix sending unit u to e1 and, if given, the part of w
    orthogonal to u into the positive e2 direction."""
    if w is not None:
        w_perp = w - dot3(w, u) * u
        n = norm3(w_perp)
        if n > 1e-12 * max(1.0, norm3(w)):
            e2 = w_perp / n
            return np.array([u, e2, cross3(u, e2)])
    e1 = np.array([1.0, 0.0, 0.0])
    c = dot3(u, e1)
    k = cross3(u, e1)
    s = norm3(k)
    if s < 1e-15:
        if c > 0:
            return np.eye(3)
        # anti-parallel: half turn about the fixed axis e3
        return rotation_matrix3([0.0, 0.0, 1.0], math.pi)
    return rotation_matrix3(k / s, math.atan2(s, c))


def _check_class(p, expected: OrbitClass, tol: float):
    kind = classify(p, tol)
    if kind is OrbitClass.HYPERBOLIC:
        raise HyperbolicUnsupported("no group action is defined on hyperbolic orbits")
    if kind is not expected:
        raise WrongClass(f"expected a {expected.value} pair, got {kind.value}")


def canonicalize_elliptic(p: MinkowskiOrbitParams, tol: float = CLASS_TOL) -> OrientedSymmetry:
    """Element sending an elliptic pair to (1, 0, 0, 0), (0, 1, 0, 0).

    Boost to the rest frame of a (l0 then vanishes since a.l = 0), rotate
    the spatial part of l onto axis 1, then scale a0 to 1.
    """
    _check_class(p, OrbitClass.ELLIPTIC, tol)
    if mdot(p.a, p.a) <= 10.0 * tol:
        raise ClassBoundary(f"a.a = {mdot(p.a, p.a)!r} is within 10*tol of the parabolic boundary")
    avec = spatial(p.a)
    speed = norm3(avec) / p.a0
    if speed > 0:
        B = boost(avec / norm3(avec), -math.atanh(speed))
    else:
        B = IDENTITY
    l1 = B.m @ p.l
    R = spatial_transform(_align(l1[1:] / norm3(l1[1:])))
    Lam = R @ B
    a_rest = Lam.m @ p.a
    return OrientedSymmetry(1.0 / a_rest[0], Lam)


def canonicalize_parabolic(p: MinkowskiOrbitParams, tol: float = CLASS_TOL) -> OrientedSymmetry:
    """Element sending a parabolic pair to (1, 0, 1, 0), (0, 1, 0, 0).

    Boost along the spatial part of l to kill l0, rotate l onto axis 1 and
    the (null, l-orthogonal) a into the axis-2 direction, then scale a0 to 1.
    """
    _check_class(p, OrbitClass.PARABOLIC, tol)
    lvec = spatial(p.l)
    lhat = lvec / norm3(lvec)
    # l spacelike, so |l0| < |l_spatial| and the rapidity is finite
    B = boost(lhat, -math.atanh(p.l[0] / norm3(lvec)))
    l1 = B.m @ p.l
    a1 = B.m @ p.a
    R = spatial_transform(_align(l1[1:] / norm3(l1[1:]), a1[1:]))
    Lam = R @ B
    return OrientedSymmetry(1.0 / (Lam.m @ p.a)[0], Lam)


def canonicalize(p: MinkowskiOrbitParams, tol: float = CLASS_TOL) -> OrientedSymmetry:
    kind = classify(p, tol)
    if kind is OrbitClass.ELLIPTIC:
        return canonicalize_elliptic(p, tol)
    if kind is OrbitClass.PARABOLIC:
        return canonicalize_parabolic(p, tol)
    raise HyperbolicUnsupported("no group action is defined on hyperbolic orbits")


def canonical_pair(kind: OrbitClass) -> MinkowskiOrbitParams:
    if kind is OrbitClass.ELLIPTIC:
        return CANONICAL_ELLIPTIC
    if kind is OrbitClass.PARABOLIC:
        return CANONICAL_PARABOLIC
    raise HyperbolicUnsupported("no canonical hyperbolic pair")


def transport(p1: MinkowskiOrbitParams, p2: MinkowskiOrbitParams,
              tol: float = CLASS_TOL) -> OrientedSymmetry:
    """Element g with act(g, p1) = p2, for two pairs of the same class."""
    k1, k2 = classify(p1, tol), classify(p2, tol)
    if OrbitClass.HYPERBOLIC in (k1, k2):
        raise HyperbolicUnsupported("no group action is defined on hyperbolic orbits")
    if k1 is not k2:
        raise WrongClass(f"cannot transport a {k1.value} orbit to a {k2.value} orbit")
    return compose(inverse(canonicalize(p2, tol)), canonicalize(p1, tol))


def sign_flip_boost(a, margin: float = 0.5) -> LorentzTransform:
    """A boost taking a spacelike vector with a0 > 0 to one with a0 < 0.

    Boosting against the spatial part of a with rapidity beyond
    artanh(a0 / |a_spatial|) makes the time component negative.
    """
    a = np.asarray(a, dtype=np.float64)
    avec = a[1:]
    n = norm3(avec)
    if not (mdot(a, a) < 0 and n > 0):
        raise WrongClass("a sign-flipping boost exists only for spacelike a")
    chi = math.atanh(a[0] / n) + margin
    return boost(-avec / n, chi)


def _random_unit(rng) -> np.ndarray:
    d = rng.normal(size=3)
    return d / norm3(d)


def random_element(seed: int, max_rapidity: float = 2.0) -> OrientedSymmetry:
    """Deterministic pseudo-random element: rotation, boost, optional reflection, scaling."""
    if not max_rapidity > 0:
        raise ValueError("max_rapidity must be positive")
    rng = np.random.default_rng(seed)
    qw, qx, qy, qz = rng.normal(size=4)
    angle = 2.0 * math.atan2(math.sqrt(qx * qx + qy * qy + qz * qz), qw)
    R = rotation(_random_unit(rng), angle)
    B = boost(_random_unit(rng), rng.uniform(-max_rapidity, max_rapidity))
    Lam = R @ B
    if rng.random() < 0.5:
        Lam = spatial_reflection(_random_unit(rng)) @ Lam
    lam = math.exp(rng.uniform(math.log(0.25), math.log(4.0)))
    return OrientedSymmetry(lam, Lam)
