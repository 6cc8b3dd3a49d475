"""Linear algebra over C^3 with the Hermitian form of signature (2,1).

Everything in this package works in the Siegel model: the form is the
antidiagonal matrix ``J`` below, boundary points carry Heisenberg
coordinates ``[z, t]`` (plus one point at infinity), and interior points
carry horospherical coordinates ``(z, t, u)`` with ``u > 0``.  All values
are immutable and every function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Matrix of the Hermitian form, signature (2,1).
J = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)

#: Default tolerance for membership predicates (is this vector null? ...).
MEMBERSHIP_TOL = 1e-9
#: Default tolerance for algebraic identities checked in tests.
IDENTITY_TOL = 1e-12

SQRT2 = np.sqrt(2.0)


class GeometryError(Exception):
    """Base class for all geometric errors raised by this package."""


class PositiveVector(GeometryError):
    """A vector of positive self-product where a null/negative one is needed."""


class DegenerateProjection(GeometryError):
    """Projection onto the standard real plane is undefined for this vector."""


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the boundary sphere in Heisenberg coordinates ``[z, t]``.

    The point at infinity is the distinguished instance ``INFINITY``
    (``infinite=True``); its ``z`` and ``t`` fields are meaningless.
    """

    z: complex = 0j
    t: float = 0.0
    infinite: bool = False

    def isclose(self, other: "BoundaryPoint", tol: float = MEMBERSHIP_TOL) -> bool:
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return abs(self.z - other.z) <= tol and abs(self.t - other.t) <= tol

    def __repr__(self) -> str:
        if self.infinite:
            return "BoundaryPoint(inf)"
        return f"BoundaryPoint([{self.z:.6g}, {self.t:.6g}])"


#: The boundary point at infinity, lift (1, 0, 0).
INFINITY = BoundaryPoint(infinite=True)


@dataclass(frozen=True)
class HoroPoint:
    """Interior point in horospherical coordinates ``(z, t, u)``, ``u > 0``."""

    z: complex
    t: float
    u: float

    def __post_init__(self):
        if self.u <= 0:
            raise ValueError(f"horospherical height must be positive, got {self.u}")

    def __repr__(self) -> str:
        return f"HoroPoint(({self.z:.6g}, {self.t:.6g}, {self.u:.6g}))"


def herm(x: np.ndarray, y: np.ndarray) -> complex:
    """Hermitian product <x, y> = x^T J conj(y).

    Sesquilinear: ``herm(y, x) == conj(herm(x, y))``.  The standard basis
    vector e1 is null; e2 has square one.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    yc = np.conj(y)
    return complex(x[0] * yc[2] + x[1] * yc[1] + x[2] * yc[0])


def lift(p: BoundaryPoint | HoroPoint) -> np.ndarray:
    """Standard lift of a point to C^3.

    Infinity lifts to (1, 0, 0).  A boundary point [z, t] lifts to
    (-|z|^2 + it, z*sqrt(2), 1), which is a null vector.  An interior
    point (z, t, u) lifts to (-|z|^2 - u + it, z*sqrt(2), 1), which has
    negative self-product.
    """
    if isinstance(p, BoundaryPoint):
        if p.infinite:
            return np.array([1, 0, 0], dtype=complex)
        return np.array(
            [-abs(p.z) ** 2 + 1j * p.t, p.z * SQRT2, 1.0], dtype=complex
        )
    if isinstance(p, HoroPoint):
        return np.array(
            [-abs(p.z) ** 2 - p.u + 1j * p.t, p.z * SQRT2, 1.0], dtype=complex
        )
    raise TypeError(f"cannot lift {type(p).__name__}")


def project_point(
    v: np.ndarray, tol: float = MEMBERSHIP_TOL
) -> BoundaryPoint | HoroPoint:
    """Inverse of ``lift`` up to scalar: read coordinates off a null or
    negative vector.

    Raises PositiveVector when the self-product is positive beyond ``tol``
    (relative to the squared Euclidean norm).
    """
    v = np.asarray(v, dtype=complex)
    scale = float(np.vdot(v, v).real)
    if scale == 0.0:
        raise PositiveVector("zero vector has no projective image")
    q = herm(v, v).real
    if q > tol * max(1.0, scale):
        raise PositiveVector(f"self-product {q:.3e} is positive")
    if abs(v[2]) <= tol * np.sqrt(scale):
        # null vectors with vanishing last coordinate are multiples of e1
        return INFINITY
    w = v / v[2]
    z = complex(w[1]) / SQRT2
    t = float(w[0].imag)
    u = -float(w[0].real) - abs(z) ** 2
    if u > tol:
        return HoroPoint(z, t, u)
    return BoundaryPoint(z, t)


def distance(m: HoroPoint, n: HoroPoint) -> float:
    """Hyperbolic distance, from cosh^2(d/2) = |<m,n>|^2 / (<m,m><n,n>)."""
    vm, vn = lift(m), lift(n)
    num = abs(herm(vm, vn)) ** 2
    den = herm(vm, vm).real * herm(vn, vn).real
    ratio = num / den
    # ratio >= 1 exactly; clip rounding noise before arccosh
    return 2.0 * float(np.arccosh(np.sqrt(max(ratio, 1.0))))


def project_to_standard_real_plane(
    v: np.ndarray, tol: float = MEMBERSHIP_TOL
) -> np.ndarray:
    """Lift of the orthogonal projection onto the standard real plane.

    For a null or negative vector v the projection is
    ``v - (<v, conj v> / |<v, conj v>|) * conj(v)``; the output has real
    projective coordinates and the operation is projectively idempotent.
    The quantity <v, conj v> equals v^T J v.  It vanishes exactly for the
    null vectors over the boundary circle of the plane itself, where the
    projection is ambiguous: DegenerateProjection is raised there.
    """
    v = np.asarray(v, dtype=complex)
    scale = float(np.vdot(v, v).real)
    if herm(v, v).real > tol * max(1.0, scale):
        raise PositiveVector("projection is defined on null and negative vectors")
    s = complex(v @ (J @ v))  # <v, conj v>
    if abs(s) <= tol * max(1.0, scale):
        raise DegenerateProjection("<v, conj v> vanishes; fiber is ambiguous")
    return v - (s / abs(s)) * np.conj(v)


def boundary_gap(p: BoundaryPoint, q: BoundaryPoint) -> float:
    """Coordinate discrepancy of two boundary points, for residual audits.

    Zero iff equal; infinite when exactly one of them is the point at
    infinity.  Not a metric, just a convergence measure in Heisenberg
    coordinates.
    """
    if p.infinite or q.infinite:
        return 0.0 if (p.infinite and q.infinite) else np.inf
    return abs(p.z - q.z) + abs(p.t - q.t)
