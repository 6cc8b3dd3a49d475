"""The full isometry group of the complex hyperbolic plane.

An isometry is a 3x3 matrix in U(2,1) together with an antiholomorphic
flag.  A holomorphic isometry acts by ``m -> P(M m)`` on lifts, an
antiholomorphic one by ``m -> P(M conj(m))``.  Composition therefore
follows the rule ``(G, g_anti) * (H, h_anti) = (G H, ...)`` when g is
holomorphic and ``(G conj(H), ...)`` when g is antiholomorphic, with the
flags combining by XOR.

Holomorphic isometries are classified through the trace polynomial
``f(z) = |z|^4 - 8 Re(z^3) + 18 |z|^2 - 27`` evaluated on an SU(2,1)
lift: positive means loxodromic, negative regular elliptic, and the zero
locus holds the parabolics and complex reflections, separated by a
semisimplicity test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .hermitian import (
    J,
    MEMBERSHIP_TOL,
    SQRT2,
    BoundaryPoint,
    GeometryError,
    HoroPoint,
    lift,
    project_point,
)

#: Half-width of the f = 0 band inside which the parabolic / complex
#: reflection decision procedure takes over from the sign of f.
F_BOUNDARY_EPS = 1e-7
#: Singular value cutoff deciding the rank of (M - lambda I).
SEMISIMPLE_SV_CUTOFF = 1e-7

OMEGA = np.exp(2j * np.pi / 3)
CUBE_ROOTS_OF_UNITY = (1.0 + 0j, OMEGA, OMEGA**2)


class NotHolomorphic(GeometryError):
    """Operation requires a holomorphic isometry."""


class ZeroArgument(GeometryError):
    """A nonzero complex parameter was required."""


class UnitModulus(GeometryError):
    """A loxodromic parameter must not lie on the unit circle."""


class FlagMismatch(GeometryError):
    """Projective comparison of isometries with different flags."""


class IsometryClass(Enum):
    LOXODROMIC = "loxodromic"
    REGULAR_ELLIPTIC = "regular_elliptic"
    PARABOLIC = "parabolic"
    COMPLEX_REFLECTION = "complex_reflection"
    IDENTITY = "identity"


@dataclass(frozen=True, eq=False)
class Isometry:
    """A U(2,1) matrix plus an antiholomorphic flag."""

    matrix: np.ndarray
    antiholomorphic: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "matrix", np.asarray(self.matrix, dtype=complex).reshape(3, 3)
        )

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def inverse(self) -> "Isometry":
        inv = np.linalg.inv(self.matrix)
        if self.antiholomorphic:
            return Isometry(np.conj(inv), True)
        return Isometry(inv, False)

    def apply_vector(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if self.antiholomorphic:
            return self.matrix @ np.conj(v)
        return self.matrix @ v

    def apply(self, p: BoundaryPoint | HoroPoint) -> BoundaryPoint | HoroPoint:
        return project_point(self.apply_vector(lift(p)))

    def unitarity_residual(self) -> float:
        """Frobenius norm of M^T J conj(M) - J (membership in U(2,1))."""
        m = self.matrix
        return float(np.linalg.norm(m.T @ J @ np.conj(m) - J))

    def su_matrix(self) -> np.ndarray:
        return su_normalize(self.matrix)

    def su_trace(self) -> complex:
        return complex(np.trace(self.su_matrix()))

    def __repr__(self) -> str:
        flag = "anti" if self.antiholomorphic else "holo"
        return f"Isometry({flag}, tr={np.trace(self.matrix):.4g})"


def identity_isometry() -> Isometry:
    return Isometry(np.eye(3, dtype=complex), False)


def compose(g: Isometry, h: Isometry) -> Isometry:
    """Composition g o h.  Flags XOR; h's matrix is conjugated when g is
    antiholomorphic."""
    if g.antiholomorphic:
        return Isometry(g.matrix @ np.conj(h.matrix), not h.antiholomorphic)
    return Isometry(g.matrix @ h.matrix, h.antiholomorphic)


def compose_all(isometries) -> Isometry:
    """Left-to-right product g1 o g2 o ... o gk (identity when empty)."""
    out = identity_isometry()
    for g in isometries:
        out = compose(out, g)
    return out


def apply(g: Isometry, p: BoundaryPoint | HoroPoint) -> BoundaryPoint | HoroPoint:
    return g.apply(p)


def su_normalize(m: np.ndarray) -> np.ndarray:
    """Scale a GL(3,C) matrix to determinant one using the principal cube
    root, so traces are deterministic up to the inherent cube-root-of-unity
    ambiguity of SU(2,1) lifts."""
    m = np.asarray(m, dtype=complex)
    d = np.linalg.det(m)
    if d == 0:
        raise GeometryError("singular matrix cannot be normalized")
    return m / d ** (1.0 / 3.0)


def trace_polynomial(tau: complex) -> float:
    """f(tau) = |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27.

    Invariant under multiplication of tau by a cube root of unity, so it
    is well defined on PU(2,1).
    """
    a = abs(tau)
    return float(a**4 - 8.0 * (tau**3).real + 18.0 * a**2 - 27.0)


def _repeated_eigenvalue(tau: complex) -> complex:
    """Repeated root of the characteristic polynomial of an SU(2,1) matrix
    on the f = 0 locus.

    For det = 1 and U(2,1) the characteristic polynomial is
    chi(z) = z^3 - tau z^2 + conj(tau) z - 1.  A double root is the root
    of the linear remainder of chi modulo chi', namely
    (9 - |tau|^2) / (6 conj(tau) - 2 tau^2); a triple root is tau / 3.
    Both closed forms stay accurate where np.roots would lose half the
    working precision on a defective eigenvalue.
    """

    def chi(z: complex) -> float:
        return abs(z**3 - tau * z**2 + np.conj(tau) * z - 1.0)

    candidates = [tau / 3.0]
    den = 6.0 * np.conj(tau) - 2.0 * tau**2
    if abs(den) > 1e-8 * (1.0 + abs(tau) ** 2):
        candidates.append((9.0 - abs(tau) ** 2) / den)
    return complex(min(candidates, key=chi))


def classify(
    g: Isometry,
    eps: float = F_BOUNDARY_EPS,
    sv_cutoff: float = SEMISIMPLE_SV_CUTOFF,
    tol: float = MEMBERSHIP_TOL,
) -> IsometryClass:
    """Classify a holomorphic isometry by the sign of f on its SU(2,1) trace.

    On the boundary band |f| <= eps the matrix is either a projective
    identity, a parabolic, or a complex reflection; the latter two are
    separated by the rank of (M - lambda I) at the repeated eigenvalue
    (rank 2 means non-semisimple, hence parabolic).

    Antiholomorphic isometries are not classified here; callers square
    them first.
    """
    if g.antiholomorphic:
        raise NotHolomorphic("classify the square of an antiholomorphic isometry")
    n = su_normalize(g.matrix)
    tau = complex(np.trace(n))
    f = trace_polynomial(tau)
    if f > eps:
        return IsometryClass.LOXODROMIC
    if f < -eps:
        return IsometryClass.REGULAR_ELLIPTIC
    for omega in CUBE_ROOTS_OF_UNITY:
        if np.linalg.norm(n - omega * np.eye(3)) <= tol:
            return IsometryClass.IDENTITY
    lam = _repeated_eigenvalue(tau)
    d = n - lam * np.eye(3)
    rank1 = int(np.sum(np.linalg.svd(d, compute_uv=False) > sv_cutoff))
    if rank1 >= 2:
        return IsometryClass.PARABOLIC
    # rank one: either a semisimple double eigenvalue (complex reflection)
    # or a nilpotent of order two on a triple eigenvalue (e.g. a vertical
    # Heisenberg translation); the square of (M - lambda I) separates them.
    rank2 = int(np.sum(np.linalg.svd(d @ d, compute_uv=False) > sv_cutoff**2))
    if rank2 == 0:
        return IsometryClass.PARABOLIC
    return IsometryClass.COMPLEX_REFLECTION


def projective_equal(g: Isometry, h: Isometry, tol: float = MEMBERSHIP_TOL) -> bool:
    """Equality in the projective isometry group: SU(2,1)-normalized
    matrices agree up to a cube root of unity."""
    if g.antiholomorphic != h.antiholomorphic:
        raise FlagMismatch("cannot compare isometries with different flags")
    ng, nh = su_normalize(g.matrix), su_normalize(h.matrix)
    scale = max(1.0, float(np.linalg.norm(nh)))
    return any(
        np.linalg.norm(ng - omega * nh) <= tol * scale
        for omega in CUBE_ROOTS_OF_UNITY
    )


def projective_residual(g: Isometry, h: Isometry) -> float:
    """min over cube roots omega of ||su(g) - omega su(h)||, ignoring flags."""
    ng, nh = su_normalize(g.matrix), su_normalize(h.matrix)
    return min(
        float(np.linalg.norm(ng - omega * nh)) for omega in CUBE_ROOTS_OF_UNITY
    )


def proportionality_residual(g: Isometry, h: Isometry) -> float:
    """Distance between g and h in the projective metric: Frobenius
    normalized matrices compared at the optimal unit scalar.

    Zero exactly when the matrices are proportional, i.e. when the
    isometries agree projectively; unlike ``projective_residual`` this is
    well conditioned when both matrices are large products.
    """
    a = np.asarray(g.matrix)
    b = np.asarray(h.matrix)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    z = complex(np.vdot(b, a))
    if z != 0:
        b = b * (z / abs(z))
    return float(np.linalg.norm(a - b))


# ---------------------------------------------------------------------------
# elementary isometries
# ---------------------------------------------------------------------------

_E_MATRIX = np.array(
    [[-1.0, SQRT2, 1.0], [-SQRT2, 1.0, 0.0], [1.0, 0.0, 0.0]], dtype=complex
)


def elementary_E() -> Isometry:
    """The order-three holomorphic isometry cycling infinity -> [-1,0] ->
    [0,0] -> infinity."""
    return Isometry(_E_MATRIX.copy(), False)


def elementary_E_inverse() -> Isometry:
    return elementary_E().inverse()


def elementary_sigma(z: complex) -> Isometry:
    """Real symmetry swapping infinity with [0,0] and [-1,0] with [z,0].

    Writing z = x e^{i a} with x > 0, the lift is the antidiagonal matrix
    with entries (x, e^{i a}, 1/x); it satisfies M conj(M) = I, so the
    isometry is an antiholomorphic involution.
    """
    z = complex(z)
    if z == 0:
        raise ZeroArgument("sigma_z requires z != 0")
    x = abs(z)
    phase = z / x
    m = np.array(
        [[0, 0, x], [0, phase, 0], [1.0 / x, 0, 0]], dtype=complex
    )
    return Isometry(m, True)


def translation_T(z: complex, t: float) -> Isometry:
    """Heisenberg translation by [z, t], a unipotent parabolic fixing
    infinity.  Composition realizes the group law
    [z,t][w,s] = [z+w, s+t+2 Im(z conj(w))].
    """
    z = complex(z)
    m = np.array(
        [
            [1.0, -np.conj(z) * SQRT2, -abs(z) ** 2 + 1j * t],
            [0.0, 1.0, z * SQRT2],
            [0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )
    return Isometry(m, False)


def loxodromic_D(lam: complex, tol: float = MEMBERSHIP_TOL) -> Isometry:
    """Loxodromic normal form diag(lambda, conj(lambda)/lambda,
    1/conj(lambda)) fixing [0,0] and infinity; requires |lambda| != 1."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) <= tol:
        raise UnitModulus("loxodromic parameter must have modulus != 1")
    m = np.diag([lam, np.conj(lam) / lam, 1.0 / np.conj(lam)]).astype(complex)
    return Isometry(m, False)


def sigma_boundary_action(z: complex, p: BoundaryPoint) -> BoundaryPoint:
    """Closed-form Heisenberg action of sigma_z on the boundary, used as an
    independent oracle against matrix application.

    The sign of the first coordinate is pinned by sigma_z([-1,0]) = [z,0].
    """
    if p.infinite:
        return BoundaryPoint(0j, 0.0)
    w, t = p.z, p.t
    if w == 0 and t == 0:
        return BoundaryPoint(infinite=True)
    den = abs(w) ** 4 + t**2
    return BoundaryPoint(
        -z * np.conj(w) * (abs(w) ** 2 - 1j * t) / den, t * abs(z) ** 2 / den
    )
