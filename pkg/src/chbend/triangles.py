"""Ideal triangles, the Cartan invariant, and the gluing invariant of a
pair of adjacent real ideal triangles.

An ideal triangle is an ordered triple of distinct boundary points.  Its
Cartan angular invariant vanishes exactly when the three points lie on
the boundary of a real plane ("real ideal triangle").  An ordered pair of
adjacent real ideal triangles ``t1 = (p1, p2, p3)``, ``t2 = (p3, p4, p1)``
sharing the edge (p1, p3) is classified up to holomorphic isometry by one
complex number ``z`` outside {0, -1}; its modulus is a shear and its
argument a bending angle.  The reference pair is

    tau_0 = (inf, [-1,0], [0,0])   and   tau_z = ([0,0], [z,0], inf),

for which the invariant is ``z`` itself.  The adjacency convention above
is fixed throughout; rotate your triples first if they come ordered
differently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian import (
    INFINITY,
    J,
    MEMBERSHIP_TOL,
    BoundaryPoint,
    GeometryError,
    herm,
    lift,
)
from .isometries import Isometry, compose, elementary_sigma, su_normalize

#: Lifts of the reference triangle (inf, [-1,0], [0,0]).
STANDARD_TRIANGLE = (
    INFINITY,
    BoundaryPoint(-1.0 + 0j, 0.0),
    BoundaryPoint(0j, 0.0),
)

_STANDARD_LIFTS = np.array(
    [[1, 0, 0], [-1, -np.sqrt(2.0), 1], [0, 0, 1]], dtype=complex
).T  # columns are the lifts


class DegenerateTriangle(GeometryError):
    """Two vertices of an ideal triangle coincide."""


class NotReal(GeometryError):
    """A real ideal triangle (Cartan invariant zero) was required."""


class NotAdjacent(GeometryError):
    """The pair does not share an edge in the pinned ordering convention."""


class DegeneratePair(GeometryError):
    """Gluing invariant at 0 or -1: collapsed or coincident triangles."""


class DegenerateZ(DegeneratePair):
    """Extension parameter 0 or -1 produces a degenerate triangle."""


@dataclass(frozen=True)
class IdealTriangle:
    """Ordered triple of pairwise distinct boundary points."""

    p1: BoundaryPoint
    p2: BoundaryPoint
    p3: BoundaryPoint

    @property
    def vertices(self) -> tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint]:
        return (self.p1, self.p2, self.p3)

    def lifts(self) -> list[np.ndarray]:
        return [lift(p) for p in self.vertices]

    def rotated(self, k: int) -> "IdealTriangle":
        v = self.vertices
        return IdealTriangle(v[k % 3], v[(k + 1) % 3], v[(k + 2) % 3])

    def validate(self, tol: float = MEMBERSHIP_TOL) -> None:
        a, b, c = self.lifts()
        for x, y in ((a, b), (b, c), (c, a)):
            scale = float(np.linalg.norm(x) * np.linalg.norm(y))
            if abs(herm(x, y)) <= tol * scale:
                raise DegenerateTriangle("ideal triangle has coincident vertices")


def _triple_product(t: IdealTriangle) -> complex:
    a, b, c = t.lifts()
    return herm(a, b) * herm(b, c) * herm(c, a)


def cartan(t: IdealTriangle, tol: float = MEMBERSHIP_TOL) -> float:
    """Cartan angular invariant arg(-<p1,p2><p2,p3><p3,p1>) in [-pi/2, pi/2].

    Independent of the lifts; zero iff the triangle lies in a real plane,
    +-pi/2 iff it lies in a complex line.
    """
    t.validate(tol)
    return float(np.angle(-_triple_product(t)))


def is_real(t: IdealTriangle, tol: float = MEMBERSHIP_TOL) -> bool:
    return abs(cartan(t)) <= tol


def _polar_vector(pa: np.ndarray, pc: np.ndarray) -> np.ndarray:
    """Nonzero c with <c, pa> = <c, pc> = 0, via the nullspace of a 2x3
    system.  <c, p> is linear in c with row (J conj(p))^T, so any scale
    works downstream."""
    rows = np.array([(J @ np.conj(pa)), (J @ np.conj(pc))])
    _, _, vh = np.linalg.svd(rows)
    return np.conj(vh[2])


def z_invariant(
    t1: IdealTriangle, t2: IdealTriangle, tol: float = MEMBERSHIP_TOL
) -> complex:
    """Gluing invariant of the ordered adjacent pair (t1, t2).

    Convention: t1 = (p1, p2, p3) and t2 = (p3, p4, p1) share the edge
    (p1, p3).  The value is

        -(<p4, c13> <p2, p1>) / (<p2, c13> <p4, p1>)

    with c13 Hermitian-orthogonal to the lifts of p1 and p3.  It is
    invariant under holomorphic isometries, conjugated by antiholomorphic
    ones, and swapping the pair conjugates it.
    """
    for t in (t1, t2):
        t.validate(tol)
        if not is_real(t, tol):
            raise NotReal("both triangles must be real (zero Cartan invariant)")
    if not (t2.p1.isclose(t1.p3, tol) and t2.p3.isclose(t1.p1, tol)):
        raise NotAdjacent("expected t1=(p1,p2,p3), t2=(p3,p4,p1)")
    p1, p2, _ = t1.lifts()
    p3l, p4, _ = t2.lifts()
    c13 = _polar_vector(p1, p3l)
    num = herm(p4, c13) * herm(p2, p1)
    den = herm(p2, c13) * herm(p4, p1)
    if abs(den) <= tol:
        raise DegeneratePair("gluing invariant is singular for this pair")
    z = -num / den
    if abs(z) < 1e-9 or abs(z + 1) < 1e-9:
        raise DegeneratePair(f"degenerate invariant {z:.3e}")
    return complex(z)


def triangle_to_standard(
    t: IdealTriangle, require_real: bool = True, tol: float = MEMBERSHIP_TOL
) -> Isometry:
    """The unique holomorphic isometry carrying t to (inf, [-1,0], [0,0])
    as ordered triples.

    Scales the vertex lifts q_i so their Gram matrix matches the standard
    one (<q1,q2> = 1, <q2,q3> = -1, <q3,q1> = 1), then solves M Q = S
    column-wise.  The scaling exists exactly when the triple product is
    negative real, i.e. when the triangle is real.
    """
    t.validate(tol)
    if require_real and not is_real(t, tol):
        raise NotReal("only real ideal triangles have a standard form")
    m1, m2, m3 = t.lifts()
    g12, g23, g31 = herm(m1, m2), herm(m2, m3), herm(m3, m1)
    lam1 = np.sqrt(abs(g23 / (g12 * g31)))
    lam2 = 1.0 / (np.conj(g12) * lam1)
    lam3 = 1.0 / (g31 * lam1)
    q = np.column_stack([lam1 * m1, lam2 * m2, lam3 * m3])
    mat = _STANDARD_LIFTS @ np.linalg.inv(q)
    return Isometry(su_normalize(mat), False)


def extend_by_z(
    t: IdealTriangle, z: complex, tol: float = MEMBERSHIP_TOL
) -> BoundaryPoint:
    """Fourth point d such that for t = (a, b, c), the pair
    (t, (c, d, a)) is real-adjacent with gluing invariant z.

    Normalizes t to the reference triangle, places [z, 0], and pulls
    back.  z must avoid 0 and -1.
    """
    z = complex(z)
    if abs(z) < 1e-9 or abs(z + 1) < 1e-9:
        raise DegenerateZ(f"extension parameter {z:.3e} is degenerate")
    g = triangle_to_standard(t, require_real=True, tol=tol)
    d_std = BoundaryPoint(z, 0.0)
    d = g.inverse().apply(d_std)
    if not isinstance(d, BoundaryPoint):
        raise GeometryError("extension left the boundary; numerical failure")
    return d


def extended_pair(t: IdealTriangle, z: complex) -> IdealTriangle:
    """The triangle (c, d, a) produced by ``extend_by_z``, ordered so that
    ``z_invariant(t, extended_pair(t, z)) == z``."""
    d = extend_by_z(t, z)
    return IdealTriangle(t.p3, d, t.p1)


def pair_symmetry(
    t1: IdealTriangle, t2: IdealTriangle, tol: float = MEMBERSHIP_TOL
) -> Isometry:
    """The unique real symmetry exchanging the ordered adjacent pair:
    sigma(p1) = p3, sigma(p2) = p4.

    In the reference configuration this is sigma_z for z the gluing
    invariant; in general it is the conjugate of that by the normalizing
    isometry of t1.
    """
    z = z_invariant(t1, t2, tol)
    g = triangle_to_standard(t1, require_real=True, tol=tol)
    gi = g.inverse()
    return compose(gi, compose(elementary_sigma(z), g))
