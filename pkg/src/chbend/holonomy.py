"""Bending decorations and the representations they induce.

A bending decoration assigns to every edge of an ideal triangulation a
complex number outside {0, -1}, read as the gluing invariant of the two
real ideal triangles developed on its sides.  Each oriented edge of the
modified dual graph then carries an elementary isometry: a type-1 edge
crossing a triangulation edge decorated by z carries the real symmetry
sigma_z, a positively (negatively) oriented type-2 edge carries the
order-three elliptic E (its inverse).  The isometry of a simplicial path
is the ordered product of its edge isometries; on closed based loops this
is the holonomy representation, well defined because sigma_z^2 = 1 and
E^3 = 1 kill the combinatorial ambiguities.

The product around a puncture is conjugate to a triangular matrix whose
diagonal moduli multiply to the product of |z| over the crossed edges,
which is why the loxodromic/parabolic dichotomy of peripheral holonomy
is decided by the balance condition prod |D(e)| = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .hermitian import GeometryError, MEMBERSHIP_TOL
from .isometries import (
    Isometry,
    IsometryClass,
    classify,
    compose,
    compose_all,
    elementary_E,
    elementary_sigma,
    identity_isometry,
    projective_residual,
)
from .surfaces import (
    GEdge,
    NotBipartite,
    Side,
    Triangulation,
    Word,
    crossed_edges,
    materialize_word,
    peripheral_cycle,
    validate_path,
)


class DegenerateValue(GeometryError):
    """A decoration value hit the excluded set {0, -1}."""


class BendingDecoration:
    """Map from edge ids to complex values outside {0, -1}."""

    def __init__(self, values: dict[int, complex], tol: float = 1e-9):
        self.values = {int(e): complex(z) for e, z in values.items()}
        for e, z in self.values.items():
            if abs(z) < tol or abs(z + 1) < tol:
                raise DegenerateValue(f"edge {e} decorated by degenerate value {z}")

    def __getitem__(self, edge: int) -> complex:
        return self.values[edge]

    def __len__(self) -> int:
        return len(self.values)

    def conjugate(self) -> "BendingDecoration":
        return BendingDecoration({e: np.conj(z) for e, z in self.values.items()})

    def is_regular(self, tol: float = 1e-9) -> bool:
        args = [np.angle(z) for z in self.values.values()]
        return max(args) - min(args) <= tol

    def to_json_dict(self) -> dict:
        return {
            "edges": {
                str(e): {"re": z.real, "im": z.imag} for e, z in self.values.items()
            }
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BendingDecoration":
        if "moduli" in data:
            theta = float(data.get("theta", 0.0))
            return make_regular({int(e): float(r) for e, r in data["moduli"].items()}, theta)
        edges = data["edges"]
        return cls({int(e): complex(v["re"], v["im"]) for e, v in edges.items()})

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)

    @classmethod
    def load(cls, path: str) -> "BendingDecoration":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    def __repr__(self) -> str:
        return f"BendingDecoration({self.values})"


@dataclass(frozen=True)
class RegularDecoration:
    """Positive moduli with one common bending angle theta."""

    moduli: dict[int, float]
    theta: float

    def to_decoration(self) -> BendingDecoration:
        return make_regular(self.moduli, self.theta)


def make_regular(moduli: dict[int, float], theta: float) -> BendingDecoration:
    """Decoration r(e) e^{i theta}; rejects theta = pi with some r(e) = 1,
    which would decorate an edge by -1."""
    if not all(r > 0 for r in moduli.values()):
        raise DegenerateValue("regular decorations need positive moduli")
    phase = np.exp(1j * theta)
    try:
        return BendingDecoration({e: r * phase for e, r in moduli.items()})
    except DegenerateValue as exc:
        raise DegenerateValue(f"theta = {theta} hits -1: {exc}") from exc


def edge_isometry(t: Triangulation, ge: GEdge, decoration: BendingDecoration) -> Isometry:
    """Elementary isometry of one oriented graph edge."""
    if ge.kind == 1:
        eid = t.side_edge[(ge.face, ge.slot)]
        return elementary_sigma(decoration[eid])
    if ge.step == 1:
        return elementary_E()
    return elementary_E().inverse()


def path_isometry(
    t: Triangulation, path: list[GEdge], decoration: BendingDecoration
) -> Isometry:
    """Ordered product of the edge isometries along a simplicial path."""
    validate_path(t, path)
    return compose_all(edge_isometry(t, ge, decoration) for ge in path)


def is_balanced(
    t: Triangulation, decoration: BendingDecoration, x: int, tol: float = MEMBERSHIP_TOL
) -> bool:
    """Whether the moduli product over the edges crossed around puncture x
    (with multiplicity) equals one."""
    prod = 1.0
    for eid in crossed_edges(t, peripheral_cycle(t, x)):
        prod *= abs(decoration[eid])
    return abs(prod - 1.0) <= tol


def peripheral_modulus(t: Triangulation, decoration: BendingDecoration, x: int) -> float:
    prod = 1.0
    for eid in crossed_edges(t, peripheral_cycle(t, x)):
        prod *= abs(decoration[eid])
    return prod


class Representation:
    """Holonomy representation of a decorated bipartite-or-not
    triangulation, with memoized generator images.

    The instance behaves as a pure function of (triangulation,
    decoration); memoization is only a cache and is safe under CPython's
    per-opcode atomicity for dict updates.
    """

    def __init__(
        self,
        triangulation: Triangulation,
        decoration: BendingDecoration,
        base: Side | None = None,
    ):
        self.t = triangulation
        self.decoration = decoration
        if base is None:
            base = (
                triangulation.presentation.base
                if triangulation.presentation is not None
                else (0, 0)
            )
        self.base = base
        missing = set(range(triangulation.num_edges)) - set(decoration.values)
        if missing:
            raise DegenerateValue(f"decoration misses edges {sorted(missing)}")
        self._cache: dict = {}

    # -- coloring ------------------------------------------------------

    def coloring(self) -> dict[int, str]:
        """Proper coloring with the base face white."""
        if "coloring" not in self._cache:
            col = self.t.bipartite_coloring()
            if col[self.base[0]] != "w":
                col = {f: ("w" if c == "b" else "b") for f, c in col.items()}
            self._cache["coloring"] = col
        return self._cache["coloring"]

    # -- holonomy ------------------------------------------------------

    def path_isometry(self, path: list[GEdge]) -> Isometry:
        return path_isometry(self.t, path, self.decoration)

    def word_isometry(self, word: Word) -> Isometry:
        key = ("word", word)
        if key not in self._cache:
            path = materialize_word(self.t, word, self.base)
            self._cache[key] = self.path_isometry(path)
        return self._cache[key]

    def generator_images(self) -> dict[str, Isometry]:
        """Images of a1, b1, ..., ag, bg, c1, ..., cn."""
        if "generators" not in self._cache:
            p = self._presentation()
            out: dict[str, Isometry] = {}
            for i, (a, b) in enumerate(p.handles, start=1):
                out[f"a{i}"] = self.word_isometry(a)
                out[f"b{i}"] = self.word_isometry(b)
            for j, c in enumerate(p.cusps, start=1):
                out[f"c{j}"] = self.word_isometry(c)
            self._cache["generators"] = out
        return self._cache["generators"]

    def _presentation(self):
        p = self.t.presentation
        if p is None:
            raise GeometryError(
                "triangulation carries no generator system; build it with "
                "generate_surface or load a file with a 'generators' entry"
            )
        return p

    def relator_image(self) -> Isometry:
        gens = self.generator_images()
        p = self._presentation()
        out = identity_isometry()
        for i in range(1, len(p.handles) + 1):
            a, b = gens[f"a{i}"], gens[f"b{i}"]
            out = compose_all([out, a, b, a.inverse(), b.inverse()])
        for j in range(1, len(p.cusps) + 1):
            out = compose(out, gens[f"c{j}"])
        return out

    def relator_path(self) -> list[GEdge]:
        """The relator as one simplicial loop: the generator words
        concatenated in relator order, materialized without any
        combinatorial cancellation."""
        p = self._presentation()
        t = self.t
        parts: list[Word] = []
        for a, b in p.handles:
            parts += [a, b, invert_word(t, a), invert_word(t, b)]
        parts += list(p.cusps)
        full = tuple(s for w in parts for s in w)
        return materialize_word(t, full, self.base)

    def relator_residual(self) -> float:
        """Projective residual of the relator loop.

        The loop is evaluated as two half products P1, P2 of its
        elementary isometries; since the loop is null-homotopic, P1 and
        P2^-1 must be proportional, and the proportionality defect in the
        projective metric is returned.  Splitting halves the error
        exponent of the long matrix product, which matters for the larger
        surfaces in binary64.
        """
        path = self.relator_path()
        mid = len(path) // 2
        p1 = self.path_isometry(path[:mid])
        p2 = self.path_isometry(path[mid:])
        from .isometries import proportionality_residual

        return proportionality_residual(p1, p2.inverse())

    def holonomy_flag_check(self) -> bool:
        """True iff every generator image is holomorphic; this is
        equivalent to bipartiteness of the triangulation."""
        p = self._presentation()
        words = [w for pair in p.handles for w in pair] + list(p.cusps)
        return all(len(w) % 2 == 0 for w in words)

    # -- peripheral holonomy --------------------------------------------

    def peripheral_word(self, x: int) -> Word:
        p = self.t.presentation
        if p is not None and x in p.cusp_vertices:
            return p.cusps[p.cusp_vertices.index(x)]
        from .surfaces import path_word

        return path_word(peripheral_cycle(self.t, x))

    def peripheral_holonomy(self, x: int) -> Isometry:
        if not self.t.is_bipartite():
            raise NotBipartite("peripheral holonomy lands in the holomorphic part "
                               "only for bipartite triangulations")
        key = ("peripheral", x)
        if key not in self._cache:
            cyc = peripheral_cycle(self.t, x)
            g = self.path_isometry(cyc)
            p = self.t.presentation
            if p is not None and x in p.cusp_vertices:
                g = self.word_isometry(p.cusps[p.cusp_vertices.index(x)])
            self._cache[key] = g
        return self._cache[key]

    def classify_peripheral(self, x: int) -> IsometryClass:
        return classify(self.peripheral_holonomy(x))

    def is_balanced(self, x: int, tol: float = MEMBERSHIP_TOL) -> bool:
        return is_balanced(self.t, self.decoration, x, tol)

    def peripheral_cycle_isometry(self, x: int, start_at_crossing: bool = True) -> Isometry:
        """Holonomy of the raw peripheral cycle, optionally rotated to
        begin with its first type-1 edge; in that rotation the matrix is
        triangular in the standard basis."""
        cyc = peripheral_cycle(self.t, x)
        if start_at_crossing:
            k = next(i for i, e in enumerate(cyc) if e.kind == 1)
            cyc = cyc[k:] + cyc[:k]
        return self.path_isometry(cyc)


def surface_group_holonomy(rep: Representation) -> tuple[dict[str, Isometry], float]:
    """Generator images and the projective residual of the presentation
    relator."""
    return rep.generator_images(), rep.relator_residual()
