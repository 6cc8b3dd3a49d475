"""Ideal triangulations of punctured surfaces and their combinatorics.

A triangulation is stored as a gluing table on face sides: face ``f`` has
sides ``0, 1, 2`` listed counterclockwise, side ``k`` running from corner
``k`` to corner ``k + 1`` (mod 3), and ``glue[f][k]`` names the side it is
identified with (orientation-reversing, as always on an oriented
surface).  Corners of glued sides are identified crosswise: corner ``k``
with corner ``k2 + 1`` and corner ``k + 1`` with corner ``k2``.  Vertex
classes of corners are the punctures.

The modified dual graph has one vertex per face side.  A type-1 edge
crosses a triangulation edge (from a side to its glued partner); type-2
edges connect the three sides of one face in an oriented 3-cycle, the
positive direction being ``slot -> slot + 1``.  Closed paths in this
graph represent homotopy classes of loops; lifting a path through the
tree of face copies of the universal cover decides null-homotopy exactly,
with no floating point involved.

Surfaces are built by a polygon recursion: explicit two-face
triangulations of the once-punctured torus and thrice-punctured sphere,
a genus surgery inserting a four-triangle handle block along an internal
edge, and a puncture surgery splitting an internal edge around a new
vertex.  Both surgeries preserve bipartiteness.  The recursion maintains
an explicit presentation (handle pairs ``a_i, b_i`` and peripheral loops
``c_j`` with ``prod [a_i, b_i] prod c_j = 1``), certified after every
step by exact word arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .hermitian import GeometryError

Side = tuple[int, int]
Word = tuple[Side, ...]


class NotInternalEdge(GeometryError):
    """Surgeries cut only internal (non-generator) edges."""


class InvalidSignature(GeometryError):
    """(g, n) must satisfy n >= 1 and 2 - 2g - n < 0."""


class NotBipartite(GeometryError):
    """Face adjacency contains an odd cycle; carries one as ``witness``."""

    def __init__(self, message: str, witness: list[int] | None = None):
        super().__init__(message)
        self.witness = witness or []


class InvalidPath(GeometryError):
    """A simplicial path failed endpoint chaining or side validity."""


class PresentationError(GeometryError):
    """Generator bookkeeping failed an exact certification check."""


@dataclass(frozen=True)
class GEdge:
    """Oriented edge of the modified dual graph.

    kind 1: from vertex (face, slot) across the glued triangulation edge.
    kind 2: from (face, slot) to (face, slot + step), step in {+1, -1}.
    """

    kind: int
    face: int
    slot: int
    step: int = 0

    def start(self) -> Side:
        return (self.face, self.slot)


@dataclass
class Presentation:
    """Certified generator system for the fundamental group.

    ``handles`` holds the words of (a_i, b_i); ``cusps`` the peripheral
    words c_1..c_n in relator order, so that the concatenation
    a1 b1 a1^-1 b1^-1 ... c1 ... cn is null-homotopic.  ``pair_sides``
    marks one side per polygon identification pair; the edges they lie on
    are the non-internal edges of the recursion.  Words are reduced
    crossing sequences based at ``base``.
    """

    base: Side
    pair_sides: list[Side] = field(default_factory=list)
    handles: list[tuple[Word, Word]] = field(default_factory=list)
    cusps: list[Word] = field(default_factory=list)
    cusp_vertices: list[int] = field(default_factory=list)


class Triangulation:
    """Glued triangulation of an oriented punctured surface."""

    def __init__(self, glue: list[list[Side]], presentation: Presentation | None = None):
        self.glue = [[tuple(s) for s in sides] for sides in glue]
        self.num_faces = len(self.glue)
        self._check_involution()
        self._index_edges()
        self._index_vertices()
        self.presentation = presentation

    # -- structure ---------------------------------------------------------

    def _check_involution(self):
        for f in range(self.num_faces):
            if len(self.glue[f]) != 3:
                raise GeometryError("each face needs exactly three sides")
            for k in range(3):
                f2, k2 = self.glue[f][k]
                if (f2, k2) == (f, k) or self.glue[f2][k2] != (f, k):
                    raise GeometryError("side gluing is not a fixed-point-free involution")

    def _index_edges(self):
        seen: dict[Side, int] = {}
        pairs: list[tuple[Side, Side]] = []
        for f in range(self.num_faces):
            for k in range(3):
                s, s2 = (f, k), self.glue[f][k]
                if s in seen or s2 in seen:
                    continue
                seen[s] = seen[s2] = len(pairs)
                pairs.append((min(s, s2), max(s, s2)))
        pairs.sort()
        self.edge_sides = pairs
        self.side_edge: dict[Side, int] = {}
        for eid, (s, s2) in enumerate(pairs):
            self.side_edge[s] = eid
            self.side_edge[s2] = eid
        self.num_edges = len(pairs)

    def _index_vertices(self):
        parent = {(f, c): (f, c) for f in range(self.num_faces) for c in range(3)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for f in range(self.num_faces):
            for k in range(3):
                f2, k2 = self.glue[f][k]
                union((f, k), (f2, (k2 + 1) % 3))
                union((f, (k + 1) % 3), (f2, k2))
        roots = sorted({find(c) for c in parent})
        self._vertex_of = {c: roots.index(find(c)) for c in parent}
        self.num_vertices = len(roots)

    def vertex_of_corner(self, f: int, c: int) -> int:
        return self._vertex_of[(f, c)]

    @property
    def punctures(self) -> int:
        return self.num_vertices

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if (2 - chi) % 2:
            raise GeometryError("odd Euler defect; not a closed oriented gluing")
        return (2 - chi) // 2

    def edge_endpoints(self, eid: int) -> tuple[int, int]:
        (f, k), _ = self.edge_sides[eid]
        return (self.vertex_of_corner(f, k), self.vertex_of_corner(f, (k + 1) % 3))

    def internal_edges(self) -> list[int]:
        """Edges not carrying a generator letter of the polygon recursion."""
        if self.presentation is None:
            return list(range(self.num_edges))
        lettered = {self.side_edge[s] for s in self.presentation.pair_sides}
        return [e for e in range(self.num_edges) if e not in lettered]

    # -- coloring ----------------------------------------------------------

    def bipartite_coloring(self) -> dict[int, str]:
        """Proper two-coloring of faces, 'w'/'b', via BFS.

        Raises NotBipartite with an odd closed face walk as witness.
        """
        color: dict[int, int] = {}
        parent: dict[int, int | None] = {}
        for start in range(self.num_faces):
            if start in color:
                continue
            color[start] = 0
            parent[start] = None
            queue = [start]
            while queue:
                f = queue.pop(0)
                for k in range(3):
                    f2 = self.glue[f][k][0]
                    if f2 not in color:
                        color[f2] = 1 - color[f]
                        parent[f2] = f
                        queue.append(f2)
                    elif color[f2] == color[f]:
                        witness = _odd_cycle(parent, f, f2)
                        raise NotBipartite(
                            f"faces {f} and {f2} clash; odd cycle {witness}", witness
                        )
        return {f: "wb"[color[f]] for f in range(self.num_faces)}

    def is_bipartite(self) -> bool:
        try:
            self.bipartite_coloring()
            return True
        except NotBipartite:
            return False

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        faces = []
        for f in range(self.num_faces):
            row = []
            for k in range(3):
                eid = self.side_edge[(f, k)]
                which = 0 if self.edge_sides[eid][0] == (f, k) else 1
                row.append([eid, which])
            faces.append(row)
        edges = [
            {"id": eid, "v0": self.edge_endpoints(eid)[0], "v1": self.edge_endpoints(eid)[1]}
            for eid in range(self.num_edges)
        ]
        data = {
            "genus": self.genus,
            "punctures": self.punctures,
            "faces": faces,
            "edges": edges,
        }
        try:
            data["coloring"] = {str(f): c for f, c in self.bipartite_coloring().items()}
        except NotBipartite:
            pass
        if self.presentation is not None:
            p = self.presentation
            data["generators"] = {
                "base": list(p.base),
                "pair_sides": [list(s) for s in p.pair_sides],
                "handles": [
                    [[list(s) for s in a], [list(s) for s in b]] for a, b in p.handles
                ],
                "cusps": [[list(s) for s in c] for c in p.cusps],
                "cusp_vertices": list(p.cusp_vertices),
            }
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "Triangulation":
        faces = data["faces"]
        by_edge: dict[tuple[int, int], Side] = {}
        for f, row in enumerate(faces):
            for k, (eid, which) in enumerate(row):
                by_edge[(eid, which)] = (f, k)
        glue: list[list[Side]] = [[(-1, -1)] * 3 for _ in faces]
        for (eid, which), (f, k) in by_edge.items():
            glue[f][k] = by_edge[(eid, 1 - which)]
        pres = None
        if "generators" in data:
            g = data["generators"]
            pres = Presentation(
                base=tuple(g["base"]),
                pair_sides=[tuple(s) for s in g["pair_sides"]],
                handles=[
                    (tuple(map(tuple, a)), tuple(map(tuple, b))) for a, b in g["handles"]
                ],
                cusps=[tuple(map(tuple, c)) for c in g["cusps"]],
                cusp_vertices=list(g.get("cusp_vertices", [])),
            )
        t = cls(glue, pres)
        if "genus" in data and t.genus != data["genus"]:
            raise GeometryError("stored genus disagrees with gluing")
        if "punctures" in data and t.punctures != data["punctures"]:
            raise GeometryError("stored puncture count disagrees with gluing")
        return t

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)

    @classmethod
    def load(cls, path: str) -> "Triangulation":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    def __repr__(self) -> str:
        return (
            f"Triangulation(g={self.genus}, n={self.punctures}, "
            f"F={self.num_faces}, E={self.num_edges})"
        )


def _odd_cycle(parent: dict, f: int, f2: int) -> list[int]:
    up_f, up_g = [f], [f2]
    while parent.get(up_f[-1]) is not None:
        up_f.append(parent[up_f[-1]])
    while parent.get(up_g[-1]) is not None:
        up_g.append(parent[up_g[-1]])
    common = next(x for x in up_f if x in up_g)
    cycle = up_f[: up_f.index(common) + 1]
    cycle += list(reversed(up_g[: up_g.index(common)]))
    return cycle


# ---------------------------------------------------------------------------
# modified dual graph
# ---------------------------------------------------------------------------


@dataclass
class ModifiedDualGraph:
    """Explicit view: one vertex per face side, type-1 edges across the
    triangulation edges, oriented type-2 triangles inside faces."""

    vertices: list[Side]
    type1: list[tuple[Side, Side]]
    type2: list[tuple[Side, Side]]

    def degree(self, v: Side) -> int:
        d = sum(1 for a, b in self.type1 if v in (a, b))
        d += sum(1 for a, b in self.type2 if v in (a, b))
        return d

    def face_cycles(self) -> dict[int, list[tuple[Side, Side]]]:
        cycles: dict[int, list[tuple[Side, Side]]] = {}
        for a, b in self.type2:
            cycles.setdefault(a[0], []).append((a, b))
        return cycles


def build_modified_dual(t: Triangulation) -> ModifiedDualGraph:
    vertices = [(f, k) for f in range(t.num_faces) for k in range(3)]
    type1 = list(t.edge_sides)
    type2 = [((f, k), (f, (k + 1) % 3)) for f in range(t.num_faces) for k in range(3)]
    return ModifiedDualGraph(vertices, type1, type2)


# ---------------------------------------------------------------------------
# simplicial paths
# ---------------------------------------------------------------------------


def edge_target(t: Triangulation, e: GEdge) -> Side:
    if e.kind == 1:
        return t.glue[e.face][e.slot]
    return (e.face, (e.slot + e.step) % 3)


def validate_path(t: Triangulation, path: list[GEdge], closed: bool = False) -> None:
    if not path:
        return
    cur = path[0].start()
    for e in path:
        if e.start() != cur:
            raise InvalidPath(f"edge {e} does not start at {cur}")
        if e.kind == 2 and e.step not in (1, -1):
            raise InvalidPath(f"type-2 edge with step {e.step}")
        if e.kind not in (1, 2):
            raise InvalidPath(f"unknown edge kind {e.kind}")
        cur = edge_target(t, e)
    if closed and cur != path[0].start():
        raise InvalidPath(f"path not closed: ends at {cur}")


def reverse_path(t: Triangulation, path: list[GEdge]) -> list[GEdge]:
    out = []
    for e in reversed(path):
        if e.kind == 1:
            f2, k2 = t.glue[e.face][e.slot]
            out.append(GEdge(1, f2, k2))
        else:
            out.append(GEdge(2, e.face, (e.slot + e.step) % 3, -e.step))
    return out


def path_word(path: list[GEdge]) -> Word:
    return tuple((e.face, e.slot) for e in path if e.kind == 1)


def _route(face: int, slot_from: int, slot_to: int) -> list[GEdge]:
    # shortest type-2 routing: one signed step or none
    d = (slot_to - slot_from) % 3
    if d == 0:
        return []
    if d == 1:
        return [GEdge(2, face, slot_from, 1)]
    return [GEdge(2, face, slot_from, -1)]


def materialize_word(t: Triangulation, word: Word, base: Side) -> list[GEdge]:
    """Canonical simplicial path of a based crossing word: route within
    faces by positive type-2 steps, cross at each listed side."""
    f0, k0 = base
    path: list[GEdge] = []
    cur = base
    for f, k in word:
        if f != cur[0]:
            raise InvalidPath(f"crossing {(f, k)} not in current face {cur[0]}")
        path.extend(_route(f, cur[1], k))
        path.append(GEdge(1, f, k))
        cur = t.glue[f][k]
    if cur[0] != f0:
        raise InvalidPath("word does not return to the base face")
    path.extend(_route(f0, cur[1], k0))
    return path


# ---------------------------------------------------------------------------
# exact word arithmetic (letters are oriented side crossings)
# ---------------------------------------------------------------------------


def inv_letter(t: Triangulation, s: Side) -> Side:
    return t.glue[s[0]][s[1]]


def reduce_word(t: Triangulation, word) -> Word:
    out: list[Side] = []
    for s in word:
        s = tuple(s)
        if out and out[-1] == inv_letter(t, s):
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def invert_word(t: Triangulation, word) -> Word:
    return tuple(inv_letter(t, s) for s in reversed(word))


def concat_words(t: Triangulation, *words) -> Word:
    out: list[Side] = []
    for w in words:
        for s in w:
            s = tuple(s)
            if out and out[-1] == inv_letter(t, s):
                out.pop()
            else:
                out.append(s)
    return tuple(out)


def cyclic_reduce(t: Triangulation, word) -> tuple[Word, Word]:
    """(prefix, core) with word = prefix core prefix^-1, core cyclically
    reduced."""
    w = list(reduce_word(t, word))
    prefix: list[Side] = []
    while len(w) >= 2 and w[0] == inv_letter(t, w[-1]):
        prefix.append(w[0])
        w = w[1:-1]
    return tuple(prefix), tuple(w)


def cyclically_equal(core1: Word, core2: Word) -> int | None:
    """Rotation r with core1[r:] + core1[:r] == core2, else None."""
    if len(core1) != len(core2):
        return None
    if not core1:
        return 0
    for r in range(len(core1)):
        if core1[r:] + core1[:r] == core2:
            return r
    return None


def conjugacy_witness(t: Triangulation, word, target_core) -> Word | None:
    """u with word = u * target_core * u^-1 in the free group, or None."""
    prefix, core = cyclic_reduce(t, word)
    r = cyclically_equal(target_core, core)
    if r is None:
        return None
    # target = s t with s = target[:r]; core = t s; target = s core s^-1
    rot = tuple(target_core[:r])
    return concat_words(t, prefix, invert_word(t, rot))


# ---------------------------------------------------------------------------
# universal cover: tree of face copies, exact path lifting
# ---------------------------------------------------------------------------


class CoverNode:
    __slots__ = ("face", "parent", "parent_slot", "children", "depth")

    def __init__(self, face: int, parent: "CoverNode | None", parent_slot: int | None):
        self.face = face
        self.parent = parent
        self.parent_slot = parent_slot
        self.children: dict[int, "CoverNode"] = {}
        self.depth = 0 if parent is None else parent.depth + 1


class CoverTree:
    """Dual tree of the universal cover, grown lazily.

    Nodes are copies of faces; crossing side ``slot`` of a node either
    climbs to its parent (when slot is the parent slot) or descends to a
    memoized child.  A closed based path is null-homotopic exactly when
    its lift ends at the start node, so this gives exact integer-only
    homotopy tests.
    """

    def __init__(self, t: Triangulation, base_face: int):
        self.t = t
        self.root = CoverNode(base_face, None, None)

    def step(self, node: CoverNode, slot: int) -> CoverNode:
        if node.parent is not None and slot == node.parent_slot:
            return node.parent
        child = node.children.get(slot)
        if child is None:
            f2, k2 = self.t.glue[node.face][slot]
            child = CoverNode(f2, node, k2)
            node.children[slot] = child
        return child

    def lift_word(self, word, start: CoverNode | None = None) -> CoverNode:
        node = start or self.root
        for f, k in word:
            if f != node.face:
                raise InvalidPath(f"crossing {(f, k)} from a copy of face {node.face}")
            node = self.step(node, k)
        return node

    def is_null(self, word) -> bool:
        return self.lift_word(word) is self.root

    def node_word(self, node: CoverNode) -> Word:
        """Crossing sequence of the tree path from the root to the node."""
        out = []
        while node.parent is not None:
            out.append((node.parent.face, _descending_slot(node)))
            node = node.parent
        return tuple(reversed(out))


def _descending_slot(node: CoverNode) -> int:
    parent = node.parent
    for slot, child in parent.children.items():
        if child is node:
            return slot
    raise InvalidPath("node is not a registered child of its parent")


# ---------------------------------------------------------------------------
# peripheral cycles
# ---------------------------------------------------------------------------


def sides_with_tail_at(t: Triangulation, x: int) -> list[Side]:
    return [
        (f, k)
        for f in range(t.num_faces)
        for k in range(3)
        if t.vertex_of_corner(f, k) == x
    ]


def peripheral_cycle(t: Triangulation, x: int, start: Side | None = None) -> list[GEdge]:
    """Closed alternating type-2/type-1 cycle around puncture x.

    Crosses, in cyclic order and with multiplicity, exactly the sides
    whose tail corner lies at x; the type-2 steps are positive, which is
    the positively oriented direction around the puncture.
    """
    tails = sides_with_tail_at(t, x)
    if not tails:
        raise GeometryError(f"no such puncture: {x}")
    first = start if start is not None else min(tails)
    if first not in tails:
        raise GeometryError(f"side {first} does not point at puncture {x}")
    path: list[GEdge] = []
    f, k = first
    while True:
        path.append(GEdge(2, f, (k - 1) % 3, 1))
        path.append(GEdge(1, f, k))
        f2, k2 = t.glue[f][k]
        f, k = f2, (k2 + 1) % 3
        if (f, k) == first:
            break
    return path


def crossed_edges(t: Triangulation, path: list[GEdge]) -> list[int]:
    """Triangulation edge ids crossed by the type-1 edges of a path."""
    return [t.side_edge[(e.face, e.slot)] for e in path if e.kind == 1]


# ---------------------------------------------------------------------------
# presentation certification
# ---------------------------------------------------------------------------


def relator_word(t: Triangulation) -> Word:
    p = t.presentation
    parts = []
    for a, b in p.handles:
        parts += [a, b, invert_word(t, a), invert_word(t, b)]
    parts += list(p.cusps)
    return concat_words(t, *parts)


def certify_presentation(t: Triangulation) -> None:
    """Exact checks on the stored presentation: every word is a based
    loop, the relator is null-homotopic, and the cusp words are freely
    conjugate to positively oriented peripheral cycles of pairwise
    distinct punctures.  Fills ``cusp_vertices``."""
    p = t.presentation
    if p is None:
        raise PresentationError("triangulation carries no presentation")
    if len(p.handles) != t.genus or len(p.cusps) != t.punctures:
        raise PresentationError("generator counts disagree with the topology")
    base_face = p.base[0]
    cover = CoverTree(t, base_face)
    for w in [w for pair in p.handles for w in pair] + list(p.cusps):
        if not w:
            raise PresentationError("empty generator word")
        end = cover.lift_word(w)  # validates face chaining as well
        if end.face != base_face:
            raise PresentationError("generator word is not a based loop")
    if not cover.is_null(relator_word(t)):
        raise PresentationError("relator word is not null-homotopic")
    peripheral_cores = {}
    for x in range(t.num_vertices):
        word = reduce_word(t, path_word(peripheral_cycle(t, x)))
        _, core = cyclic_reduce(t, word)
        peripheral_cores[x] = core
    assigned: list[int] = []
    for j, c in enumerate(p.cusps):
        match = None
        for x, core in peripheral_cores.items():
            if x in assigned:
                continue
            if conjugacy_witness(t, c, core) is not None:
                match = x
                break
        if match is None:
            raise PresentationError(f"cusp word {j} is not a positive peripheral loop")
        assigned.append(match)
    p.cusp_vertices = assigned


# ---------------------------------------------------------------------------
# bases of the recursion
# ---------------------------------------------------------------------------


def generate_base(kind: str) -> Triangulation:
    """The two-face bipartite bases: 'torus1' (genus one, one puncture)
    and 'sphere3' (genus zero, three punctures)."""
    if kind == "torus1":
        glue = [
            [(1, 1), (1, 2), (1, 0)],
            [(0, 2), (0, 0), (0, 1)],
        ]
        t = Triangulation(glue)
        a: Word = ((0, 0), (1, 0))
        b: Word = ((0, 1), (1, 0))
        c = concat_words(t, b, a, invert_word(t, b), invert_word(t, a))
        t.presentation = Presentation(
            base=(0, 2), pair_sides=[(0, 0), (0, 1)], handles=[(a, b)], cusps=[c]
        )
        certify_presentation(t)
        return t
    if kind == "sphere3":
        glue = [
            [(1, 0), (1, 2), (1, 1)],
            [(0, 0), (0, 2), (0, 1)],
        ]
        t = Triangulation(glue)
        c1: Word = ((0, 0), (1, 1))
        c2: Word = ((0, 1), (1, 0))
        c3 = concat_words(t, invert_word(t, c2), invert_word(t, c1))
        t.presentation = Presentation(
            base=(0, 2), pair_sides=[(0, 0), (0, 1)], handles=[], cusps=[c1, c2, c3]
        )
        certify_presentation(t)
        return t
    raise InvalidSignature(f"unknown base {kind!r}")


# ---------------------------------------------------------------------------
# surgeries
# ---------------------------------------------------------------------------


def _substitute(word: Word, table: dict[Side, tuple[Side, ...]]) -> tuple[Side, ...]:
    out: list[Side] = []
    for s in word:
        out.extend(table.get(s, (s,)))
    return tuple(out)


def _substitute_cusp(
    t_old: Triangulation,
    t_new: Triangulation,
    cusp: Word,
    fan_table: dict[Side, tuple[Side, ...]],
    lane_table: dict[Side, tuple[Side, ...]],
) -> Word:
    """Re-route a peripheral word through a surgery block.

    The cyclically reduced core follows the link fans (that is what keeps
    it the peripheral cycle of the new link); the conjugating prefix is
    substituted once and inverted afterwards, so the result is an exact
    conjugate of the substituted core whatever lanes the prefix takes.
    """
    pre, core = cyclic_reduce(t_old, cusp)
    pre2 = reduce_word(t_new, _substitute(pre, lane_table))
    core2 = reduce_word(t_new, _substitute(core, fan_table))
    return concat_words(t_new, pre2, core2, invert_word(t_new, pre2))


def _cut_edge_sides(t: Triangulation, edge_id: int) -> tuple[Side, Side]:
    if t.presentation is not None and edge_id not in t.internal_edges():
        raise NotInternalEdge(f"edge {edge_id} carries a generator letter")
    if not 0 <= edge_id < t.num_edges:
        raise NotInternalEdge(f"no such edge: {edge_id}")
    return t.edge_sides[edge_id]


def increase_genus(t: Triangulation, edge_id: int) -> Triangulation:
    """Cut an internal edge and insert a four-triangle handle block.

    Adds four faces, six edges and no vertex, so the Euler characteristic
    drops by two; a proper face coloring always extends to the block.
    """
    (fa, ka), (fb, kb) = _cut_edge_sides(t, edge_id)
    u1, u2, u3, u4 = (t.num_faces + i for i in range(4))
    glue: list[list[Side | None]] = [list(row) for row in t.glue]
    glue += [[None] * 3 for _ in range(4)]

    def set_pair(s1, s2):
        glue[s1[0]][s1[1]] = tuple(s2)
        glue[s2[0]][s2[1]] = tuple(s1)

    set_pair((fa, ka), (u2, 0))
    set_pair((fb, kb), (u3, 2))
    set_pair((u1, 2), (u2, 1))
    set_pair((u2, 2), (u3, 0))
    set_pair((u3, 1), (u4, 2))
    set_pair((u1, 0), (u4, 0))  # new crossing letter alpha
    set_pair((u1, 1), (u4, 1))  # new crossing letter beta
    t_new = Triangulation(glue)

    # Cusp words re-route along the link fans of the two old endpoints of
    # the cut edge (the fan entering at side A walks around the whole
    # handle block), which keeps them peripheral.  Handle words use the
    # short interior lane and its exact inverse.
    fan_table = {
        (fa, ka): (
            (fa, ka), (u2, 1), (u1, 0), (u4, 1), (u1, 2), (u2, 2),
            (u3, 1), (u4, 0), (u1, 1), (u4, 2), (u3, 2),
        ),
        (fb, kb): ((fb, kb), (u3, 0), (u2, 0)),
    }
    lane_table = {
        (fa, ka): ((fa, ka), (u2, 2), (u3, 2)),
        (fb, kb): ((fb, kb), (u3, 0), (u2, 0)),
    }
    old = t.presentation
    pres = Presentation(
        base=old.base,
        pair_sides=old.pair_sides + [(u1, 0), (u1, 1)],
        handles=[
            (
                reduce_word(t_new, _substitute(a, lane_table)),
                reduce_word(t_new, _substitute(b, lane_table)),
            )
            for a, b in old.handles
        ],
        cusps=[
            _substitute_cusp(t, t_new, c, fan_table, lane_table) for c in old.cusps
        ],
    )
    t_new.presentation = pres
    _close_with_handle(t_new, (u1, 0), (u1, 1))
    certify_presentation(t_new)
    return t_new


def add_puncture(t: Triangulation, edge_id: int) -> Triangulation:
    """Cut an internal edge and fill the slit with a two-triangle pillow
    around one new vertex.

    Adds two faces, three edges and one vertex; the Euler characteristic
    is preserved and a proper face coloring always extends.
    """
    (fa, ka), (fb, kb) = _cut_edge_sides(t, edge_id)
    t1, t2 = t.num_faces, t.num_faces + 1
    glue: list[list[Side | None]] = [list(row) for row in t.glue]
    glue += [[None] * 3 for _ in range(2)]

    def set_pair(s1, s2):
        glue[s1[0]][s1[1]] = tuple(s2)
        glue[s2[0]][s2[1]] = tuple(s1)

    set_pair((fa, ka), (t1, 0))
    set_pair((fb, kb), (t2, 0))
    set_pair((t1, 1), (t2, 2))
    set_pair((t1, 2), (t2, 1))  # new crossing letter around the new vertex
    t_new = Triangulation(glue)

    # Cusp words re-route along the link fans of the two old endpoints of
    # the cut edge, which keeps them peripheral; handle words use one lane
    # and its exact inverse, which keeps their crossings of the cut edge
    # from winding around the new vertex.
    fan_table = {
        (fa, ka): ((fa, ka), (t1, 1), (t2, 0)),
        (fb, kb): ((fb, kb), (t2, 1), (t1, 0)),
    }
    lane_table = {
        (fa, ka): ((fa, ka), (t1, 1), (t2, 0)),
        (fb, kb): ((fb, kb), (t2, 2), (t1, 0)),
    }
    old = t.presentation
    pres = Presentation(
        base=old.base,
        pair_sides=old.pair_sides + [(t1, 2)],
        handles=[
            (
                reduce_word(t_new, _substitute(a, lane_table)),
                reduce_word(t_new, _substitute(b, lane_table)),
            )
            for a, b in old.handles
        ],
        cusps=[
            _substitute_cusp(t, t_new, c, fan_table, lane_table) for c in old.cusps
        ],
    )
    t_new.presentation = pres
    _close_with_cusp(t_new)
    certify_presentation(t_new)
    return t_new


def _close_with_cusp(t: Triangulation) -> None:
    """Append the inverse of the current relator as the new last cusp;
    certification checks it is a simple loop around the new vertex."""
    p = t.presentation
    parts = []
    for a, b in p.handles:
        parts += [a, b, invert_word(t, a), invert_word(t, b)]
    parts += list(p.cusps)
    p.cusps.append(invert_word(t, concat_words(t, *parts)))


def _close_with_handle(t: Triangulation, alpha_side: Side, beta_side: Side) -> None:
    """Solve prod [a_i,b_i] X prod c_j = 1 for X = [a_new, b_new], with
    a_new, b_new conjugates of crossing loops through the new block."""
    p = t.presentation
    parts = []
    for a, b in p.handles:
        parts += [a, b, invert_word(t, a), invert_word(t, b)]
    pw = concat_words(t, *parts)
    qw = concat_words(t, *p.cusps)
    x = concat_words(t, invert_word(t, pw), invert_word(t, qw))
    forbidden = {
        alpha_side,
        beta_side,
        t.glue[alpha_side[0]][alpha_side[1]],
        t.glue[beta_side[0]][beta_side[1]],
    }
    ga = _crossing_loop(t, alpha_side, p.base, forbidden)
    gb = _crossing_loop(t, beta_side, p.base, forbidden)
    candidates = []
    for pc in (ga, invert_word(t, ga)):
        for qc in (gb, invert_word(t, gb)):
            candidates.append((pc, qc))
            candidates.append((qc, pc))
    for pc, qc in candidates:
        comm = concat_words(t, pc, qc, invert_word(t, pc), invert_word(t, qc))
        v, core = cyclic_reduce(t, comm)
        u = conjugacy_witness(t, x, core)
        if u is None:
            continue
        conj = concat_words(t, u, invert_word(t, v))
        a_new = concat_words(t, conj, pc, invert_word(t, conj))
        b_new = concat_words(t, conj, qc, invert_word(t, conj))
        check = concat_words(t, a_new, b_new, invert_word(t, a_new), invert_word(t, b_new))
        if check == reduce_word(t, x):
            p.handles.append((a_new, b_new))
            return
    raise PresentationError("could not express the handle defect as a commutator")


def _crossing_loop(t: Triangulation, side: Side, base: Side, forbidden: set[Side]) -> Word:
    """Based loop crossing the given side exactly once, routed through
    breadth-first face paths avoiding all forbidden sides."""
    f0 = base[0]
    f_in = side[0]
    f_out = t.glue[side[0]][side[1]][0]
    w_in = _bfs_face_word(t, f0, f_in, forbidden)
    w_out = _bfs_face_word(t, f_out, f0, forbidden)
    return concat_words(t, w_in, (side,), w_out)


def _bfs_face_word(t: Triangulation, f_from: int, f_to: int, forbidden: set[Side]) -> Word:
    if f_from == f_to:
        return ()
    prev: dict[int, Side | None] = {f_from: None}
    queue = [f_from]
    while queue:
        f = queue.pop(0)
        if f == f_to:
            break
        for k in range(3):
            if (f, k) in forbidden:
                continue
            f2 = t.glue[f][k][0]
            if f2 not in prev:
                prev[f2] = (f, k)
                queue.append(f2)
    if f_to not in prev:
        raise PresentationError("face graph disconnected without the new letters")
    word = []
    f = f_to
    while prev[f] is not None:
        word.append(prev[f])
        f = prev[f][0]
    return tuple(reversed(word))


# ---------------------------------------------------------------------------
# presentation shortening
# ---------------------------------------------------------------------------


def _presentation_length(p: Presentation) -> int:
    return sum(len(a) + len(b) for a, b in p.handles) + sum(len(c) for c in p.cusps)


def _two_letter_loops(t: Triangulation, base: Side) -> list[Word]:
    f0 = base[0]
    out = []
    for k in range(3):
        f2, _ = t.glue[f0][k]
        for k3 in range(3):
            if t.glue[f2][k3][0] == f0:
                out.append(((f0, k), (f2, k3)))
    return out


def _rebase_word(t: Triangulation, f_from: int, f_to: int) -> Word:
    if f_from == f_to:
        return ()
    prev: dict[int, Side | None] = {f_from: None}
    queue = [f_from]
    while queue:
        f = queue.pop(0)
        if f == f_to:
            break
        for k in range(3):
            f2 = t.glue[f][k][0]
            if f2 not in prev:
                prev[f2] = (f, k)
                queue.append(f2)
    word = []
    f = f_to
    while prev[f] is not None:
        word.append(prev[f])
        f = prev[f][0]
    return tuple(reversed(word))


def shorten_presentation(t: Triangulation, max_rounds: int = 400) -> None:
    """Greedy length reduction of the generator words.

    All moves preserve the canonical relator exactly: handle twists
    (a, b) -> (ab^r, b) or (a, ba^r) which fix the commutator, swapping
    adjacent handles or cusps with the compensating conjugation, global
    conjugation by a based loop, and rebasing along a path.  Long words
    are what limits floating point accuracy of holonomy products, so this
    matters beyond cosmetics.
    """
    p = t.presentation
    if p is None:
        return
    for _ in range(max_rounds):
        improved = False
        for i, (a, b) in enumerate(list(p.handles)):
            old = concat_words(t, a, b, invert_word(t, a), invert_word(t, b))
            best = (len(a) + len(b), a, b)
            for ca, cb in (
                (concat_words(t, a, b), b),
                (concat_words(t, a, invert_word(t, b)), b),
                (a, concat_words(t, b, a)),
                (a, concat_words(t, b, invert_word(t, a))),
            ):
                new = concat_words(t, ca, cb, invert_word(t, ca), invert_word(t, cb))
                if new == old and len(ca) + len(cb) < best[0]:
                    best = (len(ca) + len(cb), ca, cb)
            if best[0] < len(a) + len(b):
                p.handles[i] = (best[1], best[2])
                improved = True
        for i in range(len(p.handles) - 1):
            a1, b1 = p.handles[i]
            a2, b2 = p.handles[i + 1]
            x1 = concat_words(t, a1, b1, invert_word(t, a1), invert_word(t, b1))
            a2p = concat_words(t, x1, a2, invert_word(t, x1))
            b2p = concat_words(t, x1, b2, invert_word(t, x1))
            if len(a2p) + len(b2p) < len(a2) + len(b2):
                p.handles[i], p.handles[i + 1] = (a2p, b2p), (a1, b1)
                improved = True
        for j in range(len(p.cusps) - 1):
            c1, c2 = p.cusps[j], p.cusps[j + 1]
            slid = concat_words(t, c1, c2, invert_word(t, c1))
            if len(slid) + len(c1) < len(c1) + len(c2):
                p.cusps[j], p.cusps[j + 1] = slid, c1
                improved = True
                continue
            slid = concat_words(t, invert_word(t, c2), c1, c2)
            if len(c2) + len(slid) < len(c1) + len(c2):
                p.cusps[j], p.cusps[j + 1] = c2, slid
                improved = True
        candidates: list[tuple[Word, Side]] = []
        for w in [w for pair in p.handles for w in pair] + list(p.cusps):
            candidates.append((w, p.base))
            candidates.append((invert_word(t, w), p.base))
        for w in _two_letter_loops(t, p.base):
            candidates.append((w, p.base))
        for f2 in range(t.num_faces):
            if f2 != p.base[0]:
                q = _rebase_word(t, p.base[0], f2)
                candidates.append((invert_word(t, q), (f2, 0)))
        base_total = _presentation_length(p)
        best_conj = None
        for w, new_base in candidates:
            wi = invert_word(t, w)
            handles = [
                (concat_words(t, w, a, wi), concat_words(t, w, b, wi))
                for a, b in p.handles
            ]
            cusps = [concat_words(t, w, c, wi) for c in p.cusps]
            total = sum(len(a) + len(b) for a, b in handles) + sum(len(c) for c in cusps)
            if total < base_total and (best_conj is None or total < best_conj[0]):
                best_conj = (total, handles, cusps, new_base)
        if best_conj is not None:
            _, p.handles, p.cusps, p.base = best_conj
            improved = True
        if not improved:
            break
    certify_presentation(t)


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def generate_surface(g: int, n: int) -> Triangulation:
    """Bipartite triangulation of the genus-g surface with n punctures,
    built deterministically from a base by cutting the lowest internal
    edge at each step."""
    if g < 0 or n < 1 or 2 - 2 * g - n >= 0:
        raise InvalidSignature(f"no hyperbolic punctured surface with (g, n) = ({g}, {n})")
    if g >= 1:
        t = generate_base("torus1")
        base_g, base_n = 1, 1
    else:
        t = generate_base("sphere3")
        base_g, base_n = 0, 3
    for _ in range(g - base_g):
        t = increase_genus(t, min(t.internal_edges()))
    for _ in range(n - base_n):
        t = add_puncture(t, min(t.internal_edges()))
    shorten_presentation(t)
    return t
