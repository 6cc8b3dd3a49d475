import json

import pytest

from chbend.surfaces import (
    CoverTree,
    GEdge,
    InvalidSignature,
    NotBipartite,
    NotInternalEdge,
    Triangulation,
    add_puncture,
    build_modified_dual,
    certify_presentation,
    crossed_edges,
    cyclic_reduce,
    generate_base,
    generate_surface,
    increase_genus,
    invert_word,
    materialize_word,
    path_word,
    peripheral_cycle,
    reduce_word,
    relator_word,
    reverse_path,
    validate_path,
)

ACCEPTANCE_SIGNATURES = [(1, 1), (0, 3), (1, 2), (2, 1), (0, 4), (2, 2)]


def nonbipartite_fixture() -> Triangulation:
    """A face glued to itself along an edge: the dual has a self-loop."""
    return Triangulation(
        [
            [(0, 1), (0, 0), (1, 0)],
            [(0, 2), (1, 2), (1, 1)],
        ]
    )


def test_torus_base_counts():
    t = generate_base("torus1")
    assert (t.num_faces, t.num_edges, t.num_vertices) == (2, 3, 1)
    assert (t.genus, t.punctures) == (1, 1)
    assert t.bipartite_coloring() in ({0: "w", 1: "b"}, {0: "b", 1: "w"})


def test_sphere_base_counts():
    t = generate_base("sphere3")
    assert (t.num_faces, t.num_edges, t.num_vertices) == (2, 3, 3)
    assert (t.genus, t.punctures) == (0, 3)
    t.bipartite_coloring()


def test_unknown_base():
    with pytest.raises(InvalidSignature):
        generate_base("klein")


def test_increase_genus_counts():
    t = generate_base("torus1")
    t2 = increase_genus(t, min(t.internal_edges()))
    assert (t2.num_faces, t2.num_edges, t2.num_vertices) == (6, 9, 1)
    assert t2.genus == 2
    assert t2.euler_characteristic == t.euler_characteristic - 2
    t2.bipartite_coloring()


def test_add_puncture_counts():
    s = generate_base("sphere3")
    s2 = add_puncture(s, min(s.internal_edges()))
    assert (s2.num_faces, s2.num_edges, s2.num_vertices) == (4, 6, 4)
    assert s2.euler_characteristic == s.euler_characteristic
    s2.bipartite_coloring()
    t = generate_base("torus1")
    t2 = add_puncture(t, min(t.internal_edges()))
    assert (t2.num_faces, t2.num_edges, t2.num_vertices) == (4, 6, 2)
    t2.bipartite_coloring()


def test_surgery_requires_internal_edge():
    t = generate_base("torus1")
    lettered = [e for e in range(t.num_edges) if e not in t.internal_edges()]
    with pytest.raises(NotInternalEdge):
        increase_genus(t, lettered[0])
    with pytest.raises(NotInternalEdge):
        add_puncture(t, lettered[0])


@pytest.mark.parametrize("g,n", ACCEPTANCE_SIGNATURES)
def test_generate_surface_counts(g, n):
    t = generate_surface(g, n)
    assert t.num_faces == 4 * g - 4 + 2 * n
    assert t.num_edges == 6 * g - 6 + 3 * n
    assert (t.genus, t.punctures) == (g, n)
    coloring = t.bipartite_coloring()
    for f in range(t.num_faces):
        for k in range(3):
            assert coloring[f] != coloring[t.glue[f][k][0]]


def test_generate_surface_invalid():
    for g, n in [(0, 1), (0, 2), (1, 0), (0, 0), (-1, 3)]:
        with pytest.raises(InvalidSignature):
            generate_surface(g, n)


@pytest.mark.parametrize("g,n", ACCEPTANCE_SIGNATURES)
def test_modified_dual_invariants(g, n):
    t = generate_surface(g, n)
    graph = build_modified_dual(t)
    assert len(graph.vertices) == 2 * t.num_edges
    assert len(graph.type1) == t.num_edges
    assert len(graph.type2) == 3 * t.num_faces
    for v in graph.vertices:
        assert graph.degree(v) == 3
    for f, cyc in graph.face_cycles().items():
        assert len(cyc) == 3
        starts = {a for a, _ in cyc}
        ends = {b for _, b in cyc}
        assert starts == ends == {(f, 0), (f, 1), (f, 2)}


def test_torus_peripheral_cycle():
    t = generate_base("torus1")
    cyc = peripheral_cycle(t, 0)
    ids = crossed_edges(t, cyc)
    assert len(ids) == 6
    assert sorted(ids.count(e) for e in set(ids)) == [2, 2, 2]
    kinds = [e.kind for e in cyc]
    assert kinds == [2, 1] * 6
    validate_path(t, cyc, closed=True)


def test_sphere_peripheral_cycles():
    t = generate_base("sphere3")
    for x in range(3):
        cyc = peripheral_cycle(t, x)
        assert len(crossed_edges(t, cyc)) == 2
        validate_path(t, cyc, closed=True)


@pytest.mark.parametrize("g,n", ACCEPTANCE_SIGNATURES)
def test_peripheral_total_crossings(g, n):
    t = generate_surface(g, n)
    total = sum(len(crossed_edges(t, peripheral_cycle(t, x))) for x in range(n))
    assert total == 2 * t.num_edges


def test_nonbipartite_witness():
    t = nonbipartite_fixture()
    with pytest.raises(NotBipartite) as exc:
        t.bipartite_coloring()
    assert len(exc.value.witness) % 2 == 1
    assert not t.is_bipartite()


@pytest.mark.parametrize("g,n", ACCEPTANCE_SIGNATURES)
def test_presentation_certified(g, n):
    t = generate_surface(g, n)
    p = t.presentation
    assert len(p.handles) == g
    assert len(p.cusps) == n
    assert sorted(p.cusp_vertices) == list(range(n))
    certify_presentation(t)  # idempotent re-check
    cover = CoverTree(t, p.base[0])
    assert cover.is_null(relator_word(t))


def test_relator_is_reduced_to_empty_for_sphere():
    t = generate_base("sphere3")
    assert relator_word(t) == ()


def test_words_materialize_and_reverse():
    t = generate_surface(1, 2)
    p = t.presentation
    for word in [p.handles[0][0], p.handles[0][1]] + list(p.cusps):
        path = materialize_word(t, word, p.base)
        validate_path(t, path, closed=True)
        assert path_word(path) == word
        rev = reverse_path(t, path)
        validate_path(t, rev, closed=True)
        assert reduce_word(t, path_word(rev)) == invert_word(t, word)


def test_cover_tree_detects_nontrivial_loops():
    t = generate_base("torus1")
    cover = CoverTree(t, 0)
    a = t.presentation.handles[0][0]
    assert not cover.is_null(a)
    aa_inv = a + invert_word(t, a)
    assert cover.is_null(reduce_word(t, aa_inv))


def test_cyclic_reduce():
    t = generate_base("torus1")
    a = t.presentation.handles[0][0]
    w = invert_word(t, a) + t.presentation.cusps[0] + a
    pre, core = cyclic_reduce(t, w)
    from chbend.surfaces import concat_words, inv_letter

    assert concat_words(t, pre, core, invert_word(t, pre)) == reduce_word(t, w)
    if core:
        assert core[0] != inv_letter(t, core[-1])


@pytest.mark.parametrize("g,n", ACCEPTANCE_SIGNATURES)
def test_json_round_trip(g, n, tmp_path):
    t = generate_surface(g, n)
    path = tmp_path / "tri.json"
    t.save(str(path))
    data = json.loads(path.read_text())
    assert data["genus"] == g and data["punctures"] == n
    assert {"faces", "edges", "coloring", "generators"} <= set(data)
    t2 = Triangulation.load(str(path))
    assert t2.glue == t.glue
    assert t2.presentation.handles == t.presentation.handles
    assert t2.presentation.cusps == t.presentation.cusps
    assert t2.presentation.cusp_vertices == t.presentation.cusp_vertices
    certify_presentation(t2)
    # second round trip is byte-identical
    path2 = tmp_path / "tri2.json"
    t2.save(str(path2))
    assert path.read_text() == path2.read_text()


def test_edge_endpoints_consistent():
    t = generate_surface(0, 4)
    for eid in range(t.num_edges):
        v0, v1 = t.edge_endpoints(eid)
        (f, k), (f2, k2) = t.edge_sides[eid]
        assert v0 == t.vertex_of_corner(f, k) == t.vertex_of_corner(f2, (k2 + 1) % 3)
        assert v1 == t.vertex_of_corner(f, (k + 1) % 3) == t.vertex_of_corner(f2, k2)


def test_deterministic_generation():
    t1 = generate_surface(2, 2)
    t2 = generate_surface(2, 2)
    assert t1.glue == t2.glue
    assert t1.presentation.cusps == t2.presentation.cusps
