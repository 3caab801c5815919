"""Core map representation: counts, classification, derived maps, codes."""

import random

import pytest

from combsurf.surfmap import (
    CombinatorialMap,
    MapError,
    build_map,
    genus2_one_vertex_map,
    klein_bottle_map,
    map_from_face_words,
    map_from_triangles,
    nonorientable_one_vertex_map,
    projective_plane_map,
    tetrahedron,
    torus_bouquet,
)


def test_tetrahedron_counts():
    m = tetrahedron()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (4, 6, 4)
    assert m.euler_characteristic == 2
    cls = m.classify()
    assert cls.orientable and cls.genus == 0
    assert all(len(w) == 3 for w in m.faces())


def test_bouquet_torus():
    m = torus_bouquet()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (1, 2, 1)
    assert m.euler_characteristic == 0
    cls = m.classify()
    assert cls.orientable and cls.genus == 1
    assert len(m.faces()[0]) == 4


def test_duplicate_dart_rejected():
    with pytest.raises(MapError):
        build_map([["a", "a", "a", "b", "b-"]])
    with pytest.raises(MapError):
        build_map([["a", "b", "b-"]])


def test_projective_plane():
    m = projective_plane_map()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (1, 1, 1)
    assert m.euler_characteristic == 1
    cls = m.classify()
    assert not cls.orientable and cls.genus == 1


def test_klein_bottle_fixture():
    m = klein_bottle_map()
    assert m.euler_characteristic == 0
    cls = m.classify()
    assert not cls.orientable and cls.genus == 2


def test_spec_nonorientable_example():
    # one-vertex map with rotation (a, a, b, b-) is non-orientable with
    # chi from orbit counting; the adjacent b-ends bound a monogon, so it
    # is a projective plane carrying a trivial loop
    m = build_map([["a", "a", "b", "b-"]])
    assert not m.classify().orientable
    assert m.euler_characteristic == 1
    assert sorted(m.face_degrees()) == [1, 3]


def test_genus2_fixture():
    m = genus2_one_vertex_map()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (1, 4, 1)
    cls = m.classify()
    assert cls.orientable and cls.genus == 2


def test_nonorientable_crosscap_words():
    for g in (1, 2, 3, 4):
        m = nonorientable_one_vertex_map(g)
        cls = m.classify()
        assert not cls.orientable
        assert cls.genus == g


def test_faces_partition_darts_untwisted():
    m = tetrahedron()
    seen = sorted(d for w in m.faces() for d in w)
    assert seen == list(range(m.n_darts))


def test_degree_sum():
    for m in (tetrahedron(), torus_bouquet(), klein_bottle_map()):
        assert sum(m.degree(v) for v in range(m.n_vertices)) == 2 * m.n_edges
        assert sum(m.face_degrees()) == 2 * m.n_edges


def _random_one_vertex_map(rng, n_edges):
    darts = list(range(2 * n_edges))
    rng.shuffle(darts)
    sigma = [0] * len(darts)
    for i, d in enumerate(darts):
        sigma[d] = darts[(i + 1) % len(darts)]
    alpha = [0] * len(darts)
    order = list(range(2 * n_edges))
    rng.shuffle(order)
    for i in range(0, len(order), 2):
        alpha[order[i]] = order[i + 1]
        alpha[order[i + 1]] = order[i]
    m = CombinatorialMap(sigma, alpha)
    twist = [rng.randint(0, 1) for _ in range(m.n_edges)]
    return CombinatorialMap(sigma, alpha, twist)


def _random_maps(count=40, max_edges=5, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = _random_one_vertex_map(rng, rng.randint(1, max_edges))
        if m.is_connected:
            out.append(m)
    return out


def test_dual_involution_and_class_preservation():
    fixtures = [tetrahedron(), torus_bouquet(), projective_plane_map(),
                klein_bottle_map(), genus2_one_vertex_map()]
    for m in fixtures + _random_maps():
        d = m.dual()
        assert d.n_vertices == m.n_faces
        assert d.n_edges == m.n_edges
        assert d.n_faces == m.n_vertices
        assert d.classify() == m.classify()
        dd = d.dual()
        assert dd.canonical_code() == m.canonical_code()


def test_radial_properties():
    for m in [tetrahedron(), torus_bouquet(), projective_plane_map(),
              klein_bottle_map()] + _random_maps(count=15):
        r = m.radial()
        assert r.n_vertices == m.n_vertices + m.n_faces
        assert r.n_edges == 2 * m.n_edges
        assert r.classify() == m.classify()
        # quadrangular faces, one per edge
        assert sorted(r.face_degrees()) == [4] * m.n_edges


def test_radial_tetrahedron_bipartite_counts():
    r, meta = tetrahedron().radial_with_data()
    assert r.n_vertices == 8 and r.n_edges == 12
    # bipartite between face-nodes and vertex-nodes
    fn = set(meta["face_node"])
    vn = set(meta["vertex_node"])
    assert fn.isdisjoint(vn)
    for e in range(r.n_edges):
        a, b = r.endpoints(e)
        assert (a in fn) != (b in fn)


def test_medial_properties():
    for m in [tetrahedron(), torus_bouquet(), klein_bottle_map(),
              projective_plane_map()] + _random_maps(count=15):
        med = m.medial()
        assert med.n_vertices == m.n_edges
        assert med.n_edges == 2 * m.n_edges
        assert all(med.degree(v) == 4 for v in range(med.n_vertices))
        assert med.classify().euler_characteristic == m.classify().euler_characteristic


def test_medial_tetrahedron_is_octahedron():
    med = tetrahedron().medial()
    assert (med.n_vertices, med.n_edges) == (6, 12)
    assert med.classify().is_sphere


def test_medial_bouquet():
    med = torus_bouquet().medial()
    assert (med.n_vertices, med.n_edges) == (2, 4)
    assert med.classify().orientable and med.classify().genus == 1


def test_canonical_code_invariance_under_relabeling():
    rng = random.Random(3)
    for m in [tetrahedron(), klein_bottle_map(), genus2_one_vertex_map()]:
        code = m.canonical_code()
        for _ in range(100):
            perm = list(range(m.n_darts))
            rng.shuffle(perm)
            assert m.relabeled(perm).canonical_code() == code


def test_canonical_code_invariance_under_vertex_flips():
    rng = random.Random(5)
    for m in _random_maps(count=20):
        code = m.canonical_code()
        for _ in range(10):
            flips = [v for v in range(m.n_vertices) if rng.random() < 0.5]
            assert m.flipped(flips).canonical_code() == code


def test_canonical_code_distinguishes():
    assert tetrahedron().canonical_code() != torus_bouquet().canonical_code()
    assert (projective_plane_map().canonical_code()
            != klein_bottle_map().canonical_code())


def test_map_from_triangles_roundtrip():
    m = map_from_triangles([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])
    assert m.canonical_code() == tetrahedron().canonical_code()


def test_map_from_face_words_gluings():
    # two triangles glued along their boundary: the sphere
    m = map_from_face_words([["a", "b", "c"], ["c-", "b-", "a-"]])
    assert m.euler_characteristic == 2
    assert m.classify().is_sphere
    # one square with the torus identification
    t = map_from_face_words([["a", "b", "a-", "b-"]])
    assert t.classify().orientable and t.classify().genus == 1
    assert t.n_vertices == 1
    # octagon with opposite sides identified by translation: genus 2
    o = map_from_face_words([["a", "b", "c", "d", "a-", "b-", "c-", "d-"]])
    assert o.classify().orientable and o.classify().genus == 2
    assert o.n_vertices == 1


def test_delete_edge():
    m = tetrahedron()
    m2, dart_map = m.delete_edge(0)
    assert m2.n_edges == 5
    assert m2.n_vertices == 4
    # sphere again, one square face appears
    assert m2.euler_characteristic == 2
    assert sorted(m2.face_degrees()) == [3, 3, 4]


def test_flip_preserves_structure():
    m = klein_bottle_map()
    f = m.flipped([0])
    assert f.classify() == m.classify()
    assert f.canonical_code() == m.canonical_code()
