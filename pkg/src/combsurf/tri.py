"""Triangulations: validation, contraction/splitting, widths, and
irreducibility certificates.

A triangulation is a connected simple map all of whose faces have degree
three.  Widths are computed through the homotopy engine: edge-width on
the primal graph, face-width on the radial map (nooses alternate between
vertex nodes and face nodes, so a noose of length k is a radial cycle of
length 2k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from . import homotopy
from .surfmap import (
    CombinatorialMap,
    MapError,
    SphereInputError,
    SurfaceClass,
    map_from_triangles,
    tetrahedron as _tetra_map,
)


class TriangulationError(MapError):
    """Raised when a map fails triangulation validation."""


@dataclass(frozen=True)
class Triangulation:
    map: CombinatorialMap
    surface: SurfaceClass

    @property
    def n_vertices(self):
        return self.map.n_vertices

    @property
    def n_edges(self):
        return self.map.n_edges

    @property
    def n_faces(self):
        return self.map.n_faces

    def __repr__(self):
        return (f"Triangulation(V={self.n_vertices}, E={self.n_edges}, "
                f"{self.surface})")


def validate(m: CombinatorialMap) -> Triangulation:
    """Check simplicity and triangular faces; raises TriangulationError."""
    if not m.is_connected:
        raise TriangulationError("disconnected map")
    seen_pairs = {}
    for e in range(m.n_edges):
        u, v = m.endpoints(e)
        if u == v:
            raise TriangulationError(f"loop at vertex {u} (edge {e})")
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            raise TriangulationError(f"parallel edges {seen_pairs[key]}, {e}")
        seen_pairs[key] = e
    bad = [len(w) for w in m.face_orbits() if len(w) != 3]
    if bad:
        raise TriangulationError(f"faces of degree {sorted(set(bad))} present")
    return Triangulation(map=m, surface=m.classify())


def neighbors(m: CombinatorialMap, v: int) -> list[int]:
    """Neighbor vertices of v in rotation order."""
    return [m.vertex_of(m.alpha[d]) for d in m.rotation_at(v)]


def link_cycle(m: CombinatorialMap, v: int) -> list[int]:
    """Vertex link of v: its neighbors in rotation order (a cycle in a
    triangulation)."""
    return neighbors(m, v)


def _apex_vertices(T: Triangulation, e: int) -> tuple[int, int]:
    """The two triangle corners opposite edge e."""
    m = T.map
    d, dd = m.edge_darts(e)
    fos = m.face_of_state()
    faces = m.face_orbits()
    apexes = []
    for dart in (d, dd):
        walk = faces[fos[2 * dart]]
        verts = {m.vertex_of(x >> 1) for x in walk}
        u, v = m.endpoints(e)
        apex = verts - {u, v}
        if len(apex) != 1:
            raise TriangulationError("degenerate triangle at edge")
        apexes.append(apex.pop())
    return apexes[0], apexes[1]


def is_contractible_edge(T: Triangulation, e: int) -> bool:
    """Link condition: the endpoint links meet exactly in the two apex
    vertices and share no edge."""
    m = T.map
    u, v = m.endpoints(e)
    x, y = _apex_vertices(T, e)
    if x == y:
        return False
    lu, lv = link_cycle(m, u), link_cycle(m, v)
    common = (set(lu) & set(lv)) - {u, v}
    if common != {x, y}:
        return False

    def link_edges(link):
        n = len(link)
        return {frozenset((link[i], link[(i + 1) % n])) for i in range(n)
                if link[i] != link[(i + 1) % n]}

    eu = link_edges([w for w in lu if w != v])
    ev = link_edges([w for w in lv if w != u])
    # shared link edge (other than through the removed corners) forces a
    # doubled face after contraction; in particular xy blocks it
    if frozenset((x, y)) in link_edges(lu) and frozenset((x, y)) in link_edges(lv):
        return False
    return True


def contract(T: Triangulation, e: int) -> Triangulation:
    """Contract edge e: identify its endpoints and collapse the two
    incident triangles.  Refuses edges failing the link condition."""
    if not is_contractible_edge(T, e):
        raise TriangulationError(f"edge {e} is not contractible")
    m = T.map
    # star normalization: make every edge at u and v untwisted so the
    # rotation splice below is orientation-clean
    u, v = m.endpoints(e)
    flips = []
    d_uv, d_vu = m.edge_darts(e)
    if m.vertex_of(d_uv) != u:
        d_uv, d_vu = d_vu, d_uv
    if m.twist[e]:
        flips.append(v)
        m = m.flipped([v])
    for w0, other in ((u, v), (v, u)):
        for d in m.rotation_at(w0):
            z = m.vertex_of(m.alpha[d])
            if z in (u, v):
                continue
            if m.twist[m.edge_of(d)]:
                m = m.flipped([z])
    if any(m.twist[m.edge_of(d)] for w0 in (u, v) for d in m.rotation_at(w0)):
        raise TriangulationError("cannot normalize the star of the edge")

    rot_u = m.rotation_at(u)
    rot_v = m.rotation_at(v)
    ku = rot_u.index(d_uv)
    kv = rot_v.index(d_vu)
    rot_u = rot_u[ku:] + rot_u[:ku]   # starts with d(u->v)
    rot_v = rot_v[kv:] + rot_v[:kv]   # starts with d(v->u)
    # neighbors x (before v at u) and y (after v at u)
    d_ux = rot_u[-1]
    d_uy = rot_u[1]
    d_vx = rot_v[1]
    d_vy = rot_v[-1]
    x = m.vertex_of(m.alpha[d_ux])
    y = m.vertex_of(m.alpha[d_uy])
    if {m.vertex_of(m.alpha[d_vx]), m.vertex_of(m.alpha[d_vy])} != {x, y}:
        raise TriangulationError("inconsistent corner structure at edge")
    if m.vertex_of(m.alpha[d_vx]) != x:
        d_vx, d_vy = d_vy, d_vx

    # merged rotation: u's rotation with d(u->v) replaced by v's arc from
    # d(v->x)'s successor.. d(v->y)'s predecessor, dropping the duplicate
    # edges vx and vy
    arc_v = rot_v[1:]  # from d_vx around to d_vy
    if arc_v[0] != d_vx or arc_v[-1] != d_vy:
        raise TriangulationError("rotation at v is not in expected order")
    merged = arc_v[1:-1]
    # merged rotation at the identified vertex: d_ux, v-arc interior, then
    # u's remaining darts from d_uy around to just before d_ux
    full = [d_ux] + merged + rot_u[1:-1]

    removed = {d_uv, d_vu, d_vx, m.alpha[d_vx], d_vy, m.alpha[d_vy]}
    keep = [d for d in range(m.n_darts) if d not in removed]
    dart_map = {d: i for i, d in enumerate(keep)}

    new_sigma = [0] * len(keep)
    for w0 in range(m.n_vertices):
        if w0 in (u, v):
            continue
        cyc = [d for d in m.rotation_at(w0) if d not in removed]
        if not cyc:
            raise TriangulationError("contraction removed a vertex")
        for i, d in enumerate(cyc):
            new_sigma[dart_map[d]] = dart_map[cyc[(i + 1) % len(cyc)]]
    cyc = [d for d in full if d not in removed]
    for i, d in enumerate(cyc):
        new_sigma[dart_map[d]] = dart_map[cyc[(i + 1) % len(cyc)]]

    new_alpha = [0] * len(keep)
    for d in keep:
        new_alpha[dart_map[d]] = dart_map[m.alpha[d]]
    m2 = CombinatorialMap(new_sigma, new_alpha, check=False)
    twist = [0] * m2.n_edges
    for d in keep:
        twist[m2.edge_of(dart_map[d])] = m.twist[m.edge_of(d)]
    m2 = CombinatorialMap(new_sigma, new_alpha, twist)
    T2 = validate(m2)
    if T2.surface != T.surface:
        raise TriangulationError("contraction changed the surface")
    return T2


def split_vertex(T: Triangulation, w: int, dart_a: int, dart_b: int) -> Triangulation:
    """Split vertex w along the corners at dart_a and dart_b.

    dart_a and dart_b are darts at w; their far ends x, y become the
    apexes of the two new triangles.  The darts strictly between dart_a
    and dart_b (counterclockwise) move to the new vertex, which is also
    joined to x, y and w.  Inverse of contract.
    """
    m = T.map
    if m.vertex_of(dart_a) != w or m.vertex_of(dart_b) != w or dart_a == dart_b:
        raise TriangulationError("corner spec must name two darts at the vertex")
    x = m.vertex_of(m.alpha[dart_a])
    y = m.vertex_of(m.alpha[dart_b])
    if x == y:
        raise TriangulationError("corner spec arcs share three neighbors")
    rot = m.rotation_at(w)
    ka = rot.index(dart_a)
    rot = rot[ka:] + rot[:ka]
    kb = rot.index(dart_b)
    arc_v = rot[1:kb]          # strictly between dart_a and dart_b: moves
    arc_u = rot[kb + 1:]       # strictly between dart_b and dart_a: stays

    n = m.n_darts
    # new darts: 6 of them
    d_uv, d_vu = n, n + 1
    d_vx, d_xv = n + 2, n + 3
    d_vy, d_yv = n + 4, n + 5
    sigma = list(m.sigma) + [0] * 6
    alpha = list(m.alpha) + [0] * 6
    alpha[d_uv], alpha[d_vu] = d_vu, d_uv
    alpha[d_vx], alpha[d_xv] = d_xv, d_vx
    alpha[d_vy], alpha[d_yv] = d_yv, d_vy

    def set_cycle(cyc):
        for i, d in enumerate(cyc):
            sigma[d] = cyc[(i + 1) % len(cyc)]

    # u keeps dart_a, dart_b and arc_u, with the new edge between them
    set_cycle([dart_a, d_uv, dart_b] + arc_u)
    # the new vertex v
    set_cycle([d_vy, d_vu, d_vx] + arc_v)
    # x gains d_xv right before alpha(dart_a) in its rotation
    for (host, new_d, anchor) in ((x, d_xv, m.alpha[dart_a]),
                                  (y, d_yv, m.alpha[dart_b])):
        cyc = m.rotation_at(host)
        k = cyc.index(anchor)
        if host == x:
            cyc = cyc[:k] + [new_d] + cyc[k:]
        else:
            cyc = cyc[:k + 1] + [new_d] + cyc[k + 1:]
        set_cycle(cyc)
    m2 = CombinatorialMap(sigma, alpha, check=False)
    twist = [0] * m2.n_edges
    for d in range(n):
        twist[m2.edge_of(d)] = m.twist[m.edge_of(d)]
    m2 = CombinatorialMap(sigma, alpha, twist)
    T2 = validate(m2)
    if T2.surface != T.surface:
        raise TriangulationError("split changed the surface")
    return T2


def splittable_corners(T: Triangulation, w: int):
    """All (dart_a, dart_b) pairs giving a valid split at w."""
    m = T.map
    rot = m.rotation_at(w)
    out = []
    for dart_a, dart_b in itertools.permutations(rot, 2):
        x = m.vertex_of(m.alpha[dart_a])
        y = m.vertex_of(m.alpha[dart_b])
        if x != y:
            out.append((dart_a, dart_b))
    return out


# ----------------------------------------------------------------------
# widths


def edge_width(T: Triangulation) -> int:
    """Length of the shortest non-contractible closed walk."""
    _, weight = homotopy.shortest_noncontractible_cycle(T.map)
    return weight


def face_width(m_or_T) -> int:
    """Length of the shortest non-contractible noose."""
    walk, weight = shortest_noncontractible_noose(m_or_T)
    return weight


def shortest_noncontractible_noose(m_or_T):
    """Shortest noose as a radial closed walk; returns (walk, length).

    The noose alternates vertex and face nodes of the radial map; its
    length is the number of vertex nodes, i.e. half its radial length.
    """
    m = m_or_T.map if isinstance(m_or_T, Triangulation) else m_or_T
    radial, meta = m.radial_with_data()
    walk, weight = homotopy.shortest_noncontractible_cycle(radial)
    if weight % 2 != 0:
        raise MapError("radial cycle of odd length; radial map is broken")
    return walk, weight // 2


# ----------------------------------------------------------------------
# k-irreducibility


@dataclass
class KIrreducibilityCertificate:
    k: int
    passed: bool
    reason: str
    systole_walk: Optional[list] = None          # radial walk
    measured_face_width: Optional[int] = None
    per_edge_witness: dict = field(default_factory=dict)  # edge -> radial walk
    failing_edge: Optional[int] = None

    def __bool__(self):
        return self.passed


def _edge_corridors(m: CombinatorialMap, e: int):
    """Forced radial middles u -> face -> v through the two triangles at
    edge e = (u, v): dart paths in the radial map."""
    radial, meta = m.radial_with_data()
    d, dd = m.edge_darts(e)
    fos = m.face_of_state()
    corridors = []
    for dart in (d, dd):
        f = fos[2 * dart]
        u = m.vertex_of(dart)
        v = m.vertex_of(m.alpha[dart])
        fn = meta["face_node"][f]
        un = meta["vertex_node"][u]
        vn = meta["vertex_node"][v]
        # radial darts: from u-node into f-node, then f-node to v-node,
        # using corners of face f at u and at v
        darts_u = [rd for rd in radial.rotation_at(un)
                   if radial.vertex_of(radial.alpha[rd]) == fn]
        darts_v = [rd for rd in radial.rotation_at(fn)
                   if radial.vertex_of(radial.alpha[rd]) == vn]
        for ru in darts_u:
            for rv in darts_v:
                corridors.append([ru, rv])
    return radial, corridors


def certify_k_irreducible(T: Triangulation, k: int) -> KIrreducibilityCertificate:
    """Check systole == k and that every edge lies on a length-k noose
    crossing its endpoints consecutively."""
    m = T.map
    if T.surface.is_sphere:
        return KIrreducibilityCertificate(
            k=k, passed=False, reason="sphere has no non-contractible curves")
    walk, fw = shortest_noncontractible_noose(m)
    cert = KIrreducibilityCertificate(k=k, passed=False, reason="",
                                      systole_walk=walk,
                                      measured_face_width=fw)
    if fw != k:
        cert.reason = f"face-width is {fw}, not {k}"
        return cert
    radial, _ = m.radial_with_data()
    for e in range(m.n_edges):
        best = None
        _, corridors = _edge_corridors(m, e)
        for middle in corridors:
            try:
                w, weight = homotopy.shortest_noncontractible_cycle(
                    radial, constraint=("forced_middle", middle))
            except ValueError:
                continue
            if weight % 2 != 0:
                raise MapError("odd noose length")
            length = weight // 2
            if best is None or length < best[0]:
                best = (length, w)
        if best is None or best[0] != k:
            cert.reason = (f"edge {e}: best noose through its endpoints has "
                           f"length {None if best is None else best[0]}")
            cert.failing_edge = e
            return cert
        cert.per_edge_witness[e] = best[1]
    cert.passed = True
    cert.reason = "ok"
    return cert


def minimal_width_subgraph(T: Triangulation, k: int) -> CombinatorialMap:
    """Greedy edge-minimal spanning subgraph keeping every
    non-contractible noose at length >= k.

    Deletes edges in ascending order; a deletion is kept when the map
    stays cellular on the same surface and the face-width stays >= k.
    A single ascending pass reaches the fixpoint because face-width is
    monotone under edge deletion.
    """
    if face_width(T) < k:
        raise ValueError("face-width below k already")
    m = T.map
    # track original edge ids through deletions via darts
    label = list(range(m.n_edges))
    changed = True
    e = 0
    while e < m.n_edges:
        d, dd = m.edge_darts(e)
        fos = m.face_of_state()
        if fos[2 * d] == fos[2 * dd]:
            e += 1
            continue  # deletion would break cellularity
        if m.degree(m.vertex_of(d)) <= 1 or m.degree(m.vertex_of(dd)) <= 1:
            e += 1
            continue
        m2, dart_map = m.delete_edge(e)
        if not m2.is_connected:
            e += 1
            continue
        if m2.classify() != T.surface:
            e += 1
            continue
        if face_width(m2) >= k:
            new_label = [0] * m2.n_edges
            for d0 in range(m.n_darts):
                nd = dart_map[d0]
                if nd != -1:
                    new_label[m2.edge_of(nd)] = label[m.edge_of(d0)]
            label = new_label
            m = m2
        else:
            e += 1
    m._extra["edge_origin"] = label
    return m


# ----------------------------------------------------------------------
# generators


def gen_tetrahedron() -> Triangulation:
    return validate(_tetra_map())


def gen_grid_torus(p: int, q: int) -> Triangulation:
    """Diagonally triangulated p x q torus grid (p, q >= 3).

    Vertices are (i, j) on Z_p x Z_q with edges east, north and
    north-east; all faces are triangles and the rotation at every vertex
    is the cyclic order E, NE, N, W, SW, S.
    """
    if p < 3 or q < 3:
        raise ValueError("grid torus needs p, q >= 3")
    triangles = []
    for i in range(p):
        for j in range(q):
            a = (i, j)
            b = ((i + 1) % p, j)
            c = ((i + 1) % p, (j + 1) % q)
            d = (i, (j + 1) % q)
            triangles.append((a, b, c))
            triangles.append((a, c, d))
    idx = {(i, j): i * q + j for i in range(p) for j in range(q)}
    tri_idx = [(idx[a], idx[b], idx[c]) for a, b, c in triangles]
    return validate(map_from_triangles(tri_idx))


def connected_sum(T1: Triangulation, f1: int, T2: Triangulation,
                  f2: int) -> Triangulation:
    """Glue T1 and T2 along the boundary of one removed triangle each.

    The faces f1 and f2 must have three distinct corners; the gluing
    identifies their boundary triangles vertex-for-vertex.
    """
    m1, m2 = T1.map, T2.map

    def face_triple(m, f):
        walk = m.face_orbits()[f]
        verts = [m.vertex_of(x >> 1) for x in walk]
        if len(set(verts)) != 3:
            raise TriangulationError("face has repeated corners")
        return verts

    v1 = face_triple(m1, f1)
    v2 = face_triple(m2, f2)
    tris1 = _remove_one(_triangle_list(m1), v1)
    tris2 = _remove_one(_triangle_list(m2), v2)
    off = m1.n_vertices
    ident = {v2[i] + off: v1[2 - i] for i in range(3)}
    # orientation: glue reversed so the boundaries match up

    def relab(t):
        out = []
        for v in t:
            vv = v + off
            out.append(ident.get(vv, vv))
        return tuple(out)

    tris = [tuple(t) for t in tris1] + [relab(t) for t in tris2]
    # compress vertex ids
    used = sorted({v for t in tris for v in t})
    comp = {v: i for i, v in enumerate(used)}
    tris = [tuple(comp[v] for v in t) for t in tris]
    return validate(map_from_triangles(tris))


def _triangle_list(m: CombinatorialMap):
    out = []
    for walk in m.face_orbits():
        verts = tuple(m.vertex_of(x >> 1) for x in walk)
        out.append(verts)
    return out


def _remove_one(tris, triple):
    out = []
    removed = False
    for t in tris:
        if not removed and set(t) == set(triple):
            removed = True
            continue
        out.append(t)
    if not removed:
        raise TriangulationError("face to remove not found")
    return out


def gen_genus_sum(k: int, g: int) -> Triangulation:
    """Genus-g triangulation built from g grid tori of size k x k joined
    by connected sums.  The achieved face-width is whatever it is; use
    face_width to measure it (sums have short nooses around the necks).
    """
    if k < 3 or g < 1:
        raise ValueError("need k >= 3 and g >= 1")
    acc = gen_grid_torus(k, k)
    for _ in range(g - 1):
        nxt = gen_grid_torus(k, k)
        # pick far-apart faces deterministically
        f_acc = acc.map.n_faces - 1
        f_nxt = 0
        acc = connected_sum(acc, f_acc, nxt, f_nxt)
    return acc
