"""Graphs embedded on closed surfaces, encoded by dart permutations.

A map is a triple (sigma, alpha, twist): sigma is the counterclockwise
rotation of darts around each vertex, alpha is the fixed-point-free
involution pairing the two darts of each edge, and twist marks the edges
whose gluing reverses the local orientation.  With all twists zero this is
the classical rotation-system encoding of a graph on an orientable
surface; twisted edges extend it to non-orientable surfaces.

Vertices are the orbits of sigma and edges the orbits of alpha.  Faces are
the orbits of sigma∘alpha when no edge is twisted; in general they are
traced on (dart, side) states so that twisted edges flip the side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class MapError(ValueError):
    """Raised for structurally invalid maps or rotation specs."""


class DisconnectedMapError(MapError):
    """Raised when a topological operation receives a disconnected map."""


class SphereInputError(ValueError):
    """Raised when an operation needs a non-contractible cycle but the
    surface is a sphere."""


@dataclass(frozen=True)
class SurfaceClass:
    """Topological type of a closed surface.

    genus is the orientable genus when orientable, otherwise the
    non-orientable genus (number of cross-caps).
    """

    orientable: bool
    genus: int
    euler_characteristic: int

    def __post_init__(self):
        expected = 2 - 2 * self.genus if self.orientable else 2 - self.genus
        if expected != self.euler_characteristic:
            raise ValueError(
                f"inconsistent surface class: orientable={self.orientable} "
                f"genus={self.genus} chi={self.euler_characteristic}"
            )

    @property
    def is_sphere(self) -> bool:
        return self.orientable and self.genus == 0

    def __str__(self):
        kind = "orientable" if self.orientable else "non-orientable"
        return f"{kind} genus {self.genus} (chi={self.euler_characteristic})"


def _inverse_perm(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return inv


def _orbits(perm: Sequence[int]) -> list[list[int]]:
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(cyc)
    return out


class CombinatorialMap:
    """Immutable graph-on-surface given by dart permutations.

    Darts are 0..2E-1.  ``twist[e]`` is 1 on edges glued with a local
    orientation reversal.  Construction validates the permutation
    structure; connectivity is recorded but only enforced by the
    operations that need it.
    """

    __slots__ = (
        "sigma",
        "alpha",
        "twist",
        "edge_labels",
        "_sigma_inv",
        "_vertex_of",
        "_edge_of",
        "_rotations",
        "_edge_darts",
        "_trace_cache",
        "_class_cache",
        "_code_cache",
        "_dual_cache",
        "_radial_cache",
        "_extra",
    )

    def __init__(self, sigma, alpha, twist=None, edge_labels=None, check=True):
        sigma = list(sigma)
        alpha = list(alpha)
        n = len(sigma)
        if check:
            if len(alpha) != n:
                raise MapError("sigma and alpha must act on the same darts")
            if sorted(sigma) != list(range(n)) or sorted(alpha) != list(range(n)):
                raise MapError("sigma and alpha must be permutations of 0..n-1")
            for d in range(n):
                if alpha[d] == d:
                    raise MapError(f"alpha has a fixed point at dart {d}")
                if alpha[alpha[d]] != d:
                    raise MapError("alpha is not an involution")
            if n % 2 != 0:
                raise MapError("odd number of darts")
        self.sigma = sigma
        self.alpha = alpha
        self._sigma_inv = _inverse_perm(sigma)

        # vertex and edge indices
        rotations = _orbits(sigma)
        rotations.sort(key=lambda c: c[0])
        self._rotations = rotations
        self._vertex_of = [0] * n
        for v, cyc in enumerate(rotations):
            for d in cyc:
                self._vertex_of[d] = v
        edge_darts = []
        self._edge_of = [0] * n
        for d in range(n):
            if d < alpha[d]:
                self._edge_of[d] = self._edge_of[alpha[d]] = len(edge_darts)
                edge_darts.append((d, alpha[d]))
        self._edge_darts = edge_darts

        if twist is None:
            twist = [0] * len(edge_darts)
        else:
            twist = [1 if t else 0 for t in twist]
            if check and len(twist) != len(edge_darts):
                raise MapError("twist must have one bit per edge")
        self.twist = twist
        self.edge_labels = list(edge_labels) if edge_labels is not None else None
        self._trace_cache = None
        self._class_cache = None
        self._code_cache = None
        self._dual_cache = None
        self._radial_cache = None
        self._extra = {}

    # ------------------------------------------------------------------
    # basic counts and accessors

    @property
    def n_darts(self) -> int:
        return len(self.sigma)

    @property
    def n_edges(self) -> int:
        return len(self._edge_darts)

    @property
    def n_vertices(self) -> int:
        return len(self._rotations)

    @property
    def n_faces(self) -> int:
        return len(self.face_orbits())

    def vertex_of(self, d: int) -> int:
        return self._vertex_of[d]

    def edge_of(self, d: int) -> int:
        return self._edge_of[d]

    def edge_darts(self, e: int) -> tuple[int, int]:
        return self._edge_darts[e]

    def rotations(self) -> list[list[int]]:
        """Counterclockwise dart cycle at each vertex (min dart first)."""
        return [list(c) for c in self._rotations]

    def rotation_at(self, v: int) -> list[int]:
        return list(self._rotations[v])

    def degree(self, v: int) -> int:
        return len(self._rotations[v])

    def other_end(self, d: int) -> int:
        """Vertex at the far end of the edge containing dart d."""
        return self._vertex_of[self.alpha[d]]

    def is_loop(self, e: int) -> bool:
        d, dd = self._edge_darts[e]
        return self._vertex_of[d] == self._vertex_of[dd]

    def endpoints(self, e: int) -> tuple[int, int]:
        d, dd = self._edge_darts[e]
        return self._vertex_of[d], self._vertex_of[dd]

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def is_connected(self) -> bool:
        if self.n_darts == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for nxt in (self.sigma[d], self.alpha[d]):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == self.n_darts

    # ------------------------------------------------------------------
    # face tracing on (dart, side) states

    def _state_next(self, state: int) -> int:
        """One step of the facial walk on states 2*dart+side."""
        d, s = state >> 1, state & 1
        d1 = self.alpha[d]
        s1 = s ^ self.twist[self._edge_of[d]]
        nd = self.sigma[d1] if s1 == 0 else self._sigma_inv[d1]
        return (nd << 1) | s1

    def _state_reverse(self, state: int) -> int:
        """State of the reversed traversal passing the same edge side."""
        d, s = state >> 1, state & 1
        return (self.alpha[d] << 1) | (s ^ 1 ^ self.twist[self._edge_of[d]])

    def _trace(self):
        """Compute face orbits on states and their reversal pairing.

        Returns (chosen, orbit_of_state, orbits) where orbits is the list
        of all directed traversals and chosen[i] is True for exactly one
        orbit out of each mutually-reversed pair (the one containing the
        smallest state under (side, dart) order).
        """
        if self._trace_cache is not None:
            return self._trace_cache
        n2 = 2 * self.n_darts
        orbit_of_state = [-1] * n2
        orbits = []
        for start in range(n2):
            if orbit_of_state[start] != -1:
                continue
            cyc = []
            x = start
            while orbit_of_state[x] == -1:
                orbit_of_state[x] = len(orbits)
                cyc.append(x)
                x = self._state_next(x)
            orbits.append(cyc)

        def statekey(x):
            return ((x & 1), x >> 1)

        chosen = [False] * len(orbits)
        done = [False] * len(orbits)
        for i, cyc in enumerate(orbits):
            if done[i]:
                continue
            x = cyc[0]
            rx = self._state_reverse(x)
            j = orbit_of_state[rx]
            if j == i:
                raise MapError("self-reversed facial walk; invalid gluing")
            done[i] = done[j] = True
            ki = min(statekey(x) for x in orbits[i])
            kj = min(statekey(x) for x in orbits[j])
            chosen[i if ki < kj else j] = True
        self._trace_cache = (chosen, orbit_of_state, orbits)
        return self._trace_cache

    def face_orbits(self) -> list[list[int]]:
        """Chosen facial traversals, as state lists, one per face."""
        chosen, _, orbits = self._trace()
        faces = [orbits[i] for i in range(len(orbits)) if chosen[i]]
        # rotate each to start at its minimal state, deterministic order
        out = []
        for cyc in faces:
            k = min(range(len(cyc)), key=lambda i: ((cyc[i] & 1), cyc[i] >> 1))
            out.append(cyc[k:] + cyc[:k])
        out.sort(key=lambda c: ((c[0] & 1), c[0] >> 1))
        return out

    def faces(self) -> list[list[int]]:
        """Facial walks as dart sequences.

        On untwisted maps these are exactly the orbits of sigma∘alpha and
        each dart appears in exactly one walk.  A walk may repeat a dart
        (once per side) when twisted edges are present.
        """
        return [[x >> 1 for x in cyc] for cyc in self.face_orbits()]

    def face_of_state(self) -> list[int]:
        """Face index of every (dart, side) state, under face_orbits order."""
        chosen, orbit_of_state, orbits = self._trace()
        face_index = {}
        for fi, cyc in enumerate(self.face_orbits()):
            face_index[orbit_of_state[cyc[0]]] = fi
        n2 = 2 * self.n_darts
        out = [0] * n2
        for x in range(n2):
            i = orbit_of_state[x]
            if i in face_index:
                out[x] = face_index[i]
            else:
                out[x] = face_index[orbit_of_state[self._state_reverse(x)]]
        return out

    def face_degrees(self) -> list[int]:
        return [len(c) for c in self.face_orbits()]

    # ------------------------------------------------------------------
    # classification

    def classify(self) -> SurfaceClass:
        if self._class_cache is not None:
            return self._class_cache
        if not self.is_connected:
            raise DisconnectedMapError("classify needs a connected map")
        orientable = self._orientation_sides() is not None
        chi = self.euler_characteristic
        genus = (2 - chi) // 2 if orientable else 2 - chi
        self._class_cache = SurfaceClass(orientable, genus, chi)
        return self._class_cache

    def _orientation_sides(self) -> Optional[list[int]]:
        """Per-vertex side bits removing all twists, or None if impossible."""
        side = [-1] * self.n_vertices
        for root in range(self.n_vertices):
            if side[root] != -1:
                continue
            side[root] = 0
            stack = [root]
            while stack:
                v = stack.pop()
                for d in self._rotations[v]:
                    e = self._edge_of[d]
                    w = self._vertex_of[self.alpha[d]]
                    if w == v:
                        if self.twist[e]:
                            return None
                        continue
                    want = side[v] ^ self.twist[e]
                    if side[w] == -1:
                        side[w] = want
                        stack.append(w)
                    elif side[w] != want:
                        return None
        return side

    def flipped(self, vertices: Iterable[int]) -> "CombinatorialMap":
        """Reverse the rotation at the given vertices, toggling the twist
        of their non-loop edges.  Represents the same embedded surface."""
        flip = set(vertices)
        sigma = list(self.sigma)
        for v in flip:
            cyc = self._rotations[v]
            for i, d in enumerate(cyc):
                sigma[d] = cyc[i - 1]
        twist = list(self.twist)
        for e, (d, dd) in enumerate(self._edge_darts):
            u, w = self._vertex_of[d], self._vertex_of[dd]
            if u == w:
                continue
            if (u in flip) ^ (w in flip):
                twist[e] ^= 1
        return CombinatorialMap(sigma, list(self.alpha), twist,
                                edge_labels=self.edge_labels, check=False)

    def oriented_form(self) -> "CombinatorialMap":
        """Equivalent all-positive-twist map (orientable maps only)."""
        side = self._orientation_sides()
        if side is None:
            raise MapError("map is not orientable")
        return self.flipped([v for v in range(self.n_vertices) if side[v]])

    # ------------------------------------------------------------------
    # derived maps

    def dual_with_data(self):
        """Dual map together with the state correspondence.

        Returns (dual, state_of_dual_dart, dual_dart_of_state) where dual
        darts are indexed 0..2E-1, state_of_dual_dart[d*] is the chosen
        (dart, side) state realizing that edge side, and
        dual_dart_of_state inverts it (on chosen states only; a
        non-chosen state maps to the dual dart of its reversal partner).
        """
        if self._dual_cache is not None:
            return self._dual_cache
        if not self.is_connected:
            raise DisconnectedMapError("dual needs a connected map")
        faces = self.face_orbits()
        state_of_dual_dart = []
        dual_vertex_rotation = []
        for cyc in faces:
            rot = []
            for x in cyc:
                rot.append(len(state_of_dual_dart))
                state_of_dual_dart.append(x)
            dual_vertex_rotation.append(rot)
        dd_of_state = {x: i for i, x in enumerate(state_of_dual_dart)}

        n = len(state_of_dual_dart)
        sigma = [0] * n
        for rot in dual_vertex_rotation:
            for i, dd in enumerate(rot):
                sigma[dd] = rot[(i + 1) % len(rot)]
        # pair the two chosen states of each edge
        by_edge = {}
        alpha = [0] * n
        twist = [0] * self.n_edges
        for dd, x in enumerate(state_of_dual_dart):
            e = self._edge_of[x >> 1]
            if e in by_edge:
                d1 = by_edge.pop(e)
                alpha[d1] = dd
                alpha[dd] = d1
                x1 = state_of_dual_dart[d1]
                # untwisted iff the two traversals pass the edge in
                # opposite directions (side transported across the band)
                opposite = ((x >> 1) == self.alpha[x1 >> 1]
                            and (x & 1) == ((x1 & 1) ^ self.twist[e]))
                twist[e] = 0 if opposite else 1
            else:
                by_edge[e] = dd
        if by_edge:
            raise MapError("edge traversed other than twice by chosen faces")
        # dual edge ids follow min dual dart; re-spread twist accordingly
        dual = CombinatorialMap(sigma, alpha, twist=None, check=False)
        dtw = [0] * dual.n_edges
        for dd in range(n):
            e = self._edge_of[state_of_dual_dart[dd] >> 1]
            dtw[dual.edge_of(dd)] = twist[e]
        dual = CombinatorialMap(sigma, alpha, dtw, check=False)
        dual_dart_of_state = {}
        for x in range(2 * self.n_darts):
            if x in dd_of_state:
                dual_dart_of_state[x] = dd_of_state[x]
            else:
                dual_dart_of_state[x] = dd_of_state[self._state_reverse(x)]
        self._dual_cache = (dual, state_of_dual_dart, dual_dart_of_state)
        return self._dual_cache

    def dual(self) -> "CombinatorialMap":
        return self.dual_with_data()[0]

    def radial_with_data(self):
        """Radial map: one node per vertex and per face, one edge per
        corner.  Returns (radial, meta) where meta maps the structure
        back to this map:

        meta["vertex_node"][v], meta["face_node"][f]: radial vertex ids;
        meta["corner_edge"][corner_dart]: radial edge id for the corner
        between dart d and sigma(d);
        meta["edge_state"][radial edge id]: the chosen state consuming it.
        """
        if self._radial_cache is not None:
            return self._radial_cache
        if not self.is_connected:
            raise DisconnectedMapError("radial needs a connected map")
        faces = self.face_orbits()
        nv = self.n_vertices

        # one radial edge per traversal step; darts 2*i (face side) and
        # 2*i+1 (vertex side)
        step_corner = []
        step_twist = []
        face_rots = []
        corner_step = {}
        for cyc in faces:
            rot = []
            for x in cyc:
                d, s = x >> 1, x & 1
                s1 = s ^ self.twist[self._edge_of[d]]
                d1 = self.alpha[d]
                corner = d1 if s1 == 0 else self._sigma_inv[d1]
                i = len(step_corner)
                step_corner.append(corner)
                step_twist.append(s1)
                corner_step[corner] = i
                rot.append(2 * i)
            # sigma∘alpha traversals run clockwise around the face, so the
            # counterclockwise spoke order at the face node is the reverse
            rot.reverse()
            face_rots.append(rot)
        if len(corner_step) != self.n_darts:
            raise MapError("corner coverage failed in radial construction")

        rotations = []
        for rot in face_rots:
            rotations.append(rot)
        for v in range(nv):
            rotations.append([2 * corner_step[d] + 1 for d in self._rotations[v]])

        n = 2 * len(step_corner)
        sigma = [0] * n
        for rot in rotations:
            for i, dd in enumerate(rot):
                sigma[dd] = rot[(i + 1) % len(rot)]
        alpha = [0] * n
        for i in range(len(step_corner)):
            alpha[2 * i] = 2 * i + 1
            alpha[2 * i + 1] = 2 * i
        radial = CombinatorialMap(sigma, alpha, check=False)
        twist = [0] * radial.n_edges
        for i in range(len(step_corner)):
            twist[radial.edge_of(2 * i)] = step_twist[i]
        radial = CombinatorialMap(sigma, alpha, twist, check=False)

        face_node = [radial.vertex_of(rot[0]) for rot in face_rots]
        vertex_node = [radial.vertex_of(2 * corner_step[self._rotations[v][0]] + 1)
                       for v in range(nv)]
        if len(set(face_node) | set(vertex_node)) != radial.n_vertices:
            raise MapError("radial node identification failed")
        flat_states = [x for cyc in faces for x in cyc]
        meta = {
            "face_node": face_node,
            "vertex_node": vertex_node,
            "corner_edge": {c: radial.edge_of(2 * i) for c, i in corner_step.items()},
            "edge_state": {radial.edge_of(2 * i): flat_states[i]
                           for i in range(len(step_corner))},
            "n_face_nodes": len(faces),
        }
        self._radial_cache = (radial, meta)
        return self._radial_cache

    def radial(self) -> "CombinatorialMap":
        return self.radial_with_data()[0]

    def medial_with_data(self):
        """Medial map (4-regular, one vertex per edge of this map).

        Built as the dual of the radial map.  Returns (medial, meta) with
        meta["medial_vertex_of_edge"][e] giving the medial vertex lying on
        edge e, and meta["radial"] the underlying radial pair.
        """
        radial, rmeta = self.radial_with_data()
        medial, state_of_dd, dd_of_state = radial.dual_with_data()
        # medial vertices = radial faces; radial face containing edge e's
        # quadrilateral: locate via any corner of e
        medial_vertex_of_edge = [-1] * self.n_edges
        rad_face_of_state = radial.face_of_state()
        for e in range(self.n_edges):
            d, _ = self._edge_darts[e]
            redge = rmeta["corner_edge"][d]
            rd, _ = radial.edge_darts(redge)
            f = rad_face_of_state[2 * rd]
            # medial vertex index for radial face f: medial vertices are the
            # chosen radial face orbits in order
            medial_vertex_of_edge[e] = f
        meta = {
            "medial_vertex_of_edge": medial_vertex_of_edge,
            "radial": (radial, rmeta),
            "state_of_medial_dart": state_of_dd,
        }
        return medial, meta

    def medial(self) -> "CombinatorialMap":
        return self.medial_with_data()[0]

    # ------------------------------------------------------------------
    # surgery

    def delete_edge(self, e: int):
        """Remove edge e.  Returns (map, dart_map) where dart_map sends old
        darts to new ones (-1 for the removed pair)."""
        d0, d1 = self._edge_darts[e]
        keep = [d for d in range(self.n_darts) if d not in (d0, d1)]
        dart_map = {}
        for i, d in enumerate(keep):
            dart_map[d] = i
        new_sigma = [0] * len(keep)
        for cyc in self._rotations:
            rest = [d for d in cyc if d not in (d0, d1)]
            if not rest:
                raise MapError("deleting edge would remove a vertex")
            for i, d in enumerate(rest):
                new_sigma[dart_map[d]] = dart_map[rest[(i + 1) % len(rest)]]
        new_alpha = [0] * len(keep)
        for d in keep:
            new_alpha[dart_map[d]] = dart_map[self.alpha[d]]
        m = CombinatorialMap(new_sigma, new_alpha, check=False)
        twist = [0] * m.n_edges
        for d in keep:
            twist[m.edge_of(dart_map[d])] = self.twist[self._edge_of[d]]
        m = CombinatorialMap(new_sigma, new_alpha, twist, check=False)
        full_map = {d: dart_map.get(d, -1) for d in range(self.n_darts)}
        return m, full_map

    def relabeled(self, perm: Sequence[int]) -> "CombinatorialMap":
        """Rename darts by d -> perm[d]."""
        n = self.n_darts
        sigma = [0] * n
        alpha = [0] * n
        for d in range(n):
            sigma[perm[d]] = perm[self.sigma[d]]
            alpha[perm[d]] = perm[self.alpha[d]]
        m = CombinatorialMap(sigma, alpha, check=False)
        twist = [0] * m.n_edges
        for d in range(n):
            twist[m.edge_of(perm[d])] = self.twist[self._edge_of[d]]
        return CombinatorialMap(sigma, alpha, twist, check=False)

    # ------------------------------------------------------------------
    # canonical form

    def _bfs_code(self, start_d: int, start_s: int):
        """Deterministic rooted traversal code from (start dart, side)."""
        label = {}
        side = {}
        order = []
        v0 = self._vertex_of[start_d]
        side[v0] = start_s
        entry = {v0: start_d}
        queue = [v0]
        qi = 0
        # label all darts of a vertex when it is discovered
        def label_vertex(v, entry_dart):
            cyc = self._rotations[v]
            k = cyc.index(entry_dart)
            n = len(cyc)
            if side[v] == 0:
                ordered = [cyc[(k + i) % n] for i in range(n)]
            else:
                ordered = [cyc[(k - i) % n] for i in range(n)]
            base = len(label)
            for i, d in enumerate(ordered):
                label[d] = base + i
            return ordered

        ordered0 = label_vertex(v0, start_d)
        rot_lists = {v0: ordered0}
        code = [len(ordered0)]
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for d in rot_lists[v]:
                dd = self.alpha[d]
                w = self._vertex_of[dd]
                s_arr = side[v] ^ self.twist[self._edge_of[d]]
                if w not in side:
                    side[w] = s_arr
                    entry[w] = dd
                    rot_lists[w] = label_vertex(w, dd)
                    queue.append(w)
                    code.append(-1 - len(rot_lists[w]))
                else:
                    code.append(2 * label[dd] + (s_arr ^ side[w]))
        if len(label) != self.n_darts:
            raise DisconnectedMapError("canonical code needs a connected map")
        return tuple(code), label

    def canonical_code(self) -> bytes:
        """Isomorphism invariant of the embedded surface (both local
        orientations are tried, so mirror images get equal codes)."""
        if self._code_cache is not None:
            return self._code_cache
        best = None
        for start_d in range(self.n_darts):
            for start_s in (0, 1):
                code, _ = self._bfs_code(start_d, start_s)
                if best is None or code < best:
                    best = code
        payload = repr((self.n_darts, best)).encode()
        self._code_cache = payload
        return payload

    def canonical_relabeling(self) -> list[int]:
        """Dart permutation realizing the canonical code."""
        best = None
        best_label = None
        for start_d in range(self.n_darts):
            for start_s in (0, 1):
                code, label = self._bfs_code(start_d, start_s)
                if best is None or code < best:
                    best = code
                    best_label = label
        return [best_label[d] for d in range(self.n_darts)]

    def is_isomorphic(self, other: "CombinatorialMap") -> bool:
        return self.canonical_code() == other.canonical_code()

    def __repr__(self):
        return (f"CombinatorialMap(V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_faces}, darts={self.n_darts})")


# ----------------------------------------------------------------------
# builders


def build_map(rotation_spec, check=True) -> CombinatorialMap:
    """Build a map from per-vertex circular lists of signed edge labels.

    Each label must appear exactly twice across all lists.  A label
    occurring once with each sign gives an ordinary edge; the same sign
    twice marks the edge as twisted (orientation-reversing).

    rotation_spec: iterable of iterables of (label, sign) with sign ±1,
    or of plain strings like "a" / "a-".
    """
    flat = []
    vertex_slices = []
    for rot in rotation_spec:
        start = len(flat)
        for item in rot:
            flat.append(_parse_signed(item))
        vertex_slices.append((start, len(flat)))
        if start == len(flat):
            raise MapError("empty vertex rotation")
    occurrences = {}
    for i, (lab, sign) in enumerate(flat):
        occurrences.setdefault(lab, []).append((i, sign))
    for lab, occ in occurrences.items():
        if len(occ) != 2:
            raise MapError(
                f"edge label {lab!r} appears {len(occ)} time(s); expected 2")

    n = len(flat)
    alpha = [0] * n
    twisted_labels = {}
    for lab, ((i, si), (j, sj)) in occurrences.items():
        alpha[i] = j
        alpha[j] = i
        twisted_labels[lab] = 1 if si == sj else 0
    sigma = [0] * n
    for start, end in vertex_slices:
        for i in range(start, end):
            sigma[i] = start + ((i - start + 1) % (end - start))
    m = CombinatorialMap(sigma, alpha, check=check)
    twist = [0] * m.n_edges
    labels = [None] * m.n_edges
    for lab, ((i, _), (j, _)) in occurrences.items():
        twist[m.edge_of(i)] = twisted_labels[lab]
        labels[m.edge_of(i)] = lab
    return CombinatorialMap(sigma, alpha, twist, edge_labels=labels, check=check)


def _parse_signed(item):
    if isinstance(item, tuple):
        lab, sign = item
        if sign not in (1, -1):
            raise MapError(f"sign must be ±1, got {sign!r}")
        return lab, sign
    s = str(item)
    if s.endswith("-") or s.endswith("⁻"):
        return s[:-1], -1
    return s, 1


def map_from_face_words(words) -> CombinatorialMap:
    """Build a map from polygon gluing words, one word per face.

    Each word is a sequence of signed letters; every letter must occur
    exactly twice in total.  Occurrences with equal signs glue with a
    twist.  The resulting map's faces are exactly the given polygons.
    """
    flat = []
    face_slices = []
    for w in words:
        start = len(flat)
        for item in w:
            flat.append(_parse_signed(item))
        face_slices.append((start, len(flat)))
        if start == len(flat):
            raise MapError("empty face word")
    occ = {}
    for p, (lab, sign) in enumerate(flat):
        occ.setdefault(lab, []).append((p, sign))
    letters = sorted(occ, key=lambda lab: occ[lab][0][0])
    for lab in letters:
        if len(occ[lab]) != 2:
            raise MapError(f"letter {lab!r} must occur exactly twice")

    n = 2 * len(letters)
    dart_index = {lab: 2 * i for i, lab in enumerate(letters)}
    alpha = [0] * n
    for i in range(len(letters)):
        alpha[2 * i] = 2 * i + 1
        alpha[2 * i + 1] = 2 * i
    twist_of_letter = {}
    state_at = {}
    for lab in letters:
        (p, sp), (q, sq) = occ[lab]
        tw = 1 if sp == sq else 0
        twist_of_letter[lab] = tw
        d = dart_index[lab]
        state_at[p] = (d, 0)
        state_at[q] = (d, 1) if tw else (alpha[d], 0)

    sigma = [None] * n
    for start, end in face_slices:
        m = end - start
        for p in range(start, end):
            pn = start + ((p - start + 1) % m)
            d, s = state_at[p]
            lab = flat[p][0]
            s1 = s ^ twist_of_letter[lab]
            d1 = alpha[d]
            dn = state_at[pn][0]
            if s1 == 0:
                if sigma[d1] is not None and sigma[d1] != dn:
                    raise MapError("inconsistent gluing words")
                sigma[d1] = dn
            else:
                if sigma[dn] is not None and sigma[dn] != d1:
                    raise MapError("inconsistent gluing words")
                sigma[dn] = d1
    if any(s is None for s in sigma):
        raise MapError("underdetermined gluing words")
    m = CombinatorialMap(sigma, alpha)
    twist = [0] * m.n_edges
    labels = [None] * m.n_edges
    for lab in letters:
        e = m.edge_of(dart_index[lab])
        twist[e] = twist_of_letter[lab]
        labels[e] = lab
    m = CombinatorialMap(sigma, alpha, twist, edge_labels=labels)
    # the construction promises the input words come back as faces
    got = sorted(len(c) for c in m.face_orbits())
    exp = sorted(end - start for start, end in face_slices)
    if got != exp:
        raise MapError("face words do not close up into the given polygons")
    return m


def map_from_triangles(triangles) -> CombinatorialMap:
    """Build a map from a simplicial triangle list (vertex triples).

    Every edge {u, v} must lie in exactly two triangles.  The gluing is
    the simplicial one, so the result is the embedded surface of the
    complex.
    """
    words = []
    for (a, b, c) in triangles:
        word = []
        for u, v in ((a, b), (b, c), (c, a)):
            if u == v:
                raise MapError("degenerate triangle")
            lab = (min(u, v), max(u, v))
            word.append((lab, 1 if u < v else -1))
        words.append(word)
    return map_from_face_words(words)


# ----------------------------------------------------------------------
# fixtures used across the package and its tests


def tetrahedron() -> CombinatorialMap:
    return map_from_triangles(
        [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])


def torus_bouquet() -> CombinatorialMap:
    """One vertex, rotation (a, b, a-, b-): the torus."""
    return build_map([["a", "b", "a-", "b-"]])


def klein_bottle_map() -> CombinatorialMap:
    """One vertex, rotation (a, b, a, b-): the Klein bottle.

    Note (a, a, b, b-) is not the Klein bottle: the b-loop's two ends are
    adjacent in the rotation, so it bounds a monogon and that map is a
    projective plane with a trivial loop attached.
    """
    return build_map([["a", "b", "a", "b-"]])


def projective_plane_map() -> CombinatorialMap:
    """One vertex, one twisted loop: the projective plane."""
    return build_map([["a", "a"]])


def genus2_one_vertex_map() -> CombinatorialMap:
    """One-vertex one-face map on the genus-2 surface (standard octagon)."""
    return map_from_face_words([["a", "b", "a-", "b-", "c", "d", "c-", "d-"]])


def nonorientable_one_vertex_map(genus: int) -> CombinatorialMap:
    """One-vertex map from the crosscap word a1 a1 a2 a2 ... (genus >= 1)."""
    if genus < 1:
        raise ValueError("non-orientable genus must be >= 1")
    word = []
    for i in range(genus):
        word += [f"a{i}", f"a{i}"]
    return map_from_face_words([word])
