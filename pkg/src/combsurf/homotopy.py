"""Contractibility of closed walks and shortest non-contractible cycles.

Walks are dart sequences: step i travels along dart w[i] and arrives at
the vertex of alpha(w[i]), which must carry w[i+1] (cyclically).

The backend is a cut system: a spanning tree plus labelled chords.  The
chords generate the fundamental group; eliminating a dual spanning tree
of chords leaves 2-chi essential generators and a one-relator polygon
presentation.  Contractibility then splits by surface class: trivial on
the sphere, abelianization on the torus, exponent parity on the
projective plane, Dehn's algorithm on the standard one-relator
presentation for orientable genus >= 2, and lifting to the orientable
double cover otherwise.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .surfmap import (
    CombinatorialMap,
    DisconnectedMapError,
    MapError,
    SphereInputError,
    SurfaceClass,
)

# ----------------------------------------------------------------------
# words: tuples of non-zero ints, letter g in 0..m-1 appears as ±(g+1)


def wreduce(word) -> tuple[int, ...]:
    """Free reduction."""
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def winv(word) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


def wcyc_reduce(word) -> tuple[int, ...]:
    w = list(wreduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _rotations_of(word):
    n = len(word)
    return [tuple(word[i:]) + tuple(word[:i]) for i in range(n)]


# ----------------------------------------------------------------------
# Dehn's algorithm for the standard genus-g relator


class DehnSolver:
    """Word problem for <x1,y1,..,xg,yg | [x1,y1]...[xg,yg]> via Dehn's
    algorithm (valid: the standard relator has pieces of length 1)."""

    def __init__(self, relator: Sequence[int]):
        self.relator = tuple(relator)
        r = self.relator
        self.half = len(r) // 2
        sym = set()
        for w in (r, winv(r)):
            for rot in _rotations_of(w):
                sym.add(rot)
        self.symmetrized = sorted(sym)

    def reduce(self, word) -> tuple[int, ...]:
        """Cyclically reduced Dehn-minimal form (empty iff trivial)."""
        w = list(wcyc_reduce(word))
        rl = len(self.relator)
        if rl == 0:
            return tuple(w)
        changed = True
        while changed and w:
            changed = False
            n = len(w)
            for rot in self.symmetrized:
                # find longest common prefix of rot with w read cyclically
                # from each start
                for start in range(n):
                    k = 0
                    while k < rl and k < n and w[(start + k) % n] == rot[k]:
                        k += 1
                    if 2 * k > rl:
                        # replace rot[:k] by inverse of rot[k:]
                        repl = list(winv(rot[k:]))
                        rest = [w[(start + k + i) % n] for i in range(n - k)]
                        w = list(wcyc_reduce(tuple(rest) + tuple(repl)))
                        changed = True
                        break
                if changed:
                    break
        return tuple(w)

    def is_trivial(self, word) -> bool:
        return len(self.reduce(word)) == 0


# ----------------------------------------------------------------------
# polygon-word normalization to the standard form, with substitutions


def _subst_word(word, table):
    out = []
    for x in word:
        rep = table.get(abs(x))
        if rep is None:
            out.append(x)
        else:
            out.extend(rep if x > 0 else winv(rep))
    return wreduce(out)


def normalize_polygon(word, n_letters):
    """Bring a one-vertex one-face orientable polygon word to the form
    [x1,y1]...[xg,yg] by cut-and-paste, tracking generators.

    word: cyclic word over letters 1..n_letters, each appearing twice with
    opposite signs.  Returns (relator, expr) where expr maps each original
    letter to its word over the final letters 1..2g.

    Each cut-and-paste cuts the polygon along a fresh diagonal (homotopic,
    through the polygon, to the boundary arc it cuts off) and reglues the
    two pieces along an existing letter pair; the regluing makes that
    letter interior, so it acquires an expression over the surviving
    alphabet via the contractible piece boundary.  Euler counting keeps
    every intermediate schema one-vertex, hence cyclically reduced, which
    is what guarantees an interleaved partner always exists.
    """
    w = list(wcyc_reduce(word))
    if len(w) != 2 * n_letters:
        raise MapError("polygon word is not reduced; not a one-vertex schema")
    expr = {g: (g,) for g in range(1, n_letters + 1)}
    next_letter = n_letters + 1
    done = 0  # letters already gathered into leading standard blocks

    def fresh():
        nonlocal next_letter
        next_letter += 1
        return next_letter - 1

    def cutpaste(lin, i, j, glue):
        """Cut lin[i:j] off along a fresh diagonal, reglue along ``glue``."""
        nonlocal expr
        delta = fresh()
        p1 = list(lin[i:j]) + [-delta]
        p2 = [delta] + list(lin[j:]) + list(lin[:i])
        in1 = [x for x in p1 if abs(x) == glue]
        in2 = [x for x in p2 if abs(x) == glue]
        if len(in1) != 1 or len(in2) != 1 or in1[0] != -in2[0]:
            raise MapError("cut does not separate the glue letter pair")
        k1 = next(k for k, x in enumerate(p1) if abs(x) == glue)
        k2 = next(k for k, x in enumerate(p2) if abs(x) == glue)
        p1 = p1[k1:] + p1[:k1]
        p2 = p2[k2:] + p2[:k2]
        neww = p1[1:] + p2[1:]
        # p1 bounds a disk in the new complex: glue^s * tail = 1
        glue_expr = winv(p1[1:]) if p1[0] > 0 else tuple(p1[1:])
        table = {glue: glue_expr}
        expr = {g: _subst_word(v, table) for g, v in expr.items()}
        return neww, delta

    while done < n_letters:
        # invariant: w = [gathered blocks][rest], blocks occupy 2*done slots
        a = abs(w[2 * done])
        blk = w[2 * done:2 * done + 4]
        if (len(blk) == 4 and blk[0] == -blk[2] and blk[1] == -blk[3]
                and abs(blk[1]) != a
                and all(abs(x) not in (abs(blk[0]), abs(blk[1]))
                        for x in w[2 * done + 4:] + w[:2 * done])):
            # already a commutator block: accept without cutting
            if blk[0] < 0:
                w = [-x if abs(x) == a else x for x in w]
                expr = {g: tuple(-x if abs(x) == a else x for x in v)
                        for g, v in expr.items()}
            done += 2
            continue
        ia1, ia2 = [k for k, x in enumerate(w) if abs(x) == a]
        b = None
        for k in range(ia1 + 1, ia2):
            cand = abs(w[k])
            other = next(t for t, x in enumerate(w)
                         if abs(x) == cand and t != k)
            if not (ia1 < other < ia2):
                b = cand
                break
        if b is None:
            raise MapError("no interleaved partner; schema is not one-vertex")
        # rotate a to the front; the gathered blocks become the cyclic tail
        w = w[ia1:] + w[:ia1]
        # sign-normalize so a and the first b occurrence are positive
        for letter in (a, b):
            first = next(x for x in w if abs(x) == letter)
            if first < 0:
                w = [-x if abs(x) == letter else x for x in w]
                expr = {g: tuple(-x if abs(x) == letter else x for x in v)
                        for g, v in expr.items()}
        ia1, ia2 = [k for k, x in enumerate(w) if abs(x) == a]
        # w = a U b V a- X b- Y   (blocks at the end of Y)
        w1, d1 = cutpaste(w, ia1 + 1, ia2, b)
        # w1 ~ a d1 a- X V d1- U Y  (cyclically)
        k = next(t for t, x in enumerate(w1) if x == a)
        w1 = w1[k:] + w1[:k]
        if not (abs(w1[1]) == d1 and w1[2] == -a):
            raise MapError("unexpected shape after first cut-and-paste")
        if w1[1] < 0:
            w1 = [-x if abs(x) == d1 else x for x in w1]
            expr = {g: tuple(-x if abs(x) == d1 else x for x in v)
                    for g, v in expr.items()}
        w2, d2 = cutpaste(w1, 0, 3, d1)
        # w2 ~ a N d2 M a- d2-  (cyclically)
        k = next(t for t, x in enumerate(w2) if x == a)
        w2 = w2[k:] + w2[:k]
        kd2 = next(t for t, x in enumerate(w2) if abs(x) == d2)
        w3, _ = cutpaste(w2, 0, kd2 + 1, a)
        # w3 ~ d2 d3^e d2- d3^-e (M N)  with blocks at the tail
        k = next(t for t, x in enumerate(w3) if x == d2)
        w3 = w3[k:] + w3[:k]
        if not (w3[0] == d2 and w3[2] == -d2 and w3[3] == -w3[1]
                and abs(w3[1]) != d2):
            raise MapError("commutator did not gather")
        if done:
            w = w3[-2 * done:] + w3[:-2 * done]
        else:
            w = list(w3)
        done += 2

    # rename final letters to 1..2g in block order
    rename = {}
    for x in w:
        if abs(x) not in rename:
            rename[abs(x)] = len(rename) + 1

    def ren(v):
        return tuple((1 if x > 0 else -1) * rename[abs(x)] for x in v)

    final = list(ren(w))
    expr = {g: wreduce(ren(v)) for g, v in expr.items()}
    # each block reads (p, ±q, -p, ∓q) with p positive; flip q where needed
    g = n_letters // 2
    for i in range(g):
        blk = final[4 * i:4 * i + 4]
        if not (blk[0] > 0 and blk[2] == -blk[0] and blk[3] == -blk[1]):
            raise MapError("block shape broken")
        if blk[1] < 0:
            letter = -blk[1]
            final = [-x if abs(x) == letter else x for x in final]
            expr = {k: tuple(-x if abs(x) == letter else x for x in v)
                    for k, v in expr.items()}
    std = []
    for i in range(g):
        std += [2 * i + 1, 2 * i + 2, -2 * i - 1, -2 * i - 2]
    if final != std:
        raise MapError(f"normalization did not reach standard form: {final}")
    return tuple(std), expr


# ----------------------------------------------------------------------
# cut systems


@dataclass
class CutSystem:
    """Spanning tree plus labelled chords for a connected map.

    chords[e] is the generator id (1-based) of non-tree edge e, with the
    positive direction along the smaller dart.  essential lists the
    generators surviving cotree elimination; relator is the polygon word
    over them (standard form when normalized).  chord_words translates
    every chord generator into essential/standard letters.
    """

    map: CombinatorialMap
    surface: SurfaceClass
    tree_edges: set
    chords: dict
    essential: tuple
    relator: tuple
    chord_words: dict
    dehn: Optional[DehnSolver] = None
    dart_word: dict = field(default_factory=dict)

    def word_of_walk(self, walk) -> tuple[int, ...]:
        out = []
        for d in walk:
            w = self.dart_word.get(d)
            if w:
                out.extend(w)
        return wreduce(out)


def _spanning_tree(m: CombinatorialMap):
    """Deterministic BFS tree from vertex 0; returns set of tree edge ids."""
    tree = set()
    seen = [False] * m.n_vertices
    seen[0] = True
    queue = [0]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for d in m.rotation_at(v):
            w = m.vertex_of(m.alpha[d])
            if not seen[w]:
                seen[w] = True
                tree.add(m.edge_of(d))
                queue.append(w)
    if not all(seen):
        raise DisconnectedMapError("spanning tree needs a connected map")
    return tree


def build_cut_system(m: CombinatorialMap) -> CutSystem:
    """Tree-cotree decomposition with cotree elimination.

    The relator over the essential generators has length 2*(2-chi) and
    each essential generator appears in it exactly twice.
    """
    surface = m.classify()
    work = m
    if surface.orientable and any(m.twist):
        work = m.oriented_form()  # same darts, consistent signs

    tree = _spanning_tree(work)
    chords = {}
    for e in range(work.n_edges):
        if e not in tree:
            chords[e] = len(chords) + 1
    n_chords = len(chords)

    # letter of a dart (0 when on the tree)
    def letter(d):
        e = work.edge_of(d)
        g = chords.get(e)
        if g is None:
            return 0
        return g if d < work.alpha[d] else -g

    # face relators over chords
    face_orbs = work.face_orbits()
    face_words = []
    for cyc in face_orbs:
        wrd = []
        for x in cyc:
            lt = letter(x >> 1)
            if lt:
                wrd.append(lt)
        face_words.append(tuple(wrd))

    # dual graph on faces via chords
    fos = work.face_of_state()
    sides = {}
    for e, g in chords.items():
        d, dd = work.edge_darts(e)
        sides[g] = (fos[2 * d], fos[2 * dd])
    # BFS dual tree
    nf = len(face_orbs)
    parent_gen = [0] * nf
    seen = [False] * nf
    seen[0] = True
    order = [0]
    qi = 0
    adj = {f: [] for f in range(nf)}
    for g, (f1, f2) in sorted(sides.items()):
        adj[f1].append((g, f2))
        adj[f2].append((g, f1))
    while qi < len(order):
        f = order[qi]
        qi += 1
        for g, f2 in adj[f]:
            if not seen[f2]:
                seen[f2] = True
                parent_gen[f2] = g
                order.append(f2)
    if not all(seen):
        raise MapError("cotree construction failed; dual graph disconnected")

    # eliminate cotree generators, leaves inward
    eliminated = {}
    current = {f: list(face_words[f]) for f in range(nf)}
    for f in reversed(order[1:]):
        g = parent_gen[f]
        wrd = [x for x in current[f]]
        # substitute already-eliminated letters
        wrd = list(_subst_word(wrd, eliminated))
        occ = [k for k, x in enumerate(wrd) if abs(x) == g]
        if len(occ) != 1:
            raise MapError("cotree generator does not occur exactly once")
        k = occ[0]
        rot = wrd[k:] + wrd[:k]
        g_expr = winv(rot[1:]) if rot[0] > 0 else tuple(rot[1:])
        eliminated[g] = g_expr
        f1, f2 = sides[g]
        other = f1 if f2 == f else f2
        current[other] = list(_subst_word(current[other], {g: g_expr}))
        del current[f]
    if len(current) != 1:
        raise MapError("elimination did not merge all faces")
    relator = wcyc_reduce(_subst_word(list(current.values())[0], eliminated))

    essential = tuple(sorted(g for g in chords.values() if g not in eliminated))
    expect = 2 - surface.euler_characteristic
    if len(essential) != expect:
        raise MapError("wrong number of essential generators")
    counts = {}
    for x in relator:
        counts[abs(x)] = counts.get(abs(x), 0) + 1
    if sorted(counts) != list(essential) or any(c != 2 for c in counts.values()):
        if expect:
            raise MapError("relator is not a polygon word")

    # full expansion of every chord into essential letters
    def expand(g, memo):
        if g in memo:
            return memo[g]
        if g not in eliminated:
            memo[g] = (g,)
            return memo[g]
        out = []
        for x in eliminated[g]:
            sub = expand(abs(x), memo)
            out.extend(sub if x > 0 else winv(sub))
        memo[g] = wreduce(out)
        return memo[g]

    memo = {}
    chord_words = {g: expand(g, memo) for g in chords.values()}

    # renumber the surviving generators to 1..k
    ren = {g: i + 1 for i, g in enumerate(essential)}

    def renw(w):
        return tuple((1 if x > 0 else -1) * ren[abs(x)] for x in w)

    relator = renw(relator)
    chord_words = {g: renw(w) for g, w in chord_words.items()}
    essential = tuple(range(1, len(essential) + 1))

    dehn = None
    if surface.orientable and surface.genus >= 2:
        std, std_expr = normalize_polygon(relator, len(essential))
        chord_words = {g: wreduce(_subst_word(w, std_expr))
                       for g, w in chord_words.items()}
        relator = std
        dehn = DehnSolver(std)

    cs = CutSystem(map=m, surface=surface, tree_edges=tree, chords=chords,
                   essential=essential, relator=relator,
                   chord_words=chord_words, dehn=dehn)
    # per-dart words over the final letters
    for e, g in chords.items():
        d, dd = work.edge_darts(e)
        w = chord_words[g]
        cs.dart_word[d] = w
        cs.dart_word[dd] = winv(w)
    return cs


_CUT_CACHE: dict = {}


def cut_system(m: CombinatorialMap) -> CutSystem:
    key = id(m)
    hit = _CUT_CACHE.get(key)
    if hit is not None and hit.map is m:
        return hit
    cs = build_cut_system(m)
    if len(_CUT_CACHE) > 256:
        _CUT_CACHE.clear()
    _CUT_CACHE[key] = cs
    return cs


def crossing_word(walk, cs: CutSystem) -> tuple[int, ...]:
    """Word of a closed walk over the cut system's final generators."""
    check_closed_walk(cs.map, walk)
    return cs.word_of_walk(walk)


def check_closed_walk(m: CombinatorialMap, walk):
    if not walk:
        raise ValueError("empty walk")
    for i, d in enumerate(walk):
        nxt = walk[(i + 1) % len(walk)]
        if m.vertex_of(m.alpha[d]) != m.vertex_of(nxt):
            raise ValueError(f"walk is not closed at step {i}")


def walk_twist_parity(m: CombinatorialMap, walk) -> int:
    """1 if the closed walk reverses orientation, else 0."""
    p = 0
    for d in walk:
        p ^= m.twist[m.edge_of(d)]
    return p


# ----------------------------------------------------------------------
# contractibility


class WalkClassifier:
    """Per-map engine answering 'is this closed walk contractible?'.

    Chooses the backend from the surface class.  Non-orientable maps
    test orientation parity and then defer to the orientable double
    cover via lifted walks.
    """

    def __init__(self, m: CombinatorialMap):
        if not m.is_connected:
            raise DisconnectedMapError("contractibility needs a connected map")
        self.map = m
        self.surface = m.classify()
        self._cover = None
        self.cs = None
        kind = None
        s = self.surface
        if s.is_sphere:
            kind = "sphere"
        elif s.orientable and s.genus == 1:
            kind = "torus"
        elif s.orientable:
            kind = "dehn"
        elif s.genus == 1:
            kind = "projective"
        else:
            kind = "cover"
        self.kind = kind
        if kind in ("torus", "dehn", "projective"):
            self.cs = cut_system(m)
        if kind == "cover":
            from .cover import double_cover
            self._cover = double_cover(m)
            self._cover_classifier = WalkClassifier(self._cover.total)

    # words
    def word_of_walk(self, walk):
        if self.cs is None:
            return ()
        return self.cs.word_of_walk(walk)

    def abelian_of_word(self, word):
        vec = [0] * len(self.cs.essential)
        for x in word:
            vec[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(vec)

    def is_trivial_word(self, word) -> bool:
        if self.kind == "sphere":
            return True
        if self.kind == "torus":
            return all(v == 0 for v in self.abelian_of_word(word))
        if self.kind == "projective":
            # pi_1 = Z/2: trivial iff the exponent sum is even
            return len(word) % 2 == 0
        if self.kind == "dehn":
            return self.cs.dehn.is_trivial(word)
        raise NotImplementedError

    def is_contractible(self, walk) -> bool:
        check_closed_walk(self.map, walk)
        if self.kind == "cover":
            if walk_twist_parity(self.map, walk):
                return False
            lifted = self._cover.lift_closed_walk(walk)
            assert len(lifted) == 2
            return self._cover_classifier.is_contractible(lifted[0])
        return self.is_trivial_word(self.word_of_walk(walk))


_CLS_CACHE: dict = {}


def classifier(m: CombinatorialMap) -> WalkClassifier:
    key = id(m)
    hit = _CLS_CACHE.get(key)
    if hit is not None and hit.map is m:
        return hit
    c = WalkClassifier(m)
    if len(_CLS_CACHE) > 256:
        _CLS_CACHE.clear()
    _CLS_CACHE[key] = c
    return c


def is_contractible(m: CombinatorialMap, walk) -> bool:
    """True iff the closed walk bounds in the surface of the map."""
    return classifier(m).is_contractible(walk)


# ----------------------------------------------------------------------
# shortest non-contractible cycle


def _dijkstra(m: CombinatorialMap, weights, root):
    """Deterministic shortest-path tree; returns (dist, parent_dart)."""
    INF = None
    dist = [INF] * m.n_vertices
    parent = [-1] * m.n_vertices
    dist[root] = 0
    heap = [(0, root)]
    donev = [False] * m.n_vertices
    while heap:
        dv, v = heapq.heappop(heap)
        if donev[v]:
            continue
        donev[v] = True
        for d in m.rotation_at(v):
            w = m.vertex_of(m.alpha[d])
            nd = dv + weights[m.edge_of(d)]
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                parent[w] = d
                heapq.heappush(heap, (nd, w))
    return dist, parent


def _tree_path(m, parent, v):
    """Darts from the root to v along the shortest-path tree."""
    path = []
    while parent[v] != -1:
        d = parent[v]
        path.append(d)
        v = m.vertex_of(d)
    path.reverse()
    return path


def _canonical_rotation(walk):
    n = len(walk)
    best = None
    for i in range(n):
        rot = tuple(walk[i:]) + tuple(walk[:i])
        if best is None or rot < best:
            best = rot
    return best


def shortest_noncontractible_cycle(m: CombinatorialMap, weights=None,
                                   constraint=None):
    """Minimum-weight non-contractible closed walk.

    Searches tree-path + edge + tree-path loops over all roots; ties are
    broken by the lexicographically smallest dart rotation.  constraint is
    None, ("through_vertex", v), or ("forced_middle", dart_path): the
    latter returns the best non-contractible closed walk containing the
    given dart path as a subwalk.
    """
    cls = classifier(m)
    if cls.surface.is_sphere:
        raise SphereInputError("sphere input: every cycle is contractible")
    if weights is None:
        weights = [1] * m.n_edges
    if any(w < 0 for w in weights):
        raise ValueError("negative edge weight")

    if constraint is None:
        roots = range(m.n_vertices)
        return _best_loop(m, cls, weights, roots)
    tag = constraint[0]
    if tag == "through_vertex":
        return _best_loop(m, cls, weights, [constraint[1]])
    if tag == "forced_middle":
        return _best_forced(m, cls, weights, list(constraint[1]))
    raise ValueError(f"unknown constraint {constraint!r}")


def _walk_word_fast(cls: WalkClassifier, darts):
    return cls.word_of_walk(darts)


def _best_loop(m, cls, weights, roots):
    best = None  # (weight, canonical walk)
    for root in roots:
        dist, parent = _dijkstra(m, weights, root)
        pre = [None] * m.n_vertices
        pre[root] = ()

        def prefix(v):
            chain = []
            while pre[v] is None:
                chain.append(v)
                v = m.vertex_of(parent[v])
            acc = pre[v]
            for u in reversed(chain):
                d = parent[u]
                acc = acc + tuple(cls.cs.dart_word.get(d, ()))
                pre[u] = acc
            return acc

        if cls.cs:
            for v in range(m.n_vertices):
                if dist[v] is not None:
                    prefix(v)
        for e in range(m.n_edges):
            d, dd = m.edge_darts(e)
            x, y = m.vertex_of(d), m.vertex_of(dd)
            if dist[x] is None or dist[y] is None:
                continue
            weight = dist[x] + weights[e] + dist[y]
            if best is not None and weight > best[0]:
                continue
            if cls.kind == "cover":
                walk = (_tree_path(m, parent, x) + [d]
                        + [m.alpha[p] for p in reversed(_tree_path(m, parent, y))])
                ok = not cls.is_contractible(walk)
            else:
                word = (pre[x] + tuple(cls.cs.dart_word.get(d, ()))
                        + winv(pre[y])) if cls.cs else ()
                ok = not cls.is_trivial_word(wreduce(word))
                walk = None
            if not ok:
                continue
            if walk is None:
                walk = (_tree_path(m, parent, x) + [d]
                        + [m.alpha[p] for p in reversed(_tree_path(m, parent, y))])
            cand = (weight, _canonical_rotation(walk))
            if best is None or cand < best:
                best = cand
    if best is None:
        raise SphereInputError("no non-contractible cycle found")
    return list(best[1]), best[0]


def _best_forced(m, cls, weights, middle):
    """Best non-contractible closed walk containing the dart path
    ``middle``; closures range over tree-path + edge + tree-path."""
    if not middle:
        raise ValueError("empty forced middle")
    for i in range(len(middle) - 1):
        if m.vertex_of(m.alpha[middle[i]]) != m.vertex_of(middle[i + 1]):
            raise ValueError("forced middle is not a dart path")
    a = m.vertex_of(middle[0])            # walk re-enters here
    b = m.vertex_of(m.alpha[middle[-1]])  # walk continues from here
    wmid = sum(weights[m.edge_of(d)] for d in middle)
    dist_b, par_b = _dijkstra(m, weights, b)
    dist_a, par_a = _dijkstra(m, weights, a)
    best = None
    for e in range(m.n_edges):
        d, dd = m.edge_darts(e)
        for dx in (d, dd):
            x, y = m.vertex_of(dx), m.vertex_of(m.alpha[dx])
            if dist_b[x] is None or dist_a[y] is None:
                continue
            weight = wmid + dist_b[x] + weights[e] + dist_a[y]
            if best is not None and weight > best[0]:
                continue
            closure = (_tree_path(m, par_b, x) + [dx]
                       + [m.alpha[p] for p in reversed(_tree_path(m, par_a, y))])
            walk = middle + closure
            if is_contractible(m, walk):
                continue
            cand = (weight, _canonical_rotation(walk))
            if best is None or cand < best:
                best = cand
    # the direct tree closure (no extra edge) is also a candidate
    if dist_b[a] is not None:
        closure = _tree_path(m, par_b, a)
        walk = middle + closure
        if closure or a == b:
            weight = wmid + dist_b[a]
            if len(walk) and not is_contractible(m, walk):
                cand = (weight, _canonical_rotation(walk))
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise ValueError("no non-contractible closed walk meets the constraint")
    return list(best[1]), best[0]
