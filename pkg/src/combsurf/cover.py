"""Orientable double covers of non-orientable maps.

The cover has one dart (d, sheet) per dart and sheet; crossing a twisted
edge swaps sheets, and sheet-1 vertices carry the reversed rotation, so
the total map is twist-free, hence orientable.  It is connected exactly
when the base is non-orientable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .surfmap import CombinatorialMap, MapError


@dataclass
class DoubleCover:
    base: CombinatorialMap
    total: CombinatorialMap
    projection: list          # total dart -> base dart
    lift0: list               # base dart -> sheet-0 total dart
    lift1: list               # base dart -> sheet-1 total dart
    deck: list                # total dart -> total dart

    def lift_closed_walk(self, walk):
        """Lifts of a closed base walk.

        Returns a list with two sheet-disjoint lifts of the base length
        when the walk preserves orientation, else one closed lift of
        twice the length.
        """
        m = self.base
        lifts = []
        for start_sheet in (0, 1):
            cur = []
            sheet = start_sheet
            done = False
            while not done:
                for d in walk:
                    cur.append(self.lift0[d] if sheet == 0 else self.lift1[d])
                    sheet ^= m.twist[m.edge_of(d)]
                done = sheet == start_sheet
            lifts.append(cur)
            if len(cur) == 2 * len(walk):
                return [cur]
        return lifts

    def project(self, walk_in_total):
        """Dart-wise image of a walk in the total map."""
        return [self.projection[d] for d in walk_in_total]


def double_cover(m: CombinatorialMap) -> DoubleCover:
    """Orientation double cover of a connected non-orientable map."""
    cls = m.classify()
    if cls.orientable:
        raise MapError("orientable input: the orientation cover is trivial")
    n = m.n_darts

    # total darts: 2*d + sheet
    def td(d, sheet):
        return 2 * d + sheet

    sigma = [0] * (2 * n)
    sigma_inv_base = [0] * n
    for d in range(n):
        sigma_inv_base[m.sigma[d]] = d
    for d in range(n):
        sigma[td(d, 0)] = td(m.sigma[d], 0)
        sigma[td(d, 1)] = td(sigma_inv_base[d], 1)
    alpha = [0] * (2 * n)
    for d in range(n):
        t = m.twist[m.edge_of(d)]
        alpha[td(d, 0)] = td(m.alpha[d], t)
        alpha[td(d, 1)] = td(m.alpha[d], 1 - t)
    total = CombinatorialMap(sigma, alpha)
    if not total.is_connected:
        raise MapError("cover is disconnected; base was orientable?")
    if (total.n_vertices, total.n_edges, total.n_faces) != (
            2 * m.n_vertices, 2 * m.n_edges, 2 * m.n_faces):
        raise MapError("double cover counts are off")
    if not total.classify().orientable:
        raise MapError("double cover is not orientable")
    projection = [0] * (2 * n)
    lift0 = [0] * n
    lift1 = [0] * n
    deck = [0] * (2 * n)
    for d in range(n):
        projection[td(d, 0)] = projection[td(d, 1)] = d
        lift0[d] = td(d, 0)
        lift1[d] = td(d, 1)
        deck[td(d, 0)] = td(d, 1)
        deck[td(d, 1)] = td(d, 0)
    return DoubleCover(base=m, total=total, projection=projection,
                       lift0=lift0, lift1=lift1, deck=deck)
