"""Brute-force k-hole oracle: the ground truth the strategy modules are tested
against.

Enumeration walks convex chains anchored at the bottom-most vertex of each
candidate hole, in exact angular order, and prunes through fan triangles that
must be empty.  The hull of an anchored convex chain is the union of its fan
triangles, so a candidate is a hole iff every fan triangle is empty; this keeps
the C(n,k) blowup practical at the scales the tests use (n <= 40, k <= 8).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .board import Owner, PointSet, Rule
from .geom import CCW, Point, convex_hull, orientation, point_in_convex_polygon


class NotSubset(ValueError):
    pass


class WrongCardinality(ValueError):
    pass


@dataclass(frozen=True)
class HoleCertificate:
    """k points claimed as a k-hole, re-checkable against a PointSet snapshot."""

    vertices: tuple  # CCW order
    rule: Rule
    snapshot_version: int = 0

    def indices_in(self, board: PointSet):
        lookup = {p: i for i, p in enumerate(board.points)}
        return sorted(lookup[v] for v in self.vertices)


def verify_hole(board: PointSet, candidate, k: int, rule: Rule) -> bool:
    """Exact certificate check: convex position, emptiness, and ownership."""
    cand = list(candidate)
    if len(cand) != k or len(set(cand)) != k:
        raise WrongCardinality("expected %d distinct vertices, got %d" % (k, len(cand)))
    index_of = {}
    for i, p in enumerate(board.points):
        index_of[p] = i
    try:
        cand_idx = [index_of[p] for p in cand]
    except KeyError as missing:
        raise NotSubset("candidate vertex %s is not on the board" % (missing.args[0],))
    if rule is Rule.BICHROMATIC:
        if any(board.owners[i] is not Owner.MAKER for i in cand_idx):
            return False
    hull = convex_hull(cand)
    if len(hull) != k:
        return False
    cand_set = set(cand)
    for p in board.points:
        if p in cand_set:
            continue
        if point_in_convex_polygon(hull, p, closed=True):
            return False
    return True


class _FanEnumerator:
    """Anchored convex-chain DFS over empty fan triangles."""

    def __init__(self, board: PointSet, k: int, rule: Rule):
        self.points = board.points
        self.owners = board.owners
        self.k = k
        self.rule = rule

    def _vertex_ok(self, idx: int) -> bool:
        if self.rule is Rule.BICHROMATIC:
            return self.owners[idx] is Owner.MAKER
        return True

    def holes_from_anchor(self, anchor: int, require: int | None = None):
        """Yield index tuples of k-holes whose (y, x)-lowest vertex is anchor."""
        pts = self.points
        a = pts[anchor]
        if not self._vertex_ok(anchor):
            return
        if require is not None and require != anchor:
            rp = pts[require]
            if (rp.y, rp.x) <= (a.y, a.x):
                return
        cands = [
            i
            for i in range(len(pts))
            if i != anchor
            and self._vertex_ok(i)
            and (pts[i].y, pts[i].x) > (a.y, a.x)
        ]
        if len(cands) < self.k - 1:
            return

        def ang(i: int, j: int) -> int:
            c = (pts[i] - a).cross(pts[j] - a)
            return -1 if c > 0 else (1 if c < 0 else 0)

        cands.sort(key=functools.cmp_to_key(ang))
        pos = {idx: n for n, idx in enumerate(cands)}
        req_pos = pos.get(require) if require is not None and require != anchor else None
        if require is not None and require != anchor and req_pos is None:
            return

        empty_memo: dict[tuple[int, int], bool] = {}

        def fan_empty(u: int, w: int) -> bool:
            key = (u, w)
            hit = empty_memo.get(key)
            if hit is not None:
                return hit
            pa, pu, pw = a, pts[u], pts[w]
            ok = True
            for i, q in enumerate(pts):
                if i == anchor or i == u or i == w:
                    continue
                if (
                    orientation(pa, pu, q) == CCW
                    and orientation(pu, pw, q) == CCW
                    and orientation(pw, pa, q) == CCW
                ):
                    ok = False
                    break
            empty_memo[key] = ok
            return ok

        chain: list[int] = []

        def extend(start: int):
            depth = len(chain)
            need = self.k - 1 - depth
            if need == 0:
                if require is None or require == anchor or require in chain:
                    if orientation(pts[chain[-2]] if depth >= 2 else a, pts[chain[-1]], a) == CCW:
                        yield (anchor, *chain)
                return
            limit = len(cands) - need + 1
            if require is not None and req_pos is not None and require not in chain:
                # the required vertex must still be reachable
                limit = min(limit, req_pos + 1)
            for n in range(start, limit):
                w = cands[n]
                if depth == 0:
                    chain.append(w)
                    yield from extend(n + 1)
                    chain.pop()
                    continue
                prev = chain[-1]
                prev2 = pts[chain[-2]] if depth >= 2 else a
                if orientation(prev2, pts[prev], pts[w]) != CCW:
                    continue
                if not fan_empty(prev, w):
                    continue
                chain.append(w)
                yield from extend(n + 1)
                chain.pop()

        yield from extend(0)

    def holes(self, require: int | None = None):
        for anchor in range(len(self.points)):
            yield from self.holes_from_anchor(anchor, require)


def enumerate_k_holes(board: PointSet, k: int, rule: Rule, require_vertex: int | None = None):
    """Yield k-holes as sorted index tuples; deterministic order."""
    if k < 3:
        raise ValueError("holes need k >= 3")
    enum = _FanEnumerator(board, k, rule)
    for tup in enum.holes(require_vertex):
        yield tuple(sorted(tup))


def count_k_holes(board: PointSet, k: int, rule: Rule = Rule.MONOCHROMATIC) -> int:
    return sum(1 for _ in enumerate_k_holes(board, k, rule))


def find_k_hole(board: PointSet, k: int, rule: Rule = Rule.MONOCHROMATIC):
    """First k-hole by lexicographic vertex-index order, or None."""
    best = None
    for tup in enumerate_k_holes(board, k, rule):
        if best is None or tup < best:
            best = tup
    if best is None:
        return None
    verts = convex_hull([board.points[i] for i in best])
    return HoleCertificate(tuple(verts), rule, board.version)


def any_k_hole(
    board: PointSet, k: int, rule: Rule = Rule.MONOCHROMATIC, require_vertex: int | None = None
):
    """Fast existence check (early exit); used by incremental win detection."""
    for tup in enumerate_k_holes(board, k, rule, require_vertex):
        verts = convex_hull([board.points[i] for i in tup])
        return HoleCertificate(tuple(verts), rule, board.version)
    return None
