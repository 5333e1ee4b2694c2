"""k-strips: caps with an empty unbounded region below, and their maintenance.

A k-strip for direction v is k points in convex position whose hull, extended
by the halfline in direction v (a Minkowski sum), contains no other point of
the reference set in its closure.  Region membership is decided by the exact
half-plane decomposition: the roof edges (hull edges facing away from v) plus
the two silhouette rays.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geom import CCW, CW, Cone, Direction, Point, cw_cmp, ccw_cmp, orientation
from .rationals import Q


class NotInCone(ValueError):
    pass


def proj(p: Point, v: Direction) -> Q:
    """Signed coordinate of p along the axis orthogonal to v (left-to-right
    when v points down)."""
    return p.y * v.dx - p.x * v.dy


def sort_by_proj(points, v: Direction):
    px, py = -v.dy, v.dx
    return sorted(points, key=lambda p: p.x * px + p.y * py)


def is_cap(points_sorted, v: Direction) -> bool:
    """Convex chain covering the whole roof: strictly increasing projections
    and every consecutive triple turning clockwise (toward v)."""
    pts = points_sorted
    px, py = -v.dy, v.dx
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if a.x * px + a.y * py >= b.x * px + b.y * py:
            return False
    for i in range(len(pts) - 2):
        if orientation(pts[i], pts[i + 1], pts[i + 2]) != CW:
            return False
    return True


def region_side(points_sorted, v: Direction, q: Point, closed: bool = True) -> bool:
    """Membership of q in conv(P) + ray(v) (closed) or its interior (open)."""
    pts = points_sorted
    k = len(pts)
    if k == 1:
        if not closed:
            return False  # the region of a single point has empty interior
        p0 = pts[0]
        wx, wy = q.x - p0.x, q.y - p0.y
        return wx * v.dy == wy * v.dx and wx * v.dx + wy * v.dy >= 0
    px, py = -v.dy, v.dx
    pq = q.x * px + q.y * py
    lo = pts[0].x * px + pts[0].y * py
    if pq < lo or (not closed and pq == lo):
        return False
    hi = pts[-1].x * px + pts[-1].y * py
    if pq > hi or (not closed and pq == hi):
        return False
    prev = lo
    for i in range(k - 1):
        b = pts[i + 1]
        cur = b.x * px + b.y * py
        if prev <= pq <= cur:
            o = orientation(pts[i], b, q)
            if closed and o == CCW:
                return False
            if not closed and o != CW:
                return False
        prev = cur
    return True


def is_k_strip(candidate, v: Direction, reference_points) -> bool:
    """Exact k-strip test for a candidate point set against a reference set."""
    pts = sort_by_proj(candidate, v)
    k = len(pts)
    if k == 0:
        return False
    if k >= 2 and not is_cap(pts, v):
        return False
    cand = set(pts)
    for q in reference_points:
        if q in cand:
            continue
        if region_side(pts, v, q, closed=True):
            return False
    return True


@dataclass(frozen=True)
class Strip:
    """A validated k-strip: points sorted by projection, shared direction."""

    points: tuple
    direction: Direction
    generation: int = 0

    @classmethod
    def build(cls, points, v: Direction, reference_points, generation: int = 0) -> "Strip":
        pts = sort_by_proj(points, v)
        if not is_k_strip(pts, v, reference_points):
            raise ValueError("candidate is not a %d-strip" % len(pts))
        return cls(tuple(pts), v, generation)

    @property
    def k(self) -> int:
        return len(self.points)

    def interval(self):
        return (proj(self.points[0], self.direction), proj(self.points[-1], self.direction))

    def contains(self, q: Point, closed: bool = True) -> bool:
        return region_side(list(self.points), self.direction, q, closed)

    def far_witness(self) -> Point:
        """A point far along the ray making points + witness convex position."""
        from .geom import in_convex_position

        mid = self.points[len(self.points) // 2]
        t = Q(1)
        while True:
            w = mid + self.direction.vec().scale(t)
            try:
                if in_convex_position(list(self.points) + [w]):
                    return w
            except Exception:
                pass
            t *= 2


@dataclass
class StripFamily:
    """Parallel strips with pairwise disjoint regions, ordered by projection."""

    strips: list
    direction: Direction

    def __post_init__(self):
        self.strips = sorted(self.strips, key=lambda s: s.interval()[0])
        for s in self.strips:
            if not s.direction.same_ray(self.direction):
                raise ValueError("family strips must share one direction")
        for s1, s2 in zip(self.strips, self.strips[1:]):
            if s1.interval()[1] >= s2.interval()[0]:
                raise ValueError("strip regions overlap in projection")

    def __len__(self):
        return len(self.strips)


class DegenerateCone(ValueError):
    """A reference point sits on the sweep's starting ray (aperture zero)."""


def _sweep_stop(apex: Point, start: Direction, limit: Direction, obstacles, cmp):
    """First stop when sweeping a halfline from `start` about `apex` (cmp
    orders the sweep): the limit direction or the first obstacle hit.

    Returns (direction, witness) where witness is the stopping point, or None
    when the sweep reached the limit unobstructed.
    """
    best = limit
    witness = None
    sv = start.vec()
    for q in obstacles:
        if q == apex:
            continue
        w = q - apex
        if sv.cross(w) == 0 and sv.dot(w) > 0:
            raise DegenerateCone("reference point %r on the starting ray" % (q,))
        if cmp(sv, w, best.vec()) < 0:
            best = Direction(w.x, w.y)
            witness = q
    return best, witness


def cone_of_points(points, v: Direction, reference_points, side: str, want_witness: bool = False):
    """One adjacent cone of a cap given as raw points.

    side "minus" sweeps clockwise at the low-projection end, "plus" sweeps
    counterclockwise at the high end.  Raises DegenerateCone when a reference
    point sits exactly on the starting ray.
    """
    pts = sort_by_proj(points, v)
    cand = set(pts)
    obstacles = [q for q in reference_points if q not in cand]
    if side == "minus":
        if len(pts) >= 2:
            d = pts[0] - pts[1]
            limit = Direction(d.x, d.y)
        else:
            limit = v.perp().opposite()  # sweep at most a quarter turn
        stop, wit = _sweep_stop(pts[0], v, limit, obstacles, cw_cmp)
        cone = Cone(pts[0], stop, v)
    elif side == "plus":
        if len(pts) >= 2:
            d = pts[-1] - pts[-2]
            limit = Direction(d.x, d.y)
        else:
            limit = v.perp()
        stop, wit = _sweep_stop(pts[-1], v, limit, obstacles, ccw_cmp)
        cone = Cone(pts[-1], v, stop)
    else:
        raise ValueError("side must be 'minus' or 'plus'")
    if want_witness:
        return cone, wit
    return cone


def adjacent_cones_of_points(points, v: Direction, reference_points, want_witness: bool = False):
    """Adjacent cones of a cap given as raw points (see adjacent_cones)."""
    minus = cone_of_points(points, v, reference_points, "minus", want_witness)
    plus = cone_of_points(points, v, reference_points, "plus", want_witness)
    return minus, plus


def adjacent_cones(strip: Strip, reference_points) -> tuple[Cone, Cone]:
    """The cones C- (at the low-projection end) and C+ (at the high end) in
    which any reference point extends the strip."""
    return adjacent_cones_of_points(list(strip.points), strip.direction, reference_points)


def extend_strip(strip: Strip, p: Point, reference_points) -> Strip:
    """Add p (in the closure of an adjacent cone) and return the (k+1)-strip."""
    from .geom import point_in_cone

    refs = list(reference_points)
    if p not in refs:
        refs = refs + [p]
    cminus, cplus = adjacent_cones(strip, refs)
    ok = False
    for cone in (cminus, cplus):
        if p != cone.apex and point_in_cone(cone, p, "closed"):
            ok = True
            break
    if not ok:
        raise NotInCone("point %r is outside both adjacent cones" % (p,))
    return Strip.build(list(strip.points) + [p], strip.direction, refs, strip.generation)


def pick_delta(checks, base=Q(0), start=Q(1, 4), max_halvings: int = 4000) -> Q:
    """A rational delta != base, near base, with (delta, -1) passing every
    exact check.

    All conditions the callers use are open around base or exclude finitely
    many values, so repeated halving of the offset terminates.
    """
    offset = Q(start)
    base = Q(base)
    for _ in range(max_halvings):
        for cand in (base + offset, base - offset):
            d = Direction(cand, -1)
            if all(chk(d) for chk in checks):
                return cand
        offset /= 2
    raise RuntimeError("no admissible rotation found (checks may be unsatisfiable)")


def rotation_margin(families, reference_points, extra_points=(), apex_points=()) -> Q:
    """A rational delta such that under direction (delta, -1):

    - every strip of every family re-validates against the reference set,
    - family disjointness is preserved (projection separation),
    - no extra point lies on a line in the new direction through an apex point.
    """
    strips = [s for fam in families for s in fam.strips]
    refs = list(reference_points)

    def strips_ok(d: Direction) -> bool:
        for s in strips:
            if not is_k_strip(list(s.points), d, refs):
                return False
        return True

    def families_ok(d: Direction) -> bool:
        for fam in families:
            ordered = sorted(fam.strips, key=lambda s: proj(s.points[0], d))
            for s1, s2 in zip(ordered, ordered[1:]):
                hi = max(proj(p, d) for p in s1.points)
                lo = min(proj(p, d) for p in s2.points)
                if hi >= lo:
                    return False
        return True

    def lines_ok(d: Direction) -> bool:
        vv = d.vec()
        for apex in apex_points:
            for b in extra_points:
                if b != apex and (b - apex).cross(vv) == 0:
                    return False
        return True

    return pick_delta([strips_ok, families_ok, lines_ok])
