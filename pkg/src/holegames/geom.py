"""Exact planar geometry primitives: predicates, hulls, cones, angle tests.

Every operation here is decided exactly over the rationals (or a quadratic
extension for the supported angle thresholds).  Nothing in this module ever
rounds.
"""

from __future__ import annotations

from .rationals import Q, QuadExt, cmp_ratio_sqrt_vs_quadext, sign, to_q

CCW = 1
CW = -1
COLLINEAR = 0


class GeometryError(ValueError):
    pass


class GeneralPositionViolation(GeometryError):
    pass


class DegenerateAngle(GeometryError):
    pass


class UnsupportedThreshold(GeometryError):
    pass


class Point:
    """A point (or vector) with exact rational coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", to_q(x))
        object.__setattr__(self, "y", to_q(y))

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    def __repr__(self):
        return "Point(%s, %s)" % (self.x, self.y)

    def __eq__(self, other):
        return isinstance(other, Point) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, factor):
        f = to_q(factor)
        return Point(self.x * f, self.y * f)

    def cross(self, other) -> Q:
        return self.x * other.y - self.y * other.x

    def dot(self, other) -> Q:
        return self.x * other.x + self.y * other.y

    def norm_sq(self) -> Q:
        return self.x * self.x + self.y * self.y

    def perp(self):
        """Rotate by +90 degrees (counterclockwise)."""
        return Point(-self.y, self.x)

    def as_floats(self):
        return (
            float(self.x.numerator) / float(self.x.denominator),
            float(self.y.numerator) / float(self.y.denominator),
        )


class Direction:
    """A nonzero vector; two directions are equal up to positive scaling."""

    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        object.__setattr__(self, "dx", to_q(dx))
        object.__setattr__(self, "dy", to_q(dy))
        if self.dx == 0 and self.dy == 0:
            raise GeometryError("zero direction")

    def __setattr__(self, name, value):
        raise AttributeError("Direction is immutable")

    def __repr__(self):
        return "Direction(%s, %s)" % (self.dx, self.dy)

    def vec(self) -> Point:
        return Point(self.dx, self.dy)

    def perp(self) -> "Direction":
        return Direction(-self.dy, self.dx)

    def opposite(self) -> "Direction":
        return Direction(-self.dx, -self.dy)

    def same_ray(self, other: "Direction") -> bool:
        v, w = self.vec(), other.vec()
        return v.cross(w) == 0 and v.dot(w) > 0

    def __eq__(self, other):
        return isinstance(other, Direction) and self.same_ray(other)

    def __hash__(self):
        raise TypeError("directions are compared up to scale; do not hash")


DOWN = Direction(0, -1)


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of the turn p->q->r: CCW (+1), CW (-1) or COLLINEAR (0)."""
    return sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def is_general_position(points) -> bool:
    """All points distinct and no three collinear."""
    pts = list(points)
    n = len(pts)
    seen = set()
    for p in pts:
        key = (p.x, p.y)
        if key in seen:
            return False
        seen.add(key)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orientation(pts[i], pts[j], pts[k]) == COLLINEAR:
                    return False
    return True


def collinear_triples(points):
    """All index triples that violate general position (for error reporting)."""
    pts = list(points)
    n = len(pts)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orientation(pts[i], pts[j], pts[k]) == COLLINEAR:
                    out.append((i, j, k))
    return out


def convex_hull(points) -> list:
    """CCW hull vertices; collinear points interior to hull edges excluded."""
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) != CCW:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) != CCW:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def in_convex_position(points) -> bool:
    """True iff every point is a vertex of the hull.  Needs general position."""
    pts = list(points)
    if not is_general_position(pts):
        raise GeneralPositionViolation("point set is not in general position")
    return len(convex_hull(pts)) == len(pts)


def point_in_convex_polygon(vertices, p: Point, closed: bool = True) -> bool:
    """Membership in a convex polygon given by CCW vertices (k orientation tests)."""
    k = len(vertices)
    if k == 1:
        return closed and p == vertices[0]
    if k == 2:
        a, b = vertices
        if orientation(a, b, p) != COLLINEAR:
            return False
        return closed and (p - a).dot(b - a) >= 0 and (p - b).dot(a - b) >= 0
    for i in range(k):
        o = orientation(vertices[i], vertices[(i + 1) % k], p)
        if o == CW:
            return False
        if o == COLLINEAR and not closed:
            return False
    return True


class Cone:
    """Convex cone at an apex, swept CCW from one boundary ray to another.

    The aperture is strictly below pi, which the constructor enforces.
    """

    __slots__ = ("apex", "boundary_from", "boundary_to")

    def __init__(self, apex: Point, boundary_from: Direction, boundary_to: Direction):
        if boundary_from.vec().cross(boundary_to.vec()) <= 0:
            raise GeometryError("cone aperture must be in (0, pi), CCW from->to")
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "boundary_from", boundary_from)
        object.__setattr__(self, "boundary_to", boundary_to)

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    def __repr__(self):
        return "Cone(%r, %r -> %r)" % (self.apex, self.boundary_from, self.boundary_to)


def point_in_cone(cone: Cone, p: Point, boundary: str = "closed") -> bool:
    """Exact membership via two orientation tests against the boundary rays."""
    if p == cone.apex:
        raise GeometryError("membership undefined at the apex")
    w = p - cone.apex
    a = cone.boundary_from.vec()
    b = cone.boundary_to.vec()
    ca = a.cross(w)
    cb = w.cross(b)
    if boundary == "closed":
        return ca >= 0 and cb >= 0
    if boundary == "open":
        return ca > 0 and cb > 0
    raise ValueError("boundary must be 'open' or 'closed'")


def point_in_angular_domain(apex: Point, a: Point, b: Point, p: Point) -> bool:
    """Strict membership in the convex angular domain at apex spanned by a and b."""
    if a == apex or b == apex or p == apex:
        raise GeometryError("arguments must differ from the apex")
    u, v = a - apex, b - apex
    c = u.cross(v)
    if c == 0:
        raise DegenerateAngle("rays to a and b are collinear at the apex")
    if c < 0:
        u, v = v, u
    w = p - apex
    return u.cross(w) > 0 and w.cross(v) > 0


class ClosedDisk:
    """Disk with rational squared radius (the radius itself may be irrational)."""

    __slots__ = ("center", "radius_squared")

    def __init__(self, center: Point, radius_squared):
        rsq = to_q(radius_squared)
        if rsq <= 0:
            raise GeometryError("radius_squared must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius_squared", rsq)

    def __setattr__(self, name, value):
        raise AttributeError("ClosedDisk is immutable")

    def contains(self, p: Point) -> bool:
        return (p - self.center).norm_sq() <= self.radius_squared

    def disjoint_from(self, other: "ClosedDisk") -> bool:
        """sqrt(r1^2) + sqrt(r2^2) < |c1 c2|, decided exactly."""
        dsq = (self.center - other.center).norm_sq()
        gap = dsq - self.radius_squared - other.radius_squared
        if gap <= 0:
            return False
        return 4 * self.radius_squared * other.radius_squared < gap * gap

    def __repr__(self):
        return "ClosedDisk(%r, r2=%s)" % (self.center, self.radius_squared)


# ---------------------------------------------------------------------------
# Exact angle thresholds.
#
# A threshold T in (0, pi) is stored as cos(T) in Q[sqrt(s)].  Comparing the
# angle between two rational vectors against T reduces to comparing
# dot/sqrt(|u|^2 |v|^2) against that element, which cmp_ratio_sqrt_vs_quadext
# does with sign bookkeeping and at most two squarings.
# ---------------------------------------------------------------------------

_COS_TWO_PI_OVER = {
    3: QuadExt(Q(-1, 2), 0, 1),
    4: QuadExt(0, 0, 1),
    5: QuadExt(Q(-1, 4), Q(1, 4), 5),
    6: QuadExt(Q(1, 2), 0, 1),
    8: QuadExt(0, Q(1, 2), 2),
    10: QuadExt(Q(1, 4), Q(1, 4), 5),
    12: QuadExt(0, Q(1, 2), 3),
}

_SIN_TWO_PI_OVER = {
    3: QuadExt(0, Q(1, 2), 3),
    4: QuadExt(1, 0, 1),
    6: QuadExt(0, Q(1, 2), 3),
    8: QuadExt(0, Q(1, 2), 2),
    12: QuadExt(Q(1, 2), 0, 1),
}


class AngleThreshold:
    """An exact comparison threshold for unsigned angles in (0, pi)."""

    __slots__ = ("cos_value", "label")

    def __init__(self, cos_value: QuadExt, label: str):
        self.cos_value = cos_value
        self.label = label

    def __repr__(self):
        return "AngleThreshold(%s)" % self.label

    @classmethod
    def two_pi_over(cls, lam: int) -> "AngleThreshold":
        """The threshold 2*pi/lam, for lam with cos(2*pi/lam) in some Q[sqrt(s)]."""
        if lam not in _COS_TWO_PI_OVER:
            raise UnsupportedThreshold(
                "cos(2*pi/%d) is not expressible in a quadratic extension" % lam
            )
        return cls(_COS_TWO_PI_OVER[lam], "2*pi/%d" % lam)

    @classmethod
    def pi_over(cls, n: int) -> "AngleThreshold":
        return cls.two_pi_over(2 * n)


PI_OVER_3 = AngleThreshold.two_pi_over(6)
PI_OVER_2 = AngleThreshold.two_pi_over(4)


def shifted_two_pi_over(lam: int, cos_shift, sin_shift) -> AngleThreshold:
    """The threshold (2*pi/lam + shift) for a shift with rational cos and sin.

    cos(A + B) = cosA cosB - sinA sinB stays inside the same quadratic
    extension when cos(2*pi/lam) and sin(2*pi/lam) share a radicand.
    """
    if lam not in _COS_TWO_PI_OVER or lam not in _SIN_TWO_PI_OVER:
        raise UnsupportedThreshold(
            "cannot form 2*pi/%d + shift in a quadratic extension" % lam
        )
    c = _COS_TWO_PI_OVER[lam]
    s = _SIN_TWO_PI_OVER[lam]
    radicands = {x.s for x in (c, s) if x.b != 0}
    if len(radicands) > 1:
        raise UnsupportedThreshold("mixed radicands for lambda=%d" % lam)
    rad = radicands.pop() if radicands else Q(1)
    ce, se = to_q(cos_shift), to_q(sin_shift)
    return AngleThreshold(
        QuadExt(c.a * ce - s.a * se, c.b * ce - s.b * se, rad),
        "2*pi/%d+shift" % lam,
    )


def cmp_angle(apex: Point, a: Point, b: Point, threshold: AngleThreshold) -> int:
    """Exact sign of (angle a-apex-b) - threshold, angle measured in [0, pi]."""
    u = a - apex
    v = b - apex
    if (u.x == 0 and u.y == 0) or (v.x == 0 and v.y == 0):
        raise GeometryError("a and b must differ from the apex")
    d = u.dot(v)
    den_sq = u.norm_sq() * v.norm_sq()
    # angle > T  <=>  cos(angle) < cos(T)
    return -cmp_ratio_sqrt_vs_quadext(d, den_sq, threshold.cos_value)


def angle_exceeds(apex: Point, a: Point, b: Point, threshold: AngleThreshold) -> bool:
    """True iff the unsigned angle a-apex-b strictly exceeds the threshold."""
    return cmp_angle(apex, a, b, threshold) > 0


def _line_intersection(a: Point, b: Point, c: Point, d: Point):
    """Intersection of lines ab and cd, or None when parallel."""
    r = b - a
    s = d - c
    den = r.cross(s)
    if den == 0:
        return None
    t = (c - a).cross(s) / den
    return a + r.scale(t)


def convex_polygon_intersection(subject, clip):
    """Exact intersection of two convex CCW polygons (Sutherland-Hodgman).

    Returns a list of vertices (possibly with collinear repeats); empty list
    for an empty intersection.  Closed semantics: shared boundary survives.
    """
    if len(clip) < 3:
        raise GeometryError("clip polygon needs at least 3 vertices")
    output = list(subject)
    m = len(clip)
    for i in range(m):
        if not output:
            return []
        a, b = clip[i], clip[(i + 1) % m]
        inputs = output
        output = []
        prev = inputs[-1]
        prev_in = orientation(a, b, prev) != CW
        for cur in inputs:
            cur_in = orientation(a, b, cur) != CW
            if cur_in:
                if not prev_in:
                    x = _line_intersection(a, b, prev, cur)
                    if x is not None:
                        output.append(x)
                output.append(cur)
            elif prev_in:
                x = _line_intersection(a, b, prev, cur)
                if x is not None:
                    output.append(x)
            prev, prev_in = cur, cur_in
    seen = []
    for v in output:
        if not any(v == w for w in seen):
            seen.append(v)
    return seen


# ---------------------------------------------------------------------------
# Exact angular order around an apex (used by cone sweeps and the oracle).
# ---------------------------------------------------------------------------


def ccw_half(ref: Point, w: Point) -> int:
    """Coarse CCW position of w relative to ref: 0 on ref's ray, 1 in (0,pi),
    2 opposite, 3 in (pi,2pi)."""
    c = ref.cross(w)
    if c > 0:
        return 1
    if c < 0:
        return 3
    return 0 if ref.dot(w) > 0 else 2


def ccw_cmp(ref: Point, w1: Point, w2: Point) -> int:
    """Compare CCW angles from ref: -1 if w1 sweeps first, +1 if w2 does."""
    h1, h2 = ccw_half(ref, w1), ccw_half(ref, w2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    c = w1.cross(w2)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def cw_cmp(ref: Point, w1: Point, w2: Point) -> int:
    """Compare CW angles from ref (mirror of ccw_cmp)."""
    h1 = _cw_half(ref, w1)
    h2 = _cw_half(ref, w2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    c = w1.cross(w2)
    if c < 0:
        return -1
    if c > 0:
        return 1
    return 0


def _cw_half(ref: Point, w: Point) -> int:
    c = ref.cross(w)
    if c < 0:
        return 1
    if c > 0:
        return 3
    return 0 if ref.dot(w) > 0 else 2
