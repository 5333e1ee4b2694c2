"""Labeled point multisets shared by the oracle, the referee and strategies."""

from __future__ import annotations

import enum

from .geom import COLLINEAR, Point, orientation


class Owner(enum.Enum):
    MAKER = "maker"
    BREAKER = "breaker"


class Rule(enum.Enum):
    MONOCHROMATIC = "monochromatic"
    BICHROMATIC = "bichromatic"


class IllegalCollinear(ValueError):
    """A placement that would put three board points on a line."""

    def __init__(self, triple):
        self.triple = triple
        super().__init__(
            "collinear with placed points %s and %s" % (triple[0], triple[1])
        )


_VERTICAL = "vertical"


def _slope_key(a: Point, b: Point):
    dx = b.x - a.x
    if dx == 0:
        return _VERTICAL
    return (b.y - a.y) / dx


class PointSet:
    """Ordered point set with owner labels and a general-position invariant.

    Collinearity screening is O(n) per query: each point keeps a dictionary
    of exact slopes to every other point, so a third point on any existing
    line collides with a stored key.  ``version`` increases with every
    accepted placement, giving certificates a snapshot id.
    """

    def __init__(self):
        self.points: list[Point] = []
        self.owners: list[Owner] = []
        self.version = 0
        self._slopes: list[dict] = []

    def __len__(self):
        return len(self.points)

    def copy(self) -> "PointSet":
        out = PointSet()
        out.points = list(self.points)
        out.owners = list(self.owners)
        out.version = self.version
        out._slopes = [dict(d) for d in self._slopes]
        return out

    def collinearity_conflict(self, p: Point, extra=()):
        """Two existing points collinear with p, or None.

        `extra` is screened as well (pending placements not yet on the board);
        a duplicate point is reported as a pair (q, q).
        """
        for i, q in enumerate(self.points):
            if q == p:
                return (q, q)
            key = _slope_key(q, p)
            j = self._slopes[i].get(key)
            if j is not None:
                return (q, self.points[j])
        extra = list(extra)
        for e in extra:
            if e == p:
                return (e, e)
        for e in extra:
            for q in self.points:
                if orientation(q, e, p) == COLLINEAR:
                    return (q, e)
            for e2 in extra:
                if e2 is not e and orientation(e, e2, p) == COLLINEAR:
                    return (e, e2)
        return None

    def add(self, p: Point, owner: Owner) -> int:
        conflict = self.collinearity_conflict(p)
        if conflict is not None:
            raise IllegalCollinear((conflict[0], conflict[1], p))
        idx = len(self.points)
        for i, q in enumerate(self.points):
            self._slopes[i][_slope_key(q, p)] = idx
        self._slopes.append({_slope_key(p, q): i for i, q in enumerate(self.points)})
        self.points.append(p)
        self.owners.append(owner)
        self.version += 1
        return idx

    def unadd(self) -> None:
        """Remove the most recent point (referee rollback)."""
        p = self.points.pop()
        self.owners.pop()
        self._slopes.pop()
        for i, q in enumerate(self.points):
            del self._slopes[i][_slope_key(q, p)]
        self.version += 1

    def indices_of(self, owner: Owner):
        return [i for i, o in enumerate(self.owners) if o is owner]

    def points_of(self, owner: Owner):
        return [p for p, o in zip(self.points, self.owners) if o is owner]

    @classmethod
    def from_points(cls, points, owner: Owner = Owner.MAKER) -> "PointSet":
        out = cls()
        for p in points:
            out.add(p, owner)
        return out

    @classmethod
    def from_labeled(cls, labeled) -> "PointSet":
        """Build from an iterable of (point, owner) pairs."""
        out = cls()
        for p, o in labeled:
            out.add(p, o)
        return out
