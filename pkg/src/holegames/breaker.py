"""Breaker strategies: one-round doubling and the perturbed-polygon fence.

The perturbed-polygon strategy surrounds every Maker point with lambda points
on a small circle.  All coordinates stay rational: guards are generated by the
tangent-half-angle parametrization t -> p + r*((1-t^2)/(1+t^2), 2t/(1+t^2)),
which lies exactly on the circle of rational radius r for every rational t.
Floating point only guesses angles and radii; every condition the analysis
needs (gap pattern, ray clearance, disk disjointness, line avoidance) is then
verified exactly, with retry on failure.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .baselines import BaseStrategy, generic_points
from .board import Owner, PointSet
from .geom import (
    AngleThreshold,
    COLLINEAR,
    Point,
    angle_exceeds,
    ccw_cmp,
    cmp_angle,
    orientation,
    point_in_angular_domain,
    shifted_two_pi_over,
)
from .rationals import Q, QuadExt, dyadic_below, sqrt_below, to_q


class DegenerateInput(ValueError):
    pass


class RetryExhausted(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# One-round doubling (offline bichromatic 1:2)
# ---------------------------------------------------------------------------


def _shear_for_distinct_x(points):
    """Rational mu such that x + mu*y is injective on the points."""
    xs = [p.x for p in points]
    if len(set(xs)) == len(xs):
        return Q(0)
    mu = Q(1, 4)
    for _ in range(4000):
        seen = {p.x + mu * p.y for p in points}
        if len(seen) == len(points):
            return mu
        mu /= 2
    raise RetryExhausted("no shear found (input may contain duplicates)")


def one_round_breaker(maker_points) -> list:
    """Two Breaker points per Maker point so every Maker triangle is blocked.

    Works in a sheared frame with distinct x coordinates, then maps back;
    shearing is affine, so triangle interiors are preserved.
    """
    M = list(maker_points)
    if len(M) < 3:
        raise DegenerateInput("need at least 3 points")
    n = len(M)
    for i in range(n):
        for j in range(i + 1, n):
            if M[i] == M[j]:
                raise DegenerateInput("duplicate points")
            for k in range(j + 1, n):
                if orientation(M[i], M[j], M[k]) == COLLINEAR:
                    raise DegenerateInput("input not in general position")

    mu = _shear_for_distinct_x(M)
    sheared = [Point(p.x + mu * p.y, p.y) for p in M]

    # delta: strictly below the minimum point-to-spanned-line distance
    d2_min = None
    for i in range(n):
        for j in range(i + 1, n):
            a, b = sheared[i], sheared[j]
            ab = b - a
            den = ab.norm_sq()
            for k in range(n):
                if k == i or k == j:
                    continue
                cr = ab.cross(sheared[k] - a)
                d2 = cr * cr / den
                if d2_min is None or d2 < d2_min:
                    d2_min = d2
    delta = sqrt_below(d2_min) / 2

    # L: strict upper bound (>= 2) on all |slopes|.  The shifted point climbs
    # with slope L/2 from its Maker point; clearing a triangle edge of slope s
    # needs L/2 > s, so L must dominate twice the steepest slope.
    slope_max = Q(0)
    for i in range(n):
        for j in range(i + 1, n):
            dx = sheared[j].x - sheared[i].x
            dy = sheared[j].y - sheared[i].y
            s = abs(dy / dx)
            if s > slope_max:
                slope_max = s
    L = max(Q(2), 2 * slope_max) + 1

    for _ in range(64):
        doubled = []
        for p in sheared:
            doubled.append(Point(p.x, p.y - delta))
            doubled.append(Point(p.x + delta / L, p.y + delta / 2))
        undone = [Point(p.x - mu * p.y, p.y) for p in doubled]
        allpts = M + undone
        ok = True
        seen = set()
        for p in allpts:
            if p in seen:
                ok = False
                break
            seen.add(p)
        if ok:
            m = len(allpts)
            for i in range(m):
                for j in range(i + 1, m):
                    for k in range(j + 1, m):
                        if orientation(allpts[i], allpts[j], allpts[k]) == COLLINEAR:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
        if ok:
            return undone
        delta /= 2
    raise RetryExhausted("could not keep the doubled set in general position")


def point_in_triangle(a: Point, b: Point, c: Point, p: Point) -> bool:
    """Strict interior test."""
    o1 = orientation(a, b, p)
    o2 = orientation(b, c, p)
    o3 = orientation(c, a, p)
    return o1 == o2 == o3 and o1 != COLLINEAR


def all_triangles_blocked(maker_points, breaker_points) -> bool:
    """Exhaustive check that every Maker triangle has a Breaker point inside.

    By construction the blocker of a triangle is one of the two points derived
    from its middle vertex, so those are probed first.
    """
    M = list(maker_points)
    B = list(breaker_points)
    derived = {}
    for idx, p in enumerate(M):
        derived[p] = B[2 * idx : 2 * idx + 2] if len(B) >= 2 * len(M) else []
    n = len(M)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                tri = (M[i], M[j], M[k])
                probe = [b for v in tri for b in derived.get(v, ())]
                if not any(point_in_triangle(*tri, b) for b in probe) and not any(
                    point_in_triangle(*tri, b) for b in B
                ):
                    return False
    return True


# ---------------------------------------------------------------------------
# Perturbed polygons
# ---------------------------------------------------------------------------


@dataclass
class PerturbationBudget:
    """Exact angle witness for epsilon_i: u = tan(epsilon/2), rational.

    The invariant u <= 3/(20*lambda) implies epsilon < pi/(10*lambda), because
    epsilon = 2*atan(u) <= 2u and pi > 3.
    """

    u: Q
    lam: int

    def __post_init__(self):
        self.u = to_q(self.u)
        if not 0 < self.u <= Q(3, 20 * self.lam):
            raise ValueError("epsilon witness out of range")

    @property
    def cos_eps(self) -> Q:
        u2 = self.u * self.u
        return (1 - u2) / (1 + u2)

    @property
    def sin_eps(self) -> Q:
        u2 = self.u * self.u
        return 2 * self.u / (1 + u2)

    def halved(self) -> "PerturbationBudget":
        return PerturbationBudget(self.u / 2, self.lam)

    def threshold(self) -> AngleThreshold:
        return AngleThreshold(QuadExt(self.cos_eps, 0, 1), "epsilon")

    def gap_upper_threshold(self) -> AngleThreshold:
        """Exact threshold for 2*pi/lambda + epsilon."""
        return shifted_two_pi_over(self.lam, self.cos_eps, self.sin_eps)


@dataclass
class DiskEntry:
    center_index: int
    center: Point
    radius_sq: Q  # R_i^2 (the disk; its radius may be irrational)
    circle_radius: Q  # r_i (rational, guards live on this circle)
    guards: list = field(default_factory=list)
    budget: PerturbationBudget | None = None

    def contains(self, p: Point) -> bool:
        return (p - self.center).norm_sq() <= self.radius_sq

    def disjoint_from(self, other: "DiskEntry") -> bool:
        dsq = (self.center - other.center).norm_sq()
        gap = dsq - self.radius_sq - other.radius_sq
        if gap <= 0:
            return False
        return 4 * self.radius_sq * other.radius_sq < gap * gap


class DiskRegistry:
    """Breaker's bookkeeping: one disk/circle/guard set per Maker point."""

    def __init__(self, lam: int):
        self.lam = lam
        self.entries: dict[int, DiskEntry] = {}

    def disks_disjoint(self) -> bool:
        items = list(self.entries.values())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if not items[i].disjoint_from(items[j]):
                    return False
        return True

    def invaded_by(self, p: Point):
        for idx, e in self.entries.items():
            if e.contains(p):
                return idx
        return None


def _line_distance_sq(p: Point, a: Point, b: Point) -> Q:
    ab = b - a
    cr = ab.cross(p - a)
    return cr * cr / ab.norm_sq()


def _circle_clear_of_witness_line(p: Point, a: Point, b: Point, disk_r_sq: Q, r: Q) -> bool:
    """Exact test that the circle (p, r) misses the line through b and c(a),
    where c(a) is the antipodal crossing of line a-p with the disk boundary.

    c(a) = p + (R/|a-p|)(p - a) is irrational; the condition is decided as a
    sign test in Q[sqrt(m2)] with m2 = R^2/|a-p|^2.
    """
    da2 = (a - p).norm_sq()
    m2 = disk_r_sq / da2
    X = (p - a).cross(p - b)
    if X == 0:
        return False  # collinear a, b, p: excluded by general position
    A = (p - b).norm_sq() + m2 * (a - p).norm_sq()
    B = 2 * (p - b).dot(p - a)
    r2 = r * r
    rhs = m2 * X * X - r2 * A
    lhs_coeff = B * r2
    # condition: lhs_coeff * sqrt(m2) < rhs
    if rhs > 0:
        if lhs_coeff <= 0:
            return True
        return lhs_coeff * lhs_coeff * m2 < rhs * rhs
    if lhs_coeff >= 0:
        return False
    return lhs_coeff * lhs_coeff * m2 > rhs * rhs


def choose_disk_radius_sq(registry: DiskRegistry, p: Point, replacing: int | None = None) -> Q:
    """R_i^2 for a fresh disk at p, exactly disjoint from all other disks."""
    others = [e for e in registry.entries.values() if e.center_index != replacing]
    if not others:
        return Q(1)
    guess = None
    for e in others:
        d = math.sqrt(float(Fraction((p - e.center).norm_sq().numerator,
                                     (p - e.center).norm_sq().denominator)))
        rr = math.sqrt(float(Fraction(e.radius_sq.numerator, e.radius_sq.denominator)))
        clear = (d - rr) / 2
        if guess is None or clear < guess:
            guess = clear
    if guess is None or guess <= 0:
        guess = 0.5
    R = dyadic_below(min(guess, 1.0))
    cand = DiskEntry(-1, p, R * R, R)
    for _ in range(400):
        cand = DiskEntry(-1, p, R * R, R)
        if all(cand.disjoint_from(e) for e in others):
            return R * R
        R /= 2
    raise RetryExhausted("no admissible disk radius")


def choose_circle_radius(p: Point, disk_r_sq: Q, prior_points) -> Q:
    """r_i: rational, below the disk radius, with the circle disjoint from all
    lines a-b and b-c(a) over pairs of prior Maker points."""
    prior = [q for q in prior_points if q != p]
    r = sqrt_below(disk_r_sq) / 2
    for _ in range(400):
        ok = True
        r2 = r * r
        for i, a in enumerate(prior):
            for j, b in enumerate(prior):
                if i == j:
                    continue
                if j > i and not r2 < _line_distance_sq(p, a, b):
                    ok = False
                    break
                if not _circle_clear_of_witness_line(p, a, b, disk_r_sq, r):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return r
        r /= 2
    raise RetryExhausted("no admissible circle radius")


def _tan_half_point(center: Point, r: Q, t: Q) -> Point:
    den = 1 + t * t
    return Point(center.x + r * (1 - t * t) / den, center.y + r * 2 * t / den)


def _angle_budget(lam: int, center: Point, others, rng: random.Random) -> PerturbationBudget:
    """Float-estimated epsilon witness; every use is verified exactly later."""
    cap = 3.0 / (20 * lam) * 0.9
    est = cap
    angles = []
    for q in others:
        w = q - center
        angles.append(math.atan2(float(w.y), float(w.x)))
    sector = 2 * math.pi / lam
    vals = []
    for i in range(len(angles)):
        for j in range(len(angles)):
            if i == j:
                continue
            d = abs(angles[i] - angles[j]) % sector
            vals.extend([d, sector - d])
    pos = [v for v in vals if v > 1e-12]
    if pos:
        est = min(est, min(pos) / 4)
    est = max(est, 1e-9)
    u = dyadic_below(min(math.tan(est / 2), cap), bits=30)
    return PerturbationBudget(u, lam)


def place_perturbed_polygon(
    center: Point,
    circle_radius: Q,
    budget: PerturbationBudget,
    other_maker_points,
    board: PointSet,
    rng: random.Random,
) -> tuple[list, PerturbationBudget]:
    """lambda rational points on the circle satisfying, exactly:

    - consecutive central angles: all but one <= 2*pi/lambda, the last one
      strictly between 2*pi/lambda and 2*pi/lambda + epsilon;
    - every guard's angle to the ray from the center through any other Maker
      point exceeds epsilon;
    - general position against the whole board.
    """
    lam = budget.lam
    gap_thr = AngleThreshold.two_pi_over(lam)
    others = [q for q in other_maker_points if q != center]
    for attempt in range(200):
        if attempt and attempt % 25 == 0:
            budget = budget.halved()
        eps = 2 * math.atan(float(Fraction(budget.u.numerator, budget.u.denominator)))
        upper_thr = budget.gap_upper_threshold()
        eps_thr = budget.threshold()
        phi0 = rng.uniform(0, 2 * math.pi)
        guards = []
        for j in range(1, lam + 1):
            theta = phi0 + (j - 1) * 2 * math.pi / lam + eps / (2 * j)
            theta = math.remainder(theta, 2 * math.pi)
            t = Fraction(math.tan(theta / 2)).limit_denominator(1 << 24)
            guards.append(_tan_half_point(center, circle_radius, Q(t)))
        if len(set(guards)) != lam:
            continue
        if not _verify_constellation(center, guards, others, gap_thr, upper_thr, eps_thr):
            continue
        probe_ok = True
        tentative = []
        for g in guards:
            if board.collinearity_conflict(g, extra=tentative) is not None:
                probe_ok = False
                break
            tentative.append(g)
        if probe_ok:
            return guards, budget
    raise RetryExhausted("no admissible perturbed polygon found")


def _ccw_sorted(center: Point, guards):
    import functools

    ref = Point(Q(1), Q(0))
    return sorted(
        guards,
        key=functools.cmp_to_key(lambda g1, g2: ccw_cmp(ref, g1 - center, g2 - center)),
    )


def _verify_constellation(center, guards, others, gap_thr, upper_thr, eps_thr) -> bool:
    lam = len(guards)
    ordered = _ccw_sorted(center, guards)
    over = []
    for i in range(lam):
        a = ordered[i]
        b = ordered[(i + 1) % lam]
        ua, ub = a - center, b - center
        if ua.cross(ub) <= 0:
            if lam == 2:
                return False
            # gap of at least pi: certainly exceeds every supported threshold
            over.append(i)
            continue
        c = cmp_angle(center, a, b, gap_thr)
        if c > 0:
            over.append(i)
    if len(over) != 1:
        return False
    i = over[0]
    a, b = ordered[i], ordered[(i + 1) % lam]
    if (a - center).cross(b - center) <= 0:
        return False  # the big gap must stay below pi for the threshold test
    if cmp_angle(center, a, b, upper_thr) >= 0:
        return False
    for g in guards:
        for q in others:
            if cmp_angle(center, g, q, eps_thr) <= 0:
                return False
    return True


def star_property_holds(center: Point, guards, maker_points, center_order: int, orders, lam: int) -> bool:
    """Exact check of the angular-domain property at one Maker point.

    maker_points/orders: all Maker points with their placement indices;
    the property quantifies over pairs (x earlier than center, y any).
    """
    thr = AngleThreshold.two_pi_over(lam)
    for x, ox in zip(maker_points, orders):
        if ox >= center_order or x == center:
            continue
        for y, oy in zip(maker_points, orders):
            if y == center or y == x:
                continue
            if not angle_exceeds(center, x, y, thr):
                continue
            if not any(point_in_angular_domain(center, x, y, g) for g in guards):
                return False
    return True


class PerturbedPolygonBreaker(BaseStrategy):
    """Fence every Maker point inside a perturbed lambda-gon (bias 1:2*lambda)."""

    name = "perturbed-polygon"

    def __init__(self, lam: int = 6):
        if lam < 3:
            raise ValueError("lambda must be at least 3")
        self.lam = lam

    def reset(self, config, owner: Owner):
        super().reset(config, owner)
        # both the gap threshold and its epsilon-shifted version must be
        # expressible; raises UnsupportedThreshold early otherwise
        shifted_two_pi_over(self.lam, 1, 0)
        self.registry = DiskRegistry(self.lam)
        self._seen = 0
        self._junk = 0

    def _far_point(self, board, pending) -> Point:
        for _ in range(200):
            self._junk += 1
            angle = self.rng.uniform(0, 2 * math.pi)
            rad = 1 << 22
            p = Point(
                Q(int(rad * math.cos(angle) * 64 + self.rng.randrange(0, 64)), 64),
                Q(int(rad * math.sin(angle) * 64 + self.rng.randrange(0, 64)), 64),
            )
            if board.collinearity_conflict(p, extra=pending) is None:
                return p
        raise RetryExhausted("no far point found")

    def _fence(self, board, center_idx: int, replacing: bool, pending) -> list:
        maker_idx = [i for i, o in enumerate(board.owners) if o is Owner.MAKER]
        center = board.points[center_idx]
        others = [board.points[i] for i in maker_idx if i != center_idx]
        if replacing:
            old = self.registry.entries[center_idx]
            rsq = (old.invader - center).norm_sq() / 4  # type: ignore[attr-defined]
            prior = [board.points[i] for i in maker_idx if i < center_idx]
        else:
            rsq = choose_disk_radius_sq(self.registry, center)
            prior = others
        if not prior:
            rsq = Q(1) if not replacing else rsq
            r = Q(1, 4)
            if r * r >= rsq:
                r = sqrt_below(rsq) / 2
        else:
            r = choose_circle_radius(center, rsq, prior)
        budget = _angle_budget(self.lam, center, others, self.rng)
        probe = _PendingBoard(board, pending)
        guards, budget = place_perturbed_polygon(center, r, budget, others, probe, self.rng)
        self.registry.entries[center_idx] = DiskEntry(
            center_idx, center, rsq, r, guards, budget
        )
        return guards

    def propose(self, state, count: int):
        board = state.board
        out: list[Point] = []
        new_maker = [
            i
            for i in range(self._seen, len(board.points))
            if board.owners[i] is Owner.MAKER
        ]
        self._seen = len(board.points)
        for idx in new_maker:
            p = board.points[idx]
            invaded = self.registry.invaded_by(p)
            if invaded is not None and len(out) + 2 * self.lam <= count:
                entry = self.registry.entries[invaded]
                entry.invader = p  # type: ignore[attr-defined]
                out.extend(self._fence(board, invaded, True, out))
            if len(out) + self.lam <= count:
                out.extend(self._fence(board, idx, False, out))
        while len(out) < count:
            out.append(self._far_point(board, out))
        return out


class _PendingBoard:
    """Board view that also rejects collinearity with pending placements."""

    def __init__(self, board: PointSet, pending):
        self.board = board
        self.pending = list(pending)

    def collinearity_conflict(self, p: Point, extra=()):
        return self.board.collinearity_conflict(p, extra=list(self.pending) + list(extra))


class OneRoundDoubleBreaker(BaseStrategy):
    """Online adaptation of the one-round doubling construction."""

    name = "one-round-double"

    def reset(self, config, owner: Owner):
        super().reset(config, owner)
        self._seen = 0

    def propose(self, state, count: int):
        board = state.board
        maker_pts = board.points_of(Owner.MAKER)
        out: list[Point] = []
        if len(maker_pts) >= 3:
            try:
                doubled = one_round_breaker(maker_pts)
                fresh = [p for p in doubled[-2:] if board.collinearity_conflict(p, extra=out) is None]
                out.extend(fresh[: count])
            except (DegenerateInput, RetryExhausted):
                pass
        while len(out) < count:
            out.extend(generic_points(self.rng, board, 1))
        return out[:count]
