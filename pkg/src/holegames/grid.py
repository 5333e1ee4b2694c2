"""One-round grid construction at desk scale: the projected, rotated,
parabolically bent lattice whose sibling lines become long thin t-holes.

The construction maps [t]^d (d = 3*d0) to the plane by
phi^tau(z) = sum_j omega^j(tau(pi(z_j))), where pi is a generic projection of
each coordinate block, omega an exact rational rotation close to 2*pi/3, and
tau(x, y) = (x, y + gamma*x^2) the bending map.  All certified properties are
decided exactly on the rational images; the astronomically large dimensions a
full density argument would need are out of scope, so hole extraction reports
its accounting when no surviving sibling line exists at this scale.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .board import Owner, PointSet, Rule
from .geom import (
    CCW,
    COLLINEAR,
    CW,
    Point,
    convex_hull,
    convex_polygon_intersection,
    orientation,
    point_in_convex_polygon,
)
from .oracle import verify_hole
from .rationals import Q, fmt_q, to_q


class GenericityFailure(ValueError):
    """The projection produced accidental coincidences; re-randomize it."""


def tau(p: Point, gamma) -> Point:
    """The bending map (x, y) -> (x, y + gamma*x^2)."""
    g = to_q(gamma)
    return Point(p.x, p.y + g * p.x * p.x)


def _near_rotation_matrix(a: Q, b: Q):
    """Rational scaled rotation [[a, -b], [b, a]] with (a, b) close to
    (cos, sin) of 2*pi/3.

    Exact algebraic relations must be dodged, or whole lattice planes collapse
    onto image lines: a^2 + b^2 = 1 makes I + W^2 parallel to W, and 2a equal
    to a small rational makes combinations like W + W^2 real multiples of the
    identity.  Both entries therefore carry odd numerators over 2^24, so no
    small-coefficient relation in the field Q[a + b*i] can vanish; the build
    re-checks every such relation exactly anyway.
    """
    a = to_q(a)
    b = to_q(b)
    return ((a, -b), (b, a))


def _mat_mul(m1, m2):
    return (
        (m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0], m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1]),
        (m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0], m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1]),
    )


def _mat_apply(m, p: Point) -> Point:
    return Point(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)


@dataclass
class GridConfig:
    """Parameters of the construction; t odd (t = 2k-1), d = 3*d0."""

    t: int
    d: int
    seed: int = 0
    pi_map: list = field(default_factory=list)  # d0 vectors (images of e_i)
    gamma: Q = None
    omega_a: Q = None  # diagonal entry of the near-rotation matrix
    omega_s: Q = None  # off-diagonal entry of the near-rotation matrix

    def __post_init__(self):
        if self.t % 2 == 0 or self.t < 3:
            raise ValueError("t must be odd and at least 3")
        if self.d % 3 != 0 or self.d < 3:
            raise ValueError("d must be a positive multiple of 3")
        rng = random.Random(self.seed)
        d0 = self.d // 3
        if not self.pi_map:
            # near-horizontal columns: |y/x| <= 1/16 is well inside tan(pi/20)
            self.pi_map = [
                Point(Q(1), Q((2 * rng.randrange(-32, 32) + 1), 1024))
                for _ in range(d0)
            ]
        for v in self.pi_map:
            if abs(v.y / v.x) > Q(1, 7):
                raise ValueError("projection column too far from horizontal")
        if self.omega_a is None:
            m = (-(1 << 23) + 2 * rng.randrange(-512, 512)) | 1  # odd, near -2^23
            self.omega_a = Q(m, 1 << 24)
        if self.omega_s is None:
            m = (int(math.sqrt(3) / 2 * (1 << 24)) + 2 * rng.randrange(-512, 512)) | 1
            self.omega_s = Q(m, 1 << 24)
        if self.gamma is None:
            self.gamma = Q(1, 8)  # shrunk during build until the checks pass

    @property
    def d0(self) -> int:
        return self.d // 3

    def omega_angle_error(self) -> float:
        """Float diagnostic: angle of the near-rotation vs 2*pi/3 (radians).

        Never used in decisions; the properties the angle feeds are verified
        exactly downstream.
        """
        s = float(Fraction(self.omega_s.numerator, self.omega_s.denominator))
        a = float(Fraction(self.omega_a.numerator, self.omega_a.denominator))
        return abs(math.atan2(s, a) - 2 * math.pi / 3)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "d": self.d,
            "seed": self.seed,
            "pi_map": [[fmt_q(v.x), fmt_q(v.y)] for v in self.pi_map],
            "gamma": fmt_q(self.gamma),
            "omega_a": fmt_q(self.omega_a),
            "omega_s": fmt_q(self.omega_s),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridConfig":
        return cls(
            t=data["t"],
            d=data["d"],
            seed=data.get("seed", 0),
            pi_map=[Point(x, y) for x, y in data.get("pi_map", [])],
            gamma=to_q(data["gamma"]) if "gamma" in data else None,
            omega_a=to_q(data["omega_a"]) if "omega_a" in data else None,
            omega_s=to_q(data["omega_s"]) if "omega_s" in data else None,
        )


def grid_lines(t: int, d: int):
    """All maximal collinear t-sets of [t]^d: directions in {-1,0,1}^d
    (canonical sign), anchored so that t steps stay inside the box."""
    dirs = []
    for v in itertools.product((-1, 0, 1), repeat=d):
        if all(c == 0 for c in v):
            continue
        first = next(c for c in v if c != 0)
        if first == 1:
            dirs.append(v)
    lines = []
    for v in dirs:
        ranges = []
        for c in v:
            if c == 1:
                ranges.append((1,))
            elif c == -1:
                ranges.append((t,))
            else:
                ranges.append(tuple(range(1, t + 1)))
        for start in itertools.product(*ranges):
            pts = tuple(
                tuple(start[i] + j * v[i] for i in range(d)) for j in range(t)
            )
            lines.append((v, pts))
    return lines


@dataclass
class PlaneLine:
    """An infinite plane line through the images of one grid line."""

    anchor: Point
    through: Point
    cells: tuple  # the t lattice tuples on it
    direction_support: tuple  # blocks the grid direction touches

    def dir(self) -> Point:
        return self.through - self.anchor

    def dist_sq(self, p: Point) -> Q:
        d = self.dir()
        cr = d.cross(p - self.anchor)
        return cr * cr / d.norm_sq()

    def contains(self, p: Point) -> bool:
        return self.dir().cross(p - self.anchor) == 0


@dataclass
class GridPointSet:
    config: GridConfig
    flat: dict  # lattice tuple -> unbent image (phi)
    bent: dict  # lattice tuple -> bent image (phi^tau)
    lines: list  # PlaneLine over the unbent images
    alpha_sq: Q = Q(0)
    beta_sq: Q = Q(0)
    sibling_holes: dict = field(default_factory=dict)  # j -> list of cell-tuples
    crossings: dict = field(default_factory=dict)  # Point -> set of line ids

    def bent_points(self):
        return list(self.bent.values())

    def bent_board(self) -> PointSet:
        return PointSet.from_points(self.bent_points(), Owner.MAKER)


def _phi_maps(cfg: GridConfig):
    d0 = cfg.d0
    rot1 = _near_rotation_matrix(cfg.omega_a, cfg.omega_s)
    rot2 = _mat_mul(rot1, rot1)
    mats = (((Q(1), Q(0)), (Q(0), Q(1))), rot1, rot2)

    def phi(z, bend):
        total = Point(Q(0), Q(0))
        for j in range(3):
            block = z[j * d0 : (j + 1) * d0]
            raw = Point(Q(0), Q(0))
            for i, coord in enumerate(block):
                raw = raw + cfg.pi_map[i].scale(coord)
            if bend:
                raw = tau(raw, cfg.gamma)
            total = total + _mat_apply(mats[j], raw)
        return total

    return phi


def _line_support(cfg: GridConfig, v) -> tuple:
    d0 = cfg.d0
    return tuple(j for j in range(3) if any(v[j * d0 + i] != 0 for i in range(d0)))


def build_grid_pointset(cfg: GridConfig) -> GridPointSet:
    """Construct the images and certify every geometric property exactly."""
    t, d = cfg.t, cfg.d
    cells = list(itertools.product(range(1, t + 1), repeat=d))
    phi = _phi_maps(cfg)

    flat = {}
    seen = {}
    for z in cells:
        p = phi(z, bend=False)
        if p in seen:
            raise GenericityFailure("phi collision between %s and %s" % (z, seen[p]))
        seen[p] = z
        flat[z] = p

    raw_lines = grid_lines(t, d)
    lines = []
    online = {}
    for li, (v, pts) in enumerate(raw_lines):
        pl = PlaneLine(flat[pts[0]], flat[pts[1]], pts, _line_support(cfg, v))
        lines.append(pl)
        for z in pts:
            online.setdefault(z, set()).add(li)

    # genericity: image collinearity must be inherited from the lattice
    # (collinear lattice triples off the t-point lines are fine in the
    # auxiliary flat set; the bending handles them later)
    pts_list = [flat[z] for z in cells]
    cell_list = cells
    n = len(pts_list)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orientation(pts_list[i], pts_list[j], pts_list[k]) == COLLINEAR:
                    if not _lattice_collinear(cell_list[i], cell_list[j], cell_list[k]):
                        raise GenericityFailure(
                            "accidental collinearity %s %s %s"
                            % (cell_list[i], cell_list[j], cell_list[k])
                        )

    # pairwise crossings; no three lines may meet outside the grid image
    crossings: dict = {}
    flat_values = set(flat.values())
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            x = _intersect(lines[i], lines[j])
            if x is None:
                continue
            crossings.setdefault(x, set()).update((i, j))
    for x, through in crossings.items():
        if len(through) > 2 and x not in flat_values:
            raise GenericityFailure("three lines concurrent off the grid at %r" % (x,))

    # alpha: minimum crossing-to-line distance (squared, exact)
    alpha_sq = None
    for x in crossings:
        for pl in lines:
            if pl.contains(x):
                continue
            d2 = pl.dist_sq(x)
            if alpha_sq is None or d2 < alpha_sq:
                alpha_sq = d2
    if alpha_sq is None:
        raise GenericityFailure("no crossings; degenerate configuration")

    # beta: strip width so that strip intersections nest inside the disks
    # (a point within beta of two lines at angle theta is within
    # 2*beta/sin(theta) of their crossing, so beta^2 <= alpha^2*sin^2/36 works)
    beta_sq = alpha_sq / 36
    for i in range(len(lines)):
        di = lines[i].dir()
        for j in range(i + 1, len(lines)):
            dj = lines[j].dir()
            cr = di.cross(dj)
            if cr == 0:
                continue
            sin_sq = cr * cr / (di.norm_sq() * dj.norm_sq())
            cand = alpha_sq * sin_sq / 36
            if cand < beta_sq:
                beta_sq = cand

    g = GridPointSet(cfg, flat, {}, lines, alpha_sq, beta_sq, {}, crossings)

    # gamma: shrink until every bent image hugs its lines and the parabola
    # tangents stay within the verified angular bound of the lines
    for _ in range(200):
        phi = _phi_maps(cfg)
        bent = {z: phi(z, bend=True) for z in cells}
        if len(set(bent.values())) == len(cells) and _bend_ok(cfg, g, bent, online):
            g.bent = bent
            break
        cfg.gamma /= 2
    else:
        raise GenericityFailure("no admissible bending strength found")

    board = g.bent_board()
    gp = board.points
    for i in range(len(gp)):
        for j in range(i + 1, len(gp)):
            for k in range(j + 1, len(gp)):
                if orientation(gp[i], gp[j], gp[k]) == COLLINEAR:
                    raise GenericityFailure("bent images not in general position")

    # sibling holes: grid lines supported in a single coordinate block
    for j in range(3):
        g.sibling_holes[j] = [
            pl.cells for pl in lines if pl.direction_support == (j,)
        ]
    for j in range(3):
        for cells_j in g.sibling_holes[j]:
            hole = [g.bent[z] for z in cells_j]
            if not verify_hole(board, hole, t, Rule.MONOCHROMATIC):
                raise GenericityFailure("sibling line is not a t-hole")
    return g


def _lattice_collinear(z1, z2, z3) -> bool:
    u = tuple(b - a for a, b in zip(z1, z2))
    v = tuple(b - a for a, b in zip(z1, z3))
    d = len(u)
    for i in range(d):
        for j in range(i + 1, d):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


def _intersect(l1: PlaneLine, l2: PlaneLine):
    d1 = l1.dir()
    d2 = l2.dir()
    den = d1.cross(d2)
    if den == 0:
        return None
    s = (l2.anchor - l1.anchor).cross(d2) / den
    return l1.anchor + d1.scale(s)


def _bend_ok(cfg: GridConfig, g: GridPointSet, bent, online) -> bool:
    # (a) bent images stay within the strip of every line through them
    for z, lids in online.items():
        b = bent[z]
        for li in lids:
            if not g.lines[li].dist_sq(b) < g.beta_sq:
                return False
    # (b) parabola tangents: within atan(1/7) of the line direction, which is
    # a verified rational bound inside the nominal pi/20
    d0 = cfg.d0
    rot1 = _near_rotation_matrix(cfg.omega_a, cfg.omega_s)
    rot2 = _mat_mul(rot1, rot1)
    mats = (((Q(1), Q(0)), (Q(0), Q(1))), rot1, rot2)
    for pl in g.lines:
        v = tuple(
            pl.cells[1][i] - pl.cells[0][i] for i in range(cfg.d)
        )
        for z in pl.cells:
            tangent = Point(Q(0), Q(0))
            for j in range(3):
                block_z = z[j * d0 : (j + 1) * d0]
                block_v = v[j * d0 : (j + 1) * d0]
                x = sum((cfg.pi_map[i].x * block_z[i] for i in range(d0)), Q(0))
                dx = sum((cfg.pi_map[i].x * block_v[i] for i in range(d0)), Q(0))
                dy = sum((cfg.pi_map[i].y * block_v[i] for i in range(d0)), Q(0))
                tangent = tangent + _mat_apply(
                    mats[j], Point(dx, dy + 2 * cfg.gamma * x * dx)
                )
            dline = pl.dir()
            dot = tangent.dot(dline)
            cr = tangent.cross(dline)
            if dot == 0 or 49 * cr * cr > dot * dot:
                return False
    return True


def verify_no_colorful_triple(g: GridPointSet) -> bool:
    """Hulls of three holes, one per sibling family, meet in at most one
    shared vertex; decided by exact convex clipping with a box prefilter."""
    hulls = {}
    boxes = {}
    for j in range(3):
        hulls[j] = []
        for cells_j in g.sibling_holes[j]:
            pts = [g.bent[z] for z in cells_j]
            hull = convex_hull(pts)
            hulls[j].append((set(cells_j), hull))
            xs = [p.x for p in hull]
            ys = [p.y for p in hull]
            boxes[id(hull)] = (min(xs), max(xs), min(ys), max(ys))

    def overlap(h1, h2):
        b1, b2 = boxes[id(h1)], boxes[id(h2)]
        return not (b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2])

    for cells0, h0 in hulls[0]:
        for cells1, h1 in hulls[1]:
            if not overlap(h0, h1):
                continue
            first = convex_polygon_intersection(h0, h1)
            if not first:
                continue
            for cells2, h2 in hulls[2]:
                if not overlap(h0, h2) or not overlap(h1, h2):
                    continue
                inter = convex_polygon_intersection(first, h2) if len(first) >= 3 else [
                    v for v in first if point_in_convex_polygon(h2, v)
                ]
                if not inter:
                    continue
                distinct = []
                for v in inter:
                    if not any(v == w for w in distinct):
                        distinct.append(v)
                if len(distinct) > 1:
                    return False
                v = distinct[0]
                shared = cells0 & cells1 & cells2
                if not any(g.bent[z] == v for z in shared):
                    return False
    return True


@dataclass
class ProofObligationReport:
    """Accounting of the extraction when no sibling line fully survives."""

    params: dict
    b1: int
    b2: int
    holes_hit_twice: int
    b3: int
    blocked_centers: int
    survivors_per_family: list
    note: str = "density step out of scope at desk scale"


def classify_blockers(g: GridPointSet, breaker_points):
    """Split B into disk-dwellers (B1) and strip-dwellers (B2)."""
    third = g.alpha_sq / 9
    b1, b2 = [], []
    for b in breaker_points:
        if any((b - s).norm_sq() <= third for s in g.flat.values()):
            b1.append(b)
        else:
            b2.append(b)
    return b1, b2


def strip_memberships(g: GridPointSet, p: Point):
    """Indices of lines whose beta-strip contains p (at most two off-grid)."""
    return [li for li, pl in enumerate(g.lines) if pl.dist_sq(p) < g.beta_sq]


def extract_k_hole(g: GridPointSet, breaker_points, k: int, eps=None):
    """Replay the accounting: surviving sibling families, then the first-k /
    last-k split of a surviving line.  Returns a list of k bent points, or a
    ProofObligationReport when no sibling line fully survives."""
    t = g.config.t
    if t != 2 * k - 1:
        raise ValueError("extraction needs t = 2k-1")
    B = list(breaker_points)
    b1, b2 = classify_blockers(g, B)
    third = g.alpha_sq / 9

    all_holes = [(j, cells) for j in range(3) for cells in g.sibling_holes[j]]
    hulls = {id(cells): convex_hull([g.bent[z] for z in cells]) for _, cells in all_holes}

    hit_twice = []
    for j, cells in all_holes:
        hull = hulls[id(cells)]
        inside = [b for b in b2 if point_in_convex_polygon(hull, b)]
        if len(inside) >= 2:
            hit_twice.append((j, cells))

    # B3: one exact surrogate point per doubly-hit hole, inside the hull and
    # inside some vertex disk
    b3 = []
    for j, cells in hit_twice:
        hull = hulls[id(cells)]
        z0 = cells[0]
        sflat, sbent = g.flat[z0], g.bent[z0]
        centroid = Point(
            sum((p.x for p in hull), Q(0)) / len(hull),
            sum((p.y for p in hull), Q(0)) / len(hull),
        )
        lamb = Q(1, 2)
        for _ in range(200):
            cand = Point(
                sbent.x + (centroid.x - sbent.x) * lamb,
                sbent.y + (centroid.y - sbent.y) * lamb,
            )
            if (cand - sflat).norm_sq() <= third and point_in_convex_polygon(
                hull, cand, closed=False
            ):
                b3.append(cand)
                break
            lamb /= 2
        else:
            raise GenericityFailure("could not realize a surrogate blocker")

    marks = b1 + b3
    blocked = set()
    for z, s in g.flat.items():
        near = [m for m in marks if (m - s).norm_sq() <= third]
        if len(near) >= 2:
            blocked.add(z)

    survivors = {0: set(), 1: set(), 2: set()}
    for z, s in g.flat.items():
        if z in blocked:
            continue
        near = [m for m in marks if (m - s).norm_sq() <= third]
        for j in range(3):
            ok = True
            for m in near:
                for cells in g.sibling_holes[j]:
                    if point_in_convex_polygon(hulls[id(cells)], m):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                survivors[j].add(z)

    for j in sorted(range(3), key=lambda jj: -len(survivors[jj])):
        for cells in g.sibling_holes[j]:
            if all(z in survivors[j] for z in cells):
                hole = [g.bent[z] for z in cells]
                hull = hulls[id(cells)]
                inside = [b for b in B if point_in_convex_polygon(hull, b)]
                if len(inside) > 1:
                    continue
                first, last = hole[:k], hole[-k:]
                for side in (first, last):
                    side_hull = convex_hull(side)
                    if not any(point_in_convex_polygon(side_hull, b) for b in inside):
                        return side
    return ProofObligationReport(
        params={"t": t, "k": k, "eps": str(eps), "delta_dhj": "eps/6"},
        b1=len(b1),
        b2=len(b2),
        holes_hit_twice=len(hit_twice),
        b3=len(b3),
        blocked_centers=len(blocked),
        survivors_per_family=[len(survivors[j]) for j in range(3)],
    )


def grid_to_svg(g: GridPointSet, path: str) -> None:
    from .svgout import render_grid

    render_grid(g, path)


def save_config(cfg: GridConfig, path: str) -> None:
    with open(path, "w") as f:
        json.dump(cfg.to_json(), f, indent=1)


def load_config(path: str) -> GridConfig:
    with open(path) as f:
        return GridConfig.from_json(json.load(f))
