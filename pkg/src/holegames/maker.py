"""Maker strategies that construct families of parallel k-strips.

Three variants share one phase machine:

- monochromatic 1:1   -- pairs of input strips, one connector point placed on
  a halfline between the two cones, replacement rule for boundary hits, claim
  a clean side per pair;
- monochromatic 1:s   -- groups of 2s input strips, connector to the left of
  the whole group inside every member's minus-cone; blocked cones are
  recovered at claim time by re-sweeping to the first board point;
- bichromatic 1:s, s<2 -- pairs of Maker-only strips; Breaker points cannot
  become vertices, so instead of replacements the strip direction is rotated
  at each phase end until every Breaker point counts against at most one
  candidate region, then clean sides are claimed.

Every claimed strip is re-verified exactly against the full board before it
enters the inventory.  A failed structural guarantee raises InvariantBroken;
by construction that is an engine bug, never a legal game state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .baselines import generic_points
from .board import Owner, Rule
from .geom import CCW, Direction, Point, orientation, point_in_cone
from .rationals import Q, to_q
from .strips import (
    DegenerateCone,
    Strip,
    StripFamily,
    cone_of_points,
    is_k_strip,
    pick_delta,
    proj,
    region_side,
    sort_by_proj,
)


class InvariantBroken(RuntimeError):
    """A structural guarantee of the construction failed (engine bug)."""


def round_bound(k: int, t: int, s=1) -> Q:
    """Exact bound on Maker rounds to build t parallel k-strips at bias 1:s.

    Consumers needing an integer number of rounds take the ceiling.
    """
    s = to_q(s)
    if k < 1 or t < 1 or s < 1:
        raise ValueError("need k >= 1, t >= 1, s >= 1")
    if k == 1:
        return Q(t) / (s + 1)
    f = (4 * s) ** (k - 2)
    return (f / (s + 1) + (f - 1) / (4 * s - 1)) * 2 * t


@dataclass
class RoundBound:
    k: int
    t: int
    s: Q
    bound: Q

    @classmethod
    def compute(cls, k: int, t: int, s=1) -> "RoundBound":
        return cls(k, t, to_q(s), round_bound(k, t, s))


def _ceil_q(x) -> int:
    q = to_q(x)
    return -((-q.numerator) // q.denominator)


@dataclass
class _Group:
    members: list  # list of list[Point], mutated by replacements
    connector: Point | None = None
    dead: set = field(default_factory=set)  # member indices with blocked cones


@dataclass
class MakerStripState:
    """Recursion descriptor: strip counts per level plus the working phase."""

    target_k: int
    target_t: int
    speed_s: Q
    level: int  # strip size currently under construction (1 = base)
    needed: dict  # level -> number of strips to claim there
    inventory: list = field(default_factory=list)  # tuples of Points
    groups: list = field(default_factory=list)
    group_cursor: int = 0
    base_placed: int = 0
    damaged: set = field(default_factory=set)
    next_inventory: int = 0
    pair_rounds: dict = field(default_factory=dict)


def _v_below(b: Point, q: Point, vv: Point) -> bool:
    w = b - q
    return w.cross(vv) == 0 and w.dot(vv) > 0


class StripsMakerStrategy:
    """Shared machinery for the strip-building Maker strategies."""

    name = "strips-1-1"

    def __init__(self, t: int = 1):
        self.t = t

    # -- strategy protocol --------------------------------------------------

    def reset(self, config, owner: Owner):
        if owner is not Owner.MAKER:
            raise ValueError("this is a Maker strategy")
        if config.maker_speed != 1:
            raise ValueError("strip strategies assume Maker speed 1")
        self.config = config
        self.rng = random.Random((config.seed << 1) ^ 0xA5)
        self.v = Direction(0, -1)
        self.finished = False
        self.result: StripFamily | None = None
        self.diagnostics: list[dict] = []
        self.rounds_at_finish: int | None = None
        self._seen = 0
        self._phase_bullet_start = 0
        self.state = self._plan(config)

    def propose(self, state, count: int):
        board = state.board
        self._sync(board)
        while not self.finished:
            st = self.state
            if st.level <= 1:
                if self._base_complete(board):
                    self._finish_base(board)
                    continue
                return self._pad(self._base_point(board), board, count)
            if st.group_cursor < self._group_total():
                return self._pad(self._connector_move(board), board, count)
            self._claim_phase(board)
        return [self._far_safe_point(board) for _ in range(count)]

    def _pad(self, p: Point, board, count: int):
        if count == 1:
            return [p]
        return [p] + generic_points(self.rng, board, count - 1)

    # -- planning -----------------------------------------------------------

    def _strategy_bias(self) -> Q:
        return Q(1)

    def _plan(self, config) -> MakerStripState:
        k, t = config.k, self.t
        s = self._strategy_bias()
        needed = {k: t}
        for lvl in range(k - 1, 1, -1):
            needed[lvl] = 4 * int(s) * needed[lvl + 1]
        return MakerStripState(target_k=k, target_t=t, speed_s=s, level=1, needed=needed)

    def _group_size(self) -> int:
        return 2

    def _group_total(self) -> int:
        return 2 * self.state.needed[self.state.level]

    # -- base phase (monochromatic: pair up the whole board) -----------------

    def _base_complete(self, board) -> bool:
        return len(board) >= 2 * self.state.needed[2]

    def _base_point(self, board) -> Point:
        st = self.state
        x0 = 8 * st.base_placed
        for _ in range(200):
            p = Point(
                Q(x0 * 64 + self.rng.randrange(0, 33), 64),
                Q(self.rng.randrange(-128, 129), 64),
            )
            if board.collinearity_conflict(p) is None:
                st.base_placed += 1
                return p
        raise InvariantBroken("could not place a base point in general position")

    def _finish_base(self, board):
        st = self.state
        projs = [proj(p, self.v) for p in board.points]
        if len(set(projs)) != len(projs):
            delta = pick_delta(
                [lambda d: len({proj(p, d) for p in board.points}) == len(board.points)],
                base=self.v.dx,
            )
            self.v = Direction(delta, -1)
        ordered = sort_by_proj(board.points, self.v)
        inventory = []
        for i in range(0, len(ordered) - 1, 2):
            pair = (ordered[i], ordered[i + 1])
            if not is_k_strip(pair, self.v, board.points):
                raise InvariantBroken("consecutive pair failed the 2-strip check")
            inventory.append(pair)
        if len(inventory) < st.needed[2]:
            raise InvariantBroken("not enough base pairs")
        st.inventory = inventory[: st.needed[2]]
        st.level = 3
        self._start_level(board)

    # -- level phases ---------------------------------------------------------

    def _start_level(self, board):
        st = self.state
        size = self._group_size()
        total = self._group_total()
        need = size * total
        if len(st.inventory) < need:
            raise InvariantBroken(
                "inventory underflow at level %d: %d < %d" % (st.level, len(st.inventory), need)
            )
        st.groups = [
            _Group(members=[list(st.inventory[i * size + j]) for j in range(size)])
            for i in range(total)
        ]
        st.group_cursor = 0
        self._phase_bullet_start = len(board.points)

    def _connector_move(self, board) -> Point:
        st = self.state
        g = st.groups[st.group_cursor]
        cones = self._connector_cones(g, board)
        st.group_cursor += 1
        if not cones:
            # every relevant cone is blocked: the group is sacrificed, but the
            # round still has to be played
            return generic_points(self.rng, board, 1)[0]
        lo, hi = self._gap_for_group(g)
        if lo >= hi:
            raise InvariantBroken("no projection gap for the connector line")
        c = self._pick_line(board, lo, hi)
        p = self._descend_on_line(board, c, [cone for _, cone in cones])
        # a candidate may already be dead (Breaker inside the member's own
        # region); the pigeonhole absorbs it, so nothing is asserted here
        g.connector = p
        g.dead = set(range(len(g.members))) - {mi for mi, _ in cones}
        return p

    def _gap_for_group(self, g: _Group) -> tuple:
        lo = max(proj(p, self.v) for p in g.members[0])
        hi = min(proj(p, self.v) for p in g.members[1])
        return lo, hi

    def _connector_cones(self, g: _Group, board):
        out = []
        try:
            out.append((0, cone_of_points(g.members[0], self.v, board.points, "plus")))
        except DegenerateCone:
            pass
        try:
            out.append((1, cone_of_points(g.members[1], self.v, board.points, "minus")))
        except DegenerateCone:
            pass
        if len(out) < 2:
            # a one-sided pair still needs its connector between the members
            return out
        return out

    def _pick_line(self, board, lo, hi) -> Q:
        taken = {proj(p, self.v) for p in board.points}
        c = (lo + hi) / 2
        for _ in range(128):
            if c not in taken and lo < c < hi:
                return c
            c = (c + hi) / 2
        raise InvariantBroken("could not place the connector line")

    def _descend_on_line(self, board, c: Q, cones) -> Point:
        vv = self.v.vec()
        base = self.v.perp().vec().scale(c / vv.norm_sq())
        depth0 = max(p.dot(vv) for p in board.points) - base.dot(vv)
        step = max(Q(1), depth0 + 1)
        for _ in range(200):
            q = base + vv.scale(step / vv.norm_sq())
            ok = all(point_in_cone(cone, q, "open") for cone in cones)
            if ok and board.collinearity_conflict(q) is None:
                return q
            step *= 2
        raise InvariantBroken("connector placement did not converge")

    # -- bullet processing ------------------------------------------------------

    def _sync(self, board):
        st = self.state
        vv = self.v.vec()
        for i in range(self._seen, len(board.points)):
            if board.owners[i] is not Owner.BREAKER:
                continue
            if st.level >= 3 and st.groups:
                b = board.points[i]
                for g in st.groups:
                    self._apply_replacements(g, b, vv)
        self._seen = len(board.points)

    def _apply_replacements(self, g: _Group, b: Point, vv: Point):
        if g.connector is not None and _v_below(b, g.connector, vv):
            g.connector = b
        for mi, member in enumerate(g.members):
            member.sort(key=lambda p: proj(p, self.v))
            for end in self._replaceable_ends(mi):
                if _v_below(b, member[end], vv):
                    member[end] = b

    def _replaceable_ends(self, member_index: int):
        # pair phase: outer ends only; the inner ends sit under the roof
        return (0,) if member_index == 0 else (-1,)

    # -- claims -------------------------------------------------------------------

    def _claim_phase(self, board):
        st = self.state
        claims = []
        for g in self.state.groups:
            got = self._claim_group(g, board)
            if got is not None:
                claims.append(got)
        need = st.needed[st.level]
        if len(claims) < need:
            raise InvariantBroken(
                "pigeonhole failed at level %d: %d < %d" % (st.level, len(claims), need)
            )
        claims.sort(key=lambda pts: proj(pts[0], self.v))
        st.inventory = [tuple(sort_by_proj(list(pts), self.v)) for pts in claims[:need]]
        self.diagnostics.append(
            {
                "level": st.level,
                "claims": len(claims),
                "needed": need,
                "bullets": self._phase_bullets(board, count_only=True),
            }
        )
        if st.level == st.target_k:
            self._finish(board)
            return
        st.level += 1
        self._start_level(board)

    def _phase_bullets(self, board, count_only: bool = False):
        idx = [
            i
            for i in range(self._phase_bullet_start, len(board.points))
            if board.owners[i] is Owner.BREAKER
        ]
        if count_only:
            return len(idx)
        return [board.points[i] for i in idx]

    def _claim_group(self, g: _Group, board):
        if g.connector is None:
            return None
        for mi, member in enumerate(g.members):
            if mi in g.dead:
                continue
            pts = sort_by_proj(member + [g.connector], self.v)
            if is_k_strip(pts, self.v, board.points):
                return tuple(pts)
        return None

    def _far_safe_point(self, board) -> Point:
        """Filler move once the construction is done: far above all regions
        (strip regions are unbounded only in the downward direction)."""
        top = max(p.y for p in board.points) if len(board) else Q(0)
        for _ in range(200):
            p = Point(
                Q(self.rng.randrange(-(1 << 16), 1 << 16), 64),
                top + (1 << 20) + Q(self.rng.randrange(0, 1 << 16), 64),
            )
            if board.collinearity_conflict(p) is None:
                return p
        raise InvariantBroken("no filler point found")

    def _finish(self, board):
        st = self.state
        strips = [Strip(tuple(pts), self.v, st.target_k) for pts in st.inventory]
        self.result = StripFamily(strips, self.v)
        self.finished = True
        self.rounds_at_finish = sum(1 for o in board.owners if o is Owner.MAKER)
        self.board_at_finish = list(board.points)


class MonoMaker11(StripsMakerStrategy):
    """Monochromatic 1:1: t parallel k-strips within the closed-form bound."""

    name = "strips-1-1"


class MonoMakerBiased(StripsMakerStrategy):
    """Monochromatic 1:s for integer s >= 1 (groups of 2s strips)."""

    name = "strips-biased"

    def reset(self, config, owner: Owner):
        if to_q(config.breaker_speed).denominator != 1:
            raise ValueError("the biased monochromatic strategy needs integer bias")
        super().reset(config, owner)

    def _strategy_bias(self) -> Q:
        return to_q(self.config.breaker_speed)

    def _group_size(self) -> int:
        return 2 * int(self._strategy_bias())

    def _gap_for_group(self, g: _Group) -> tuple:
        st = self.state
        hi = min(proj(p, self.v) for p in g.members[0])
        cursor = st.group_cursor - 1  # already advanced past this group
        if cursor > 0:
            prev = st.groups[cursor - 1]
            lo = max(proj(p, self.v) for m in prev.members for p in m)
            if prev.connector is not None:
                lo = max(lo, proj(prev.connector, self.v))
        else:
            lo = hi - 8
        return lo, hi

    def _connector_cones(self, g: _Group, board):
        out = []
        for mi, member in enumerate(g.members):
            try:
                out.append((mi, cone_of_points(member, self.v, board.points, "minus")))
            except DegenerateCone:
                continue
        return out

    def _replaceable_ends(self, member_index: int):
        return (-1,)  # the connector sits left of the whole group

    def _claim_group(self, g: _Group, board):
        if g.connector is None:
            return None
        for member in g.members:
            member_sorted = sort_by_proj(member, self.v)
            if not is_k_strip(member_sorted, self.v, board.points):
                continue  # Breaker hit this member's own region
            try:
                _, witness = cone_of_points(
                    member_sorted, self.v, board.points, "minus", want_witness=True
                )
            except DegenerateCone:
                continue
            z = witness if witness is not None else g.connector
            pts = sort_by_proj(member_sorted + [z], self.v)
            if is_k_strip(pts, self.v, board.points):
                return tuple(pts)
        return None


class BichromMaker(StripsMakerStrategy):
    """Bichromatic 1:s for rational s < 2: Maker-only k-strips."""

    name = "strips-bichrom"

    def reset(self, config, owner: Owner):
        if config.variant is not Rule.BICHROMATIC:
            raise ValueError("bichromatic strategy in a monochromatic game")
        if to_q(config.breaker_speed) >= 2:
            raise ValueError("the bichromatic strategy needs bias below 2")
        super().reset(config, owner)
        self.accounting_ok = True

    def _plan(self, config) -> MakerStripState:
        k, r = config.k, self.t
        eps = 2 - to_q(config.breaker_speed)
        needed = {k: r}
        pair_rounds = {}
        for lvl in range(k, 1, -1):
            t_lvl = _ceil_q((2 * needed[lvl] + 1) / eps)
            if t_lvl % 2:
                t_lvl += 1
            pair_rounds[lvl] = t_lvl
            needed[lvl - 1] = 2 * t_lvl + 4  # reserve for damaged strips
        return MakerStripState(
            target_k=k,
            target_t=r,
            speed_s=to_q(config.breaker_speed),
            level=1,
            needed=needed,
            pair_rounds=pair_rounds,
        )

    def _group_total(self) -> int:
        return self.state.pair_rounds[self.state.level]

    def _base_complete(self, board) -> bool:
        return self.state.base_placed >= self.state.needed[1]

    def _finish_base(self, board):
        st = self.state
        mine = board.points_of(Owner.MAKER)[: st.needed[1]]
        st.inventory = [(p,) for p in sort_by_proj(mine, self.v)]
        st.level = 2
        self._start_level(board)

    def _start_level(self, board):
        st = self.state
        st.groups = []
        st.group_cursor = 0
        st.damaged = set()
        st.next_inventory = 0
        self._phase_bullet_start = len(board.points)
        # the fresh inventory must be screened against every bullet already
        # on the board, not only against future ones
        for i, o in enumerate(board.owners):
            if o is Owner.BREAKER:
                self._mark_damage(board.points[i])

    def _mark_damage(self, b: Point):
        st = self.state
        vv = self.v.vec()
        for idx, pts in enumerate(st.inventory):
            if idx in st.damaged:
                continue
            if _v_below(b, pts[0], vv) or _v_below(b, pts[-1], vv):
                st.damaged.add(idx)

    def _sync(self, board):
        # no replacements: Breaker points cannot serve as strip vertices;
        # instead, strips whose end rays were hit are skipped at use time
        for i in range(self._seen, len(board.points)):
            if board.owners[i] is Owner.BREAKER:
                self._mark_damage(board.points[i])
        self._seen = len(board.points)

    def _connector_move(self, board) -> Point:
        st = self.state
        members = []
        i = st.next_inventory
        while len(members) < 2 and i < len(st.inventory):
            if i not in st.damaged:
                members.append(list(st.inventory[i]))
            i += 1
        st.next_inventory = i
        if len(members) < 2:
            raise InvariantBroken("inventory exhausted by damaged strips")
        g = _Group(members=members)
        st.groups.append(g)
        st.group_cursor += 1
        cones = [
            cone_of_points(g.members[0], self.v, board.points, "plus"),
            cone_of_points(g.members[1], self.v, board.points, "minus"),
        ]
        lo = max(proj(p, self.v) for p in g.members[0])
        hi = min(proj(p, self.v) for p in g.members[1])
        if lo >= hi:
            raise InvariantBroken("no projection gap for the connector line")
        c = self._pick_line(board, lo, hi)
        p = self._descend_on_line(board, c, cones)
        g.connector = p
        return p

    def _rotation_start(self, candidates, others, bullets, vertices) -> Q:
        """Half the distance from the current tilt to the nearest critical one.

        Every membership or collinearity relation the rotation must preserve
        flips sign at the root of a function linear in delta (the roof edges
        do not move; only the boundary rays and the projection order do), so
        the nearest root bounds the admissible offset.  The result is only a
        starting guess; pick_delta re-verifies exactly and halves on failure.
        """
        base = self.v.dx
        gap = None

        def note(root):
            nonlocal gap
            d = abs(root - base)
            if d != 0 and (gap is None or d < gap):
                gap = d

        for cand in candidates:
            for i in range(len(cand)):
                for j in range(i + 1, len(cand)):
                    a, b = cand[i], cand[j]
                    if a.y != b.y:
                        note((b.x - a.x) / (a.y - b.y))
            lo_e, hi_e = cand[0], cand[-1]
            for q in others:
                if q in cand:
                    continue
                under_roof = True
                for i in range(len(cand) - 1):
                    if orientation(cand[i], cand[i + 1], q) == CCW:
                        under_roof = False
                        break
                if not under_roof:
                    continue  # outside a fixed roof half-plane for every delta
                for e in (lo_e, hi_e):
                    w = q - e
                    if w.y != 0:
                        note(-w.x / w.y)
        for b in bullets:
            for qv in vertices:
                w = b - qv
                if w.y != 0:
                    note(-w.x / w.y)
        if gap is None:
            return Q(1, 4)
        return min(gap / 2, Q(1, 4))

    def _claim_phase(self, board):
        st = self.state
        bullets = self._phase_bullets(board)
        bullet_set = set(bullets)
        candidates = [
            sort_by_proj(m + [g.connector], self.v)
            for g in st.groups
            if g.connector is not None
            for m in g.members
        ]
        others = [p for p in board.points if p not in bullet_set]
        vertices = {p for cand in candidates for p in cand}

        def structure_ok(d: Direction) -> bool:
            return all(is_k_strip(cand, d, others) for cand in candidates)

        def lines_ok(d: Direction) -> bool:
            vv = d.vec()
            for b in bullets:
                for qv in vertices:
                    if b != qv and (b - qv).cross(vv) == 0:
                        return False
            return True

        start = self._rotation_start(candidates, others, bullets, vertices)
        delta = pick_delta([structure_ok, lines_ok], base=self.v.dx, start=start)
        self.v = Direction(delta, -1)

        for b in bullets:
            hits = sum(1 for cand in candidates if region_side(sort_by_proj(cand, self.v), self.v, b))
            if hits > 1:
                self.accounting_ok = False

        claims = []
        for g in st.groups:
            if g.connector is None:
                continue
            for m in g.members:
                pts = sort_by_proj(m + [g.connector], self.v)
                if is_k_strip(pts, self.v, board.points):
                    claims.append(tuple(pts))
                    break
        need = st.needed[st.level]
        if len(claims) < need:
            raise InvariantBroken(
                "bichromatic pigeonhole failed at level %d: %d < %d"
                % (st.level, len(claims), need)
            )
        claims.sort(key=lambda pts: proj(pts[0], self.v))
        st.inventory = [tuple(sort_by_proj(list(p), self.v)) for p in claims[:need]]
        self.diagnostics.append(
            {
                "level": st.level,
                "claims": len(claims),
                "needed": need,
                "bullets": len(bullets),
                "delta": delta,
            }
        )
        if st.level == st.target_k:
            self._finish(board)
            return
        st.level += 1
        self._start_level(board)


MAKER_STRATEGIES = {
    "strips-1-1": MonoMaker11,
    "strips-biased": MonoMakerBiased,
    "strips-bichrom": BichromMaker,
}
