"""Baseline strategies used as opponents in experiments and tests."""

from __future__ import annotations

import random

from .board import Owner
from .geom import Point, convex_hull
from .rationals import Q


def generic_points(rng: random.Random, board, count: int, span: int = 64, denom: int = 64, extra=()):
    """Random rational points kept in general position against the board.

    The sampling box grows on repeated rejection, so this always terminates.
    """
    out = list(extra)
    fresh = []
    box = span
    while len(fresh) < count:
        for _ in range(64):
            p = Point(
                Q(rng.randrange(-box * denom, box * denom + 1), denom),
                Q(rng.randrange(-box * denom, box * denom + 1), denom),
            )
            if board.collinearity_conflict(p, extra=out) is None:
                out.append(p)
                fresh.append(p)
                break
        else:
            box *= 2
    return fresh


class BaseStrategy:
    name = "base"

    def reset(self, config, owner: Owner):
        self.config = config
        self.owner = owner
        salt = 0 if owner is Owner.MAKER else 1
        self.rng = random.Random((config.seed << 1) ^ salt)

    def propose(self, state, count: int):
        raise NotImplementedError


class RandomStrategy(BaseStrategy):
    """Uniform random rational points (either side)."""

    name = "random"

    def propose(self, state, count: int):
        return generic_points(self.rng, state.board, count)


class GreedyHullStrategy(BaseStrategy):
    """Plays at jittered centroids of recent triples.

    As Maker this crowds points into convex clusters; as Breaker it stuffs the
    hulls Maker is likely to use.  Falls back to random when degenerate.
    """

    name = "greedy-hull"

    def _one(self, board, pending):
        pts = board.points + pending
        if len(pts) >= 3:
            pool = pts[-8:]
            for _ in range(8):
                tri = self.rng.sample(pool, 3)
                cx = (tri[0].x + tri[1].x + tri[2].x) / 3
                cy = (tri[0].y + tri[1].y + tri[2].y) / 3
                jitter = Q(self.rng.randrange(-15, 16), 1024)
                p = Point(cx + jitter, cy + jitter * Q(self.rng.randrange(1, 7), 5))
                if board.collinearity_conflict(p, extra=pending) is None:
                    return p
        return generic_points(self.rng, board, 1, extra=pending)[0]

    def propose(self, state, count: int):
        pending: list[Point] = []
        for _ in range(count):
            pending.append(self._one(state.board, pending))
        return pending


class ScriptedAdversarialBreaker(BaseStrategy):
    """Targets strip-building Makers: shoots exactly below Maker's latest
    points (same x, lower y) to force the replacement paths, and otherwise
    crowds recent Maker points."""

    name = "scripted-adversarial"

    def propose(self, state, count: int):
        board = state.board
        maker_pts = board.points_of(Owner.MAKER)
        pending: list[Point] = []
        for i in range(count):
            p = None
            if maker_pts and i % 3 != 2:
                target = maker_pts[-1 - (i * 7) % len(maker_pts)]
                depth = Q(self.rng.randrange(1, 64), 16)
                cand = Point(target.x, target.y - depth)
                if board.collinearity_conflict(cand, extra=pending) is None:
                    p = cand
            if p is None and maker_pts:
                target = self.rng.choice(maker_pts)
                for _ in range(16):
                    dx = Q(self.rng.randrange(-64, 65), 128)
                    dy = Q(self.rng.randrange(-64, 65), 128)
                    cand = Point(target.x + dx, target.y + dy)
                    if (dx != 0 or dy != 0) and board.collinearity_conflict(
                        cand, extra=pending
                    ) is None:
                        p = cand
                        break
            if p is None:
                p = generic_points(self.rng, board, 1, extra=pending)[0]
            pending.append(p)
        return pending


class InsideHullBreaker(BaseStrategy):
    """Places points strictly inside the hull of all Maker points when it can."""

    name = "inside-hull"

    def propose(self, state, count: int):
        board = state.board
        pending: list[Point] = []
        maker_pts = board.points_of(Owner.MAKER)
        hull = convex_hull(maker_pts) if len(maker_pts) >= 3 else []
        for _ in range(count):
            p = None
            if len(hull) >= 3:
                a, b, c = hull[0], hull[1], hull[2]
                for _ in range(16):
                    wa = self.rng.randrange(1, 32)
                    wb = self.rng.randrange(1, 32)
                    wc = self.rng.randrange(1, 32)
                    tot = wa + wb + wc
                    cand = Point(
                        (a.x * wa + b.x * wb + c.x * wc) / tot,
                        (a.y * wa + b.y * wb + c.y * wc) / tot,
                    )
                    if board.collinearity_conflict(cand, extra=pending) is None:
                        p = cand
                        break
            if p is None:
                p = generic_points(self.rng, board, 1, extra=pending)[0]
            pending.append(p)
        return pending


MAKER_BASELINES = {
    "random": RandomStrategy,
    "greedy-hull": GreedyHullStrategy,
}

BREAKER_BASELINES = {
    "random": RandomStrategy,
    "greedy-hull": GreedyHullStrategy,
    "scripted-adversarial": ScriptedAdversarialBreaker,
    "inside-hull": InsideHullBreaker,
}
