"""Referee and match runner: schedules turns for arbitrary rational bias,
validates placements, detects wins, and records replayable traces."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .board import IllegalCollinear, Owner, PointSet, Rule
from .geom import Point
from .oracle import HoleCertificate, any_k_hole
from .rationals import Q, fmt_q, to_q


class WrongTurn(ValueError):
    pass


class WrongCount(ValueError):
    pass


@dataclass
class GameConfig:
    variant: Rule = Rule.MONOCHROMATIC
    k: int = 3
    maker_speed: Q = Q(1)
    breaker_speed: Q = Q(1)
    max_points: int = 200
    seed: int = 0
    detect_win: bool = True
    # The convention the sources state literally is i*speed, which makes the
    # faster player move later; every proof needs the opposite, so the default
    # schedules the i-th point of a speed-s player at time i/s.
    schedule_convention: str = "per-speed"

    def __post_init__(self):
        self.maker_speed = to_q(self.maker_speed)
        self.breaker_speed = to_q(self.breaker_speed)
        if self.maker_speed <= 0 or self.breaker_speed <= 0:
            raise ValueError("speeds must be positive")
        if self.k < 3:
            raise ValueError("k must be at least 3")
        low = min(self.maker_speed, self.breaker_speed)
        self.maker_speed /= low
        self.breaker_speed /= low
        if self.schedule_convention not in ("per-speed", "literal-multiset"):
            raise ValueError("unknown schedule convention")

    def to_json(self) -> dict:
        return {
            "variant": self.variant.value,
            "k": self.k,
            "maker_speed": fmt_q(self.maker_speed),
            "breaker_speed": fmt_q(self.breaker_speed),
            "max_points": self.max_points,
            "seed": self.seed,
            "detect_win": self.detect_win,
            "schedule_convention": self.schedule_convention,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GameConfig":
        return cls(
            variant=Rule(data["variant"]),
            k=data["k"],
            maker_speed=to_q(data["maker_speed"]),
            breaker_speed=to_q(data["breaker_speed"]),
            max_points=data.get("max_points", 200),
            seed=data.get("seed", 0),
            detect_win=data.get("detect_win", True),
            schedule_convention=data.get("schedule_convention", "per-speed"),
        )


def _point_time(config: GameConfig, owner: Owner, index: int) -> Q:
    """Scheduled time of a player's index-th point (1-based)."""
    speed = config.maker_speed if owner is Owner.MAKER else config.breaker_speed
    if config.schedule_convention == "per-speed":
        return Q(index) / speed
    return Q(index) * speed


def schedule_prefix(config: GameConfig, n: int):
    """Owners of the first n placements under the merged schedule."""
    out = []
    placed = {Owner.MAKER: 0, Owner.BREAKER: 0}
    while len(out) < n:
        tm = _point_time(config, Owner.MAKER, placed[Owner.MAKER] + 1)
        tb = _point_time(config, Owner.BREAKER, placed[Owner.BREAKER] + 1)
        owner = Owner.MAKER if tm <= tb else Owner.BREAKER
        placed[owner] += 1
        out.append(owner)
    return out


@dataclass
class MoveRecord:
    turn: int
    owner: Owner
    points: list

    def to_json(self) -> dict:
        return {
            "turn": self.turn,
            "owner": self.owner.value,
            "points": [[fmt_q(p.x), fmt_q(p.y)] for p in self.points],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MoveRecord":
        return cls(
            turn=data["turn"],
            owner=Owner(data["owner"]),
            points=[Point(x, y) for x, y in data["points"]],
        )


class GameState:
    """Mutable match state guarded by the referee's legality checks."""

    ONGOING = "ongoing"
    MAKER_WON = "maker_won"
    CAPPED = "capped"

    def __init__(self, config: GameConfig):
        self.config = config
        self.board = PointSet()
        self.moves: list[MoveRecord] = []
        self.digests: list[str] = []
        self.placed = {Owner.MAKER: 0, Owner.BREAKER: 0}
        self.status = self.ONGOING
        self.certificate: HoleCertificate | None = None
        self.turn_index = 0

    def next_turn(self) -> Owner:
        tm = _point_time(self.config, Owner.MAKER, self.placed[Owner.MAKER] + 1)
        tb = _point_time(self.config, Owner.BREAKER, self.placed[Owner.BREAKER] + 1)
        return Owner.MAKER if tm <= tb else Owner.BREAKER

    def turn_allotment(self) -> int:
        """Number of points of the upcoming turn: the run of schedule slots
        belonging to the same player before the opponent's next time."""
        owner = self.next_turn()
        placed = dict(self.placed)
        count = 0
        while True:
            tm = _point_time(self.config, Owner.MAKER, placed[Owner.MAKER] + 1)
            tb = _point_time(self.config, Owner.BREAKER, placed[Owner.BREAKER] + 1)
            nxt = Owner.MAKER if tm <= tb else Owner.BREAKER
            if nxt is not owner:
                break
            placed[nxt] += 1
            count += 1
            if len(self.board) + count >= self.config.max_points:
                break
        return max(count, 1)

    def _check_win(self, new_index: int, owner: Owner):
        if not self.config.detect_win:
            return
        if self.config.variant is Rule.BICHROMATIC and owner is Owner.BREAKER:
            return  # a Breaker point can only destroy Maker holes
        cert = any_k_hole(self.board, self.config.k, self.config.variant, new_index)
        if cert is not None:
            self.status = self.MAKER_WON
            self.certificate = cert

    def apply_move(self, owner: Owner, points) -> None:
        """Validate and apply a full turn.  Raises without mutating on
        illegal input; general-position rejection restores prior state."""
        if self.status != self.ONGOING:
            raise WrongTurn("game is over (%s)" % self.status)
        if owner is not self.next_turn():
            raise WrongTurn("it is not %s's turn" % owner.value)
        allot = self.turn_allotment()
        pts = list(points)
        if len(pts) > allot or not pts:
            raise WrongCount("turn must place exactly %d points, got %d" % (allot, len(pts)))

        def rollback():
            for _ in added:
                self.board.unadd()
                self.placed[owner] -= 1
            self.status = self.ONGOING
            self.certificate = None

        added = []
        try:
            for p in pts:
                idx = self.board.add(p, owner)
                added.append(idx)
                self.placed[owner] += 1
                self._check_win(idx, owner)
                if self.status == self.ONGOING and len(self.board) >= self.config.max_points:
                    self.status = self.CAPPED
                if self.status != self.ONGOING:
                    break
        except IllegalCollinear:
            rollback()
            raise
        if self.status == self.ONGOING and len(added) < allot:
            # a short move is legal only when it ends the game
            rollback()
            raise WrongCount("turn must place exactly %d points, got %d" % (allot, len(pts)))
        placed_now = pts[: len(added)]
        self.turn_index += 1
        self.moves.append(MoveRecord(self.turn_index, owner, placed_now))
        self.digests.append(self._digest())

    def _digest(self) -> str:
        h = hashlib.sha1()
        last = self.moves[-1]
        h.update(
            ("%d|%s|%s|%s" % (last.turn, last.owner.value, last.to_json()["points"], self.status)).encode()
        )
        return h.hexdigest()

    def maker_rounds(self) -> int:
        return self.placed[Owner.MAKER]


@dataclass
class GameTrace:
    config: GameConfig
    moves: list
    status: str
    digests: list
    certificate: list | None = None
    annotations: dict = field(default_factory=dict)
    final_state: object = field(default=None, repr=False, compare=False)

    SCHEMA = "holegames-trace/1"

    def to_json(self) -> dict:
        return {
            "schema": self.SCHEMA,
            "config": self.config.to_json(),
            "moves": [m.to_json() for m in self.moves],
            "status": self.status,
            "digests": self.digests,
            "certificate": self.certificate,
            "annotations": self.annotations,
        }

    def dump(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "GameTrace":
        if data.get("schema") != cls.SCHEMA:
            raise ValueError("unknown trace schema %r" % data.get("schema"))
        return cls(
            config=GameConfig.from_json(data["config"]),
            moves=[MoveRecord.from_json(m) for m in data["moves"]],
            status=data["status"],
            digests=list(data["digests"]),
            certificate=data.get("certificate"),
            annotations=data.get("annotations", {}),
        )

    @classmethod
    def load(cls, path) -> "GameTrace":
        with open(path) as f:
            return cls.from_json(json.load(f))


def replay(trace: GameTrace) -> GameState:
    """Re-run the referee over a trace's moves; raises on any illegality."""
    state = GameState(trace.config)
    for move in trace.moves:
        state.apply_move(move.owner, move.points)
    return state


def verify_trace(trace: GameTrace):
    """Replay and compare statuses and digests.

    Returns (True, None) or (False, first divergent turn index).
    """
    state = GameState(trace.config)
    for i, move in enumerate(trace.moves):
        try:
            state.apply_move(move.owner, move.points)
        except (IllegalCollinear, WrongTurn, WrongCount):
            return False, move.turn
        if state.digests[-1] != trace.digests[i]:
            return False, move.turn
    if state.status != trace.status:
        return False, trace.moves[-1].turn if trace.moves else 0
    return True, None


def run_match(maker, breaker, config: GameConfig, stop_when_maker_done: bool = False) -> GameTrace:
    """Drive two strategies until a win, the cap, or a Maker declaration."""
    state = GameState(config)
    maker.reset(config, Owner.MAKER)
    breaker.reset(config, Owner.BREAKER)
    annotations: dict = {}
    while state.status == GameState.ONGOING:
        owner = state.next_turn()
        strategy = maker if owner is Owner.MAKER else breaker
        count = state.turn_allotment()
        try:
            pts = strategy.propose(state, count)
            state.apply_move(owner, pts)
        except Exception as exc:  # noqa: BLE001 - annotate and stop, per contract
            annotations["error"] = "%s: %s" % (type(exc).__name__, exc)
            annotations["error_turn"] = state.turn_index + 1
            break
        if stop_when_maker_done and getattr(maker, "finished", False):
            annotations["maker_done_turn"] = state.turn_index
            break
    cert = None
    if state.certificate is not None:
        cert = [[fmt_q(p.x), fmt_q(p.y)] for p in state.certificate.vertices]
    return GameTrace(
        config=config,
        moves=state.moves,
        status=state.status,
        digests=state.digests,
        certificate=cert,
        annotations=annotations,
        final_state=state,
    )
