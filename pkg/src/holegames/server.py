"""Interactive play service: in-memory sessions, JSON+SSE, exact wire format.

All geometry stays on the server; clients snap clicks to a rational grid and
submit "num/den" strings.  A session binds one engine strategy to the side the
human is not playing and auto-responds whenever the schedule says so.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .baselines import BREAKER_BASELINES, MAKER_BASELINES
from .board import IllegalCollinear, Owner, Rule
from .breaker import OneRoundDoubleBreaker, PerturbedPolygonBreaker
from .engine import GameConfig, GameState, GameTrace, WrongCount, WrongTurn
from .geom import Point
from .maker import MAKER_STRATEGIES
from .rationals import fmt_q, to_q


class CreateSession(BaseModel):
    variant: str = "monochromatic"
    k: int = 3
    bias: str = "1:1"
    human_side: str = "breaker"
    opponent: str = "random"
    seed: int = 0
    max_points: int = 200


class MoveBody(BaseModel):
    points: list


def _strategy_for(side: Owner, name: str):
    base, _, argstr = name.partition(":")
    kwargs = dict(item.split("=", 1) for item in filter(None, argstr.split(",")))
    if side is Owner.MAKER:
        if base in MAKER_STRATEGIES:
            return MAKER_STRATEGIES[base](t=int(kwargs.get("t", 1)))
        if base in MAKER_BASELINES:
            return MAKER_BASELINES[base]()
    else:
        if base == "perturbed-polygon":
            return PerturbedPolygonBreaker(lam=int(kwargs.get("lambda", 6)))
        if base == "one-round-double":
            return OneRoundDoubleBreaker()
        if base in BREAKER_BASELINES:
            return BREAKER_BASELINES[base]()
    raise ValueError("unknown strategy %r for %s" % (name, side.value))


@dataclass
class Session:
    session_id: str
    state: GameState
    human_side: Owner
    engine: object
    opponent_name: str
    created_at: float = field(default_factory=time.time)
    last_move_at: float = field(default_factory=time.time)
    version: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def engine_side(self) -> Owner:
        return Owner.BREAKER if self.human_side is Owner.MAKER else Owner.MAKER

    def advance_engine(self):
        """Let the engine play while it is on turn and the game is live."""
        while (
            self.state.status == GameState.ONGOING
            and self.state.next_turn() is self.engine_side()
        ):
            count = self.state.turn_allotment()
            pts = self.engine.propose(self.state, count)
            self.state.apply_move(self.engine_side(), pts)
            self.version += 1

    def overlays(self) -> dict:
        out: dict = {}
        registry = getattr(self.engine, "registry", None)
        if registry is not None and registry.entries:
            out["disks"] = [
                {
                    "center": [fmt_q(e.center.x), fmt_q(e.center.y)],
                    "radius_sq": fmt_q(e.radius_sq),
                    "circle_radius": fmt_q(e.circle_radius),
                    "guards": [[fmt_q(g.x), fmt_q(g.y)] for g in e.guards],
                }
                for e in registry.entries.values()
            ]
        maker_state = getattr(self.engine, "state", None)
        if maker_state is not None and getattr(maker_state, "groups", None):
            regions = []
            for g in maker_state.groups:
                if g.connector is None:
                    continue
                for member in g.members:
                    regions.append(
                        [[fmt_q(p.x), fmt_q(p.y)] for p in member + [g.connector]]
                    )
            if regions:
                out["strips"] = regions
        result = getattr(self.engine, "result", None)
        if result is not None:
            out["claimed_strips"] = [
                [[fmt_q(p.x), fmt_q(p.y)] for p in s.points] for s in result.strips
            ]
        return out

    def snapshot(self) -> dict:
        st = self.state
        cert = None
        if st.certificate is not None:
            cert = [[fmt_q(p.x), fmt_q(p.y)] for p in st.certificate.vertices]
        return {
            "session_id": self.session_id,
            "status": st.status,
            "human_side": self.human_side.value,
            "opponent": self.opponent_name,
            "turn": st.next_turn().value if st.status == GameState.ONGOING else None,
            "allotment": st.turn_allotment() if st.status == GameState.ONGOING else 0,
            "version": self.version,
            "config": st.config.to_json(),
            "points": [
                {"x": fmt_q(p.x), "y": fmt_q(p.y), "owner": o.value, "index": i}
                for i, (p, o) in enumerate(zip(st.board.points, st.board.owners))
            ],
            "certificate": cert,
            "overlays": self.overlays(),
        }

    def persist(self):
        outdir = os.environ.get("HOLEGAMES_TRACE_DIR")
        if not outdir:
            return
        os.makedirs(outdir, exist_ok=True)
        trace = GameTrace(
            config=self.state.config,
            moves=self.state.moves,
            status=self.state.status,
            digests=self.state.digests,
        )
        trace.dump(os.path.join(outdir, "session-%s.json" % self.session_id))


def create_app() -> FastAPI:
    app = FastAPI(title="holegames")
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    @app.post("/sessions")
    def create(body: CreateSession):
        try:
            variant = Rule(body.variant)
            human = Owner(body.human_side)
            ms, bs = body.bias.split(":")
            config = GameConfig(
                variant=variant,
                k=body.k,
                maker_speed=to_q(ms),
                breaker_speed=to_q(bs),
                max_points=body.max_points,
                seed=body.seed,
            )
            engine_side = Owner.BREAKER if human is Owner.MAKER else Owner.MAKER
            engine = _strategy_for(engine_side, body.opponent)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        sess = Session(
            session_id=secrets.token_hex(8),
            state=GameState(config),
            human_side=human,
            engine=engine,
            opponent_name=body.opponent,
        )
        engine.reset(config, sess.engine_side())
        with sess.lock:
            sess.advance_engine()
            sess.persist()
        sessions[sess.session_id] = sess
        return sess.snapshot()

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        return get_session(session_id).snapshot()

    @app.post("/sessions/{session_id}/moves")
    def submit_move(session_id: str, body: MoveBody):
        sess = get_session(session_id)
        with sess.lock:
            st = sess.state
            if st.status != GameState.ONGOING:
                raise HTTPException(status_code=409, detail="game over")
            if st.next_turn() is not sess.human_side:
                raise HTTPException(status_code=409, detail="not your turn")
            try:
                pts = [Point(x, y) for x, y in body.points]
            except Exception as exc:
                raise HTTPException(status_code=422, detail={"error": "bad_points", "reason": str(exc)})
            try:
                st.apply_move(sess.human_side, pts)
            except IllegalCollinear as exc:
                raise HTTPException(
                    status_code=422,
                    detail={
                        "error": "illegal_collinear",
                        "triple": [[fmt_q(p.x), fmt_q(p.y)] for p in exc.triple],
                    },
                )
            except WrongCount as exc:
                raise HTTPException(status_code=422, detail={"error": "wrong_count", "reason": str(exc)})
            except WrongTurn as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            sess.version += 1
            sess.advance_engine()
            sess.last_move_at = time.time()
            sess.persist()
        return sess.snapshot()

    @app.get("/sessions/{session_id}/events")
    async def events(session_id: str, limit: int = 0):
        sess = get_session(session_id)

        async def stream():
            last = -1
            sent = 0
            for _ in itertools.count():
                if sess.version != last:
                    last = sess.version
                    yield "data: %s\n\n" % json.dumps(sess.snapshot())
                    sent += 1
                    if sess.state.status != GameState.ONGOING:
                        return
                    if limit and sent >= limit:
                        return
                await asyncio.sleep(0.15)

        return StreamingResponse(stream(), media_type="text/event-stream")

    static_dir = os.environ.get("HOLEGAMES_UI_DIR") or os.path.join(
        os.path.dirname(os.path.dirname(os.path.dirname(os.path.dirname(__file__)))),
        "frontend",
        "dist",
    )
    if os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
