import json

import pytest

from holegames.baselines import RandomStrategy
from holegames.board import IllegalCollinear, Owner, Rule
from holegames.engine import (
    GameConfig,
    GameState,
    GameTrace,
    WrongCount,
    WrongTurn,
    replay,
    run_match,
    schedule_prefix,
    verify_trace,
)
from holegames.geom import Point
from holegames.oracle import any_k_hole, find_k_hole
from holegames.rationals import Q, to_q


def sort_oracle_schedule(ms, bs, n):
    """Direct merged sort of {i/s_M} and {i/s_B} with Maker tie-break."""
    times = [(Q(i) / to_q(ms), 0, Owner.MAKER) for i in range(1, n + 1)]
    times += [(Q(i) / to_q(bs), 1, Owner.BREAKER) for i in range(1, n + 1)]
    times.sort(key=lambda t: (t[0], t[1]))
    return [o for _, _, o in times[:n]]


@pytest.mark.parametrize("bias", ["1", "3/2", "2", "12"])
def test_schedule_matches_direct_sort(bias):
    cfg = GameConfig(k=3, maker_speed=1, breaker_speed=to_q(bias))
    assert schedule_prefix(cfg, 40) == sort_oracle_schedule(1, bias, 40)


def test_schedule_1_1_alternates():
    cfg = GameConfig(k=3)
    assert schedule_prefix(cfg, 6) == [
        Owner.MAKER,
        Owner.BREAKER,
        Owner.MAKER,
        Owner.BREAKER,
        Owner.MAKER,
        Owner.BREAKER,
    ]


def test_schedule_density_beatty_bound():
    for bias in ("1", "3/2", "2", "12"):
        cfg = GameConfig(k=3, breaker_speed=to_q(bias))
        prefix = schedule_prefix(cfg, 1000)
        m = b = 0
        for o in prefix:
            if o is Owner.MAKER:
                m += 1
            else:
                b += 1
            if m:
                drift = abs(to_q(b) - to_q(bias) * m)
                assert drift <= to_q(bias) + 1


def test_literal_multiset_convention():
    cfg = GameConfig(k=3, breaker_speed=2, schedule_convention="literal-multiset")
    # literal i*s times make the faster player move later
    prefix = schedule_prefix(cfg, 4)
    assert prefix[0] is Owner.MAKER
    assert prefix.count(Owner.MAKER) > prefix.count(Owner.BREAKER)


def test_apply_move_legality():
    state = GameState(GameConfig(k=3, detect_win=False))
    state.apply_move(Owner.MAKER, [Point(0, 0)])
    with pytest.raises(WrongTurn):
        state.apply_move(Owner.MAKER, [Point(1, 0)])
    with pytest.raises(WrongCount):
        state.apply_move(Owner.BREAKER, [Point(1, 0), Point(2, 1)])
    state.apply_move(Owner.BREAKER, [Point(1, 0)])
    with pytest.raises(IllegalCollinear):
        state.apply_move(Owner.MAKER, [Point(2, 0)])
    # rejected move leaves the state unchanged
    assert len(state.board) == 2
    assert state.next_turn() is Owner.MAKER
    state.apply_move(Owner.MAKER, [Point(0, 5)])
    assert len(state.board) == 3


def test_win_detection_monochromatic():
    state = GameState(GameConfig(k=3))
    state.apply_move(Owner.MAKER, [Point(0, 0)])
    state.apply_move(Owner.BREAKER, [Point(1, 0)])
    state.apply_move(Owner.MAKER, [Point(0, 1)])
    assert state.status == GameState.MAKER_WON
    assert state.certificate is not None
    assert len(state.certificate.vertices) == 3


def test_win_detection_bichromatic_requires_maker_vertices():
    state = GameState(GameConfig(variant=Rule.BICHROMATIC, k=3))
    state.apply_move(Owner.MAKER, [Point(0, 0)])
    state.apply_move(Owner.BREAKER, [Point(1, 0)])
    state.apply_move(Owner.MAKER, [Point(0, 1)])
    assert state.status == GameState.ONGOING  # mixed triple does not count
    state.apply_move(Owner.BREAKER, [Point(5, 7)])
    state.apply_move(Owner.MAKER, [Point(2, 3)])
    # (0,0), (0,1), (2,3) are Maker's; their triangle is empty of the rest
    assert state.status == GameState.MAKER_WON
    assert all(v in state.board.points_of(Owner.MAKER) for v in state.certificate.vertices)


def test_win_detection_exactness_random():
    cfg = GameConfig(k=4, seed=11)
    trace = run_match(RandomStrategy(), RandomStrategy(), cfg)
    state = trace.final_state
    if state.status == GameState.MAKER_WON:
        # the final hole verifies; before the last move there was none
        probe = GameState(GameConfig(k=4, seed=11, detect_win=False))
        for move in trace.moves[:-1]:
            probe.apply_move(move.owner, move.points)
        last = trace.moves[-1]
        for p in last.points[:-1]:
            probe.board.add(p, last.owner)
        assert find_k_hole(probe.board, 4) is None
    else:
        assert find_k_hole(state.board, 4) is None


def test_trace_roundtrip_and_verify(tmp_path):
    cfg = GameConfig(k=3, seed=4)
    trace = run_match(RandomStrategy(), RandomStrategy(), cfg)
    path = tmp_path / "t.json"
    trace.dump(path)
    loaded = GameTrace.load(path)
    ok, div = verify_trace(loaded)
    assert ok and div is None
    state = replay(loaded)
    assert state.status == trace.status
    assert state.digests == trace.digests

    # tamper: move a point
    data = json.loads(path.read_text())
    data["moves"][0]["points"][0][0] = "12345/7"
    tampered = GameTrace.from_json(data)
    ok, div = verify_trace(tampered)
    assert not ok
    assert div == 1


def test_capped_game():
    cfg = GameConfig(k=3, max_points=6, detect_win=False)
    trace = run_match(RandomStrategy(), RandomStrategy(), cfg)
    assert trace.status == GameState.CAPPED
    assert len(trace.final_state.board) == 6
