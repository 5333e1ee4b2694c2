"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary.  Budgets and tolerances are pinned here, not configurable.
"""

import math
import random
import time

import pytest

from conftest import random_general_position
from holegames.baselines import (
    BREAKER_BASELINES,
    GreedyHullStrategy,
    RandomStrategy,
)
from holegames.board import Owner, PointSet, Rule
from holegames.breaker import (
    PerturbedPolygonBreaker,
    all_triangles_blocked,
    one_round_breaker,
    star_property_holds,
)
from holegames.engine import GameConfig, GameState, run_match, schedule_prefix
from holegames.geom import AngleThreshold, Point, cmp_angle, convex_hull, is_general_position
from holegames.maker import BichromMaker, MonoMaker11, MonoMakerBiased, round_bound
from holegames.oracle import any_k_hole, find_k_hole, verify_hole
from holegames.rationals import Q, to_q
from holegames.strips import is_k_strip


def report(criterion: str, ok: bool, detail: str = ""):
    line = "[%s] criterion %s %s" % ("PASS" if ok else "FAIL", criterion, detail)
    print(line)
    assert ok, line


# -- 1. oracle sanity vs known small-set facts -------------------------------


def test_criterion_1_oracle_h_values():
    rng = random.Random(101)
    t0 = time.time()
    failures = 0
    for n, k in ((3, 3), (5, 4), (10, 5)):
        for _ in range(1000):
            board = PointSet.from_points(random_general_position(rng, n, span=30))
            if find_k_hole(board, k) is None:
                failures += 1
    elapsed = time.time() - t0
    report(
        "1 (oracle h-values)",
        failures == 0 and elapsed < 10.0,
        "failures=%d elapsed=%.1fs (budget 10s)" % (failures, elapsed),
    )


# -- 2. Theorem 1 reproduction ------------------------------------------------


def _theorem_game(maker, breaker, variant, k, bias, seed):
    config = GameConfig(
        variant=variant, k=k, breaker_speed=bias, seed=seed,
        detect_win=False, max_points=10**6,
    )
    trace = run_match(maker, breaker, config, stop_when_maker_done=True)
    assert not trace.annotations.get("error"), trace.annotations
    return trace.final_state


def _snapshot(maker, state):
    owners = {p: o for p, o in zip(state.board.points, state.board.owners)}
    snap = PointSet()
    for p in maker.board_at_finish:
        snap.add(p, owners[p])
    return snap


def test_criterion_2_theorem1():
    breakers = ("random", "greedy-hull", "scripted-adversarial")
    all_ok = True
    for k in (3, 4):
        for t in (1, 2):
            bound = round_bound(k, t, 1)
            assert bound == (Q(5, 3) * 4 ** (k - 2) - Q(2, 3)) * t
            for bname in breakers:
                t0 = time.time()
                worst_rounds = 0
                for seed in range(100):
                    maker = MonoMaker11(t=t)
                    breaker = BREAKER_BASELINES[bname]()
                    state = _theorem_game(maker, breaker, Rule.MONOCHROMATIC, k, 1, seed)
                    snap = _snapshot(maker, state)
                    ok = (
                        maker.finished
                        and len(maker.result.strips) == t
                        and maker.rounds_at_finish <= math.ceil(bound)
                        and all(
                            is_k_strip(list(s.points), maker.v, snap.points)
                            and verify_hole(snap, list(s.points), k, Rule.MONOCHROMATIC)
                            for s in maker.result.strips
                        )
                    )
                    worst_rounds = max(worst_rounds, maker.rounds_at_finish)
                    if not ok:
                        all_ok = False
                elapsed = time.time() - t0
                config_ok = elapsed < 120.0
                all_ok = all_ok and config_ok
                print(
                    "  theorem1 k=%d t=%d vs %s: 100 seeds, worst rounds %d <= %s, %.1fs"
                    % (k, t, bname, worst_rounds, bound, elapsed)
                )
    report("2 (Theorem 1)", all_ok, "k=4,t=1 bound=%s" % round_bound(4, 1, 1))


# -- 3. Theorem 2 reproduction --------------------------------------------------


def test_criterion_3_theorem2():
    all_ok = True
    for s in (2, 3):
        bound = round_bound(3, 1, s)
        for seed in range(100):
            maker = MonoMakerBiased(t=1)
            state = _theorem_game(maker, RandomStrategy(), Rule.MONOCHROMATIC, 3, s, seed)
            snap = _snapshot(maker, state)
            ok = (
                maker.rounds_at_finish <= math.ceil(bound)
                and len(maker.result.strips) == 1
                and all(
                    is_k_strip(list(st.points), maker.v, snap.points)
                    for st in maker.result.strips
                )
            )
            if not ok:
                all_ok = False
    for k in range(2, 9):
        if round_bound(k, 1, 1) != (Q(5, 3) * 4 ** (k - 2) - Q(2, 3)):
            all_ok = False
    report("3 (Theorem 2)", all_ok, "bounds %s, %s" % (round_bound(3, 1, 2), round_bound(3, 1, 3)))


# -- 4. Theorem 3 reproduction ----------------------------------------------------


def test_criterion_4_theorem3():
    all_ok = True
    t0 = time.time()
    for seed in range(100):
        maker = BichromMaker(t=1)
        state = _theorem_game(maker, RandomStrategy(), Rule.BICHROMATIC, 3, Q(3, 2), seed)
        snap = _snapshot(maker, state)
        ok = maker.accounting_ok and len(maker.result.strips) >= 1
        for strip in maker.result.strips:
            ok = ok and verify_hole(snap, list(strip.points), 3, Rule.BICHROMATIC)
            idx = [snap.points.index(p) for p in strip.points]
            ok = ok and all(snap.owners[i] is Owner.MAKER for i in idx)
        if not ok:
            all_ok = False
    report("4 (Theorem 3)", all_ok, "100 seeds, %.0fs" % (time.time() - t0))


# -- 5. one-round proposition ---------------------------------------------------


def test_criterion_5_one_round():
    rng = random.Random(55)
    all_ok = True
    worst = 0.0
    for trial in range(100):
        n = rng.randrange(3, 31)
        M = random_general_position(rng, n)
        B = one_round_breaker(M)
        t0 = time.time()
        blocked = all_triangles_blocked(M, B)
        check_time = time.time() - t0
        worst = max(worst, check_time)
        if not (blocked and len(B) == 2 * n and is_general_position(M + B) and check_time < 1.0):
            all_ok = False
    report("5 (one-round 1:2)", all_ok, "100 sets, worst check %.2fs (budget 1s)" % worst)


# -- 6. Theorem 4 property suite ---------------------------------------------------


def _star_sweep(breaker, board, checked_pairs):
    """Incremental exact check of the angular-domain property.

    Guards of a fixed constellation never change, so only new (x, y) pairs
    need checking; replaced constellations re-enter with a cleared cache.
    """
    mk_idx = board.indices_of(Owner.MAKER)
    ok = True
    for ci, entry in breaker.registry.entries.items():
        key = (ci, len(entry.guards), entry.circle_radius)
        seen = checked_pairs.setdefault(key, set())
        center = entry.center
        for xi in mk_idx:
            if xi >= ci or xi == ci:
                continue
            for yi in mk_idx:
                if yi == ci or yi == xi or (xi, yi) in seen:
                    continue
                seen.add((xi, yi))
                x, y = board.points[xi], board.points[yi]
                from holegames.geom import angle_exceeds, point_in_angular_domain

                if not angle_exceeds(center, x, y, AngleThreshold.two_pi_over(breaker.lam)):
                    continue
                if not any(
                    point_in_angular_domain(center, x, y, g) for g in entry.guards
                ):
                    ok = False
    return ok


@pytest.mark.parametrize("maker_name", ["random", "greedy-hull"])
def test_criterion_6_theorem4(maker_name):
    makers = {"random": RandomStrategy, "greedy-hull": GreedyHullStrategy}
    all_ok = True
    worst_game = 0.0
    games = 25  # 25 games per Maker kind = 50 total across the two params
    for seed in range(games):
        t0 = time.time()
        config = GameConfig(
            variant=Rule.BICHROMATIC, k=8, breaker_speed=12, seed=seed,
            detect_win=False, max_points=10**6,
        )
        maker = makers[maker_name]()
        maker.reset(config, Owner.MAKER)
        breaker = PerturbedPolygonBreaker(lam=6)
        breaker.reset(config, Owner.BREAKER)
        state = GameState(config)
        checked_pairs: dict = {}
        rounds = 0
        while rounds < 25:
            owner = state.next_turn()
            strat = maker if owner is Owner.MAKER else breaker
            state.apply_move(owner, strat.propose(state, state.turn_allotment()))
            if owner is Owner.BREAKER:
                rounds = state.placed[Owner.MAKER]
                if not breaker.registry.disks_disjoint():
                    all_ok = False
                if not _star_sweep(breaker, state.board, checked_pairs):
                    all_ok = False
                if len(state.board.points_of(Owner.MAKER)) >= 7:
                    if any_k_hole(state.board, 7, Rule.BICHROMATIC) is not None:
                        all_ok = False
        game_time = time.time() - t0
        worst_game = max(worst_game, game_time)
        if game_time >= 300.0:
            all_ok = False
    report(
        "6 (Theorem 4, %s)" % maker_name,
        all_ok,
        "%d games, worst %.0fs (budget 300s)" % (games, worst_game),
    )


# -- 7. Theorem 5 angle-count lemma ---------------------------------------------


def test_criterion_7_angle_count():
    rng = random.Random(7)
    all_ok = True
    for lam in (3, 4, 5, 6):
        thr = AngleThreshold.two_pi_over(lam)
        limit = math.ceil(2 * lam / (lam - 2)) - 1
        for _ in range(1000):
            pts = random_general_position(rng, rng.randrange(4, 12))
            hull = convex_hull(pts)
            if len(hull) < 3:
                continue
            small = 0
            k = len(hull)
            for i in range(k):
                prev_v, v, nxt = hull[i - 1], hull[i], hull[(i + 1) % k]
                if cmp_angle(v, prev_v, nxt, thr) < 0:
                    small += 1
            if small > limit:
                all_ok = False
    report("7 (angle-count lemma)", all_ok, "lambda in {3,4,5,6}, 1000 polygons each")


# -- 8. grid construction ----------------------------------------------------------


def test_criterion_8_grid():
    from holegames.grid import (
        GridConfig,
        build_grid_pointset,
        extract_k_hole,
        strip_memberships,
        verify_no_colorful_triple,
    )

    rng = random.Random(88)
    all_ok = True
    detail = []
    for t in (3, 5):
        t0 = time.time()
        g = build_grid_pointset(GridConfig(t=t, d=3, seed=0))
        n = t**3
        ok = len(set(g.bent.values())) == n
        ok = ok and is_general_position(list(g.bent.values()))
        board = g.bent_board()
        for j in range(3):
            for cells in g.sibling_holes[j]:
                ok = ok and verify_hole(board, [g.bent[z] for z in cells], t, Rule.MONOCHROMATIC)
        ok = ok and verify_no_colorful_triple(g)
        third = g.alpha_sq / 9
        probes = 0
        while probes < 400:
            p = Point(Q(rng.randrange(-4000, 4000), 997), Q(rng.randrange(-4000, 4000), 997))
            if any((p - s).norm_sq() <= third for s in g.flat.values()):
                continue
            if len(strip_memberships(g, p)) > 2:
                ok = False
            probes += 1
        k = (t + 1) // 2
        out = extract_k_hole(g, [], k)
        ok = ok and isinstance(out, list) and len(out) == k
        elapsed = time.time() - t0
        if t == 5 and elapsed >= 120.0:
            ok = False
        detail.append("t=%d: %.0fs" % (t, elapsed))
        all_ok = all_ok and ok
    report("8 (grid construction)", all_ok, "; ".join(detail))


# -- 9. schedule correctness -----------------------------------------------------


def test_criterion_9_schedule():
    all_ok = True
    for bias in ("1", "3/2", "2", "12"):
        config = GameConfig(k=3, breaker_speed=to_q(bias))
        got = schedule_prefix(config, 40)
        times = [(Q(i), 0, Owner.MAKER) for i in range(1, 41)]
        times += [(Q(i) / to_q(bias), 1, Owner.BREAKER) for i in range(1, 41)]
        times.sort(key=lambda tpl: (tpl[0], tpl[1]))
        expected = [o for _, _, o in times[:40]]
        if got != expected:
            all_ok = False
    report("9 (schedule)", all_ok, "biases 1:1, 1:3/2, 1:2, 1:12, 40 turns")
