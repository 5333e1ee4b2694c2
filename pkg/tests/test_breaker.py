import math
import random

import pytest

from conftest import random_general_position
from holegames.board import Owner, PointSet, Rule
from holegames.breaker import (
    DegenerateInput,
    DiskEntry,
    DiskRegistry,
    OneRoundDoubleBreaker,
    PerturbationBudget,
    PerturbedPolygonBreaker,
    _angle_budget,
    _ccw_sorted,
    all_triangles_blocked,
    choose_circle_radius,
    choose_disk_radius_sq,
    one_round_breaker,
    place_perturbed_polygon,
    point_in_triangle,
    star_property_holds,
)
from holegames.engine import GameConfig, GameState
from holegames.geom import AngleThreshold, Point, cmp_angle, is_general_position
from holegames.oracle import any_k_hole
from holegames.rationals import Q


def test_one_round_spec_triangle():
    M = [Point(0, 0), Point(4, 0), Point(2, 4)]
    B = one_round_breaker(M)
    assert len(B) == 6
    assert any(point_in_triangle(*M, b) for b in B)
    assert is_general_position(M + B)
    # below-case points are straight below their Maker point
    assert B[0].x == M[0].x and B[0].y < M[0].y


def test_one_round_requires_general_position():
    with pytest.raises(DegenerateInput):
        one_round_breaker([Point(0, 0), Point(1, 1)])
    with pytest.raises(DegenerateInput):
        one_round_breaker([Point(0, 0), Point(1, 1), Point(2, 2)])


def test_one_round_random_sets(rng):
    for _ in range(8):
        n = rng.randrange(4, 16)
        M = random_general_position(rng, n)
        B = one_round_breaker(M)
        assert len(B) == 2 * n
        assert is_general_position(M + B)
        assert all_triangles_blocked(M, B)


def test_one_round_shear_path():
    M = [Point(0, 0), Point(0, 4), Point(3, 1), Point(3, 5), Point(1, 7)]
    B = one_round_breaker(M)
    assert all_triangles_blocked(M, B)
    assert is_general_position(M + B)


def test_perturbation_budget_bounds():
    b = PerturbationBudget(Q(1, 100), 6)
    assert 0 < b.u <= Q(3, 120)
    assert b.cos_eps ** 2 + b.sin_eps ** 2 == 1
    with pytest.raises(ValueError):
        PerturbationBudget(Q(1, 2), 6)  # epsilon too large
    with pytest.raises(ValueError):
        PerturbationBudget(0, 6)


def test_perturbed_polygon_postconditions(rng):
    board = PointSet()
    center = Point(0, 0)
    board.add(center, Owner.MAKER)
    others = [Point(3, 5), Point(-4, 1), Point(2, -6), Point(7, 1)]
    for o in others:
        board.add(o, Owner.MAKER)
    for lam in (3, 4, 6, 8, 12):
        budget = _angle_budget(lam, center, others, rng)
        guards, budget = place_perturbed_polygon(center, Q(1, 4), budget, others, board, rng)
        assert len(guards) == lam
        for g in guards:
            assert (g - center).norm_sq() == Q(1, 16)
        thr = AngleThreshold.two_pi_over(lam)
        ordered = _ccw_sorted(center, guards)
        over = [
            i
            for i in range(lam)
            if cmp_angle(center, ordered[i], ordered[(i + 1) % lam], thr) > 0
        ]
        assert len(over) == 1
        upper = budget.gap_upper_threshold()
        i = over[0]
        assert cmp_angle(center, ordered[i], ordered[(i + 1) % lam], upper) < 0
        eps_thr = budget.threshold()
        for g in guards:
            for q in others:
                assert cmp_angle(center, g, q, eps_thr) > 0


def test_choose_radii_defaults_and_replacement():
    reg = DiskRegistry(6)
    p1 = Point(0, 0)
    assert choose_disk_radius_sq(reg, p1) == 1
    reg.entries[0] = DiskEntry(0, p1, Q(1), Q(1, 4))
    # a second point at distance 2: its disk must stay clear of D_1
    p2 = Point(2, 0)
    rsq = choose_disk_radius_sq(reg, p2)
    assert rsq <= Q(1, 4)
    cand = DiskEntry(1, p2, rsq, Q(1, 8))
    assert cand.disjoint_from(reg.entries[0])


def test_circle_radius_avoids_lines():
    center = Point(0, 0)
    prior = [Point(3, 1), Point(-2, 4), Point(1, -5)]
    r = choose_circle_radius(center, Q(1), prior)
    assert 0 < r
    assert r * r < 1
    for i, a in enumerate(prior):
        for b in prior[i + 1 :]:
            ab = b - a
            d2 = ab.cross(center - a) ** 2 / ab.norm_sq()
            assert r * r < d2


def play_rounds(maker_points, lam=6, bias=12, seed=0):
    cfg = GameConfig(
        variant=Rule.BICHROMATIC, k=8, breaker_speed=bias, seed=seed,
        detect_win=False, max_points=10**6,
    )
    breaker = PerturbedPolygonBreaker(lam=lam)
    breaker.reset(cfg, Owner.BREAKER)
    state = GameState(cfg)
    it = iter(maker_points)
    while True:
        owner = state.next_turn()
        if owner is Owner.MAKER:
            try:
                p = next(it)
            except StopIteration:
                break
            state.apply_move(Owner.MAKER, [p])
        else:
            state.apply_move(Owner.BREAKER, breaker.propose(state, state.turn_allotment()))
    return state, breaker


def test_breaker_blocks_small_holes():
    maker_pts = [Point(0, 0), Point(8, 1), Point(4, 7), Point(2, 3), Point(6, 3), Point(4, -2), Point(9, 5)]
    state, breaker = play_rounds(maker_pts)
    assert breaker.registry.disks_disjoint()
    assert any_k_hole(state.board, 7, Rule.BICHROMATIC) is None
    # every fenced center satisfies the angular-domain property
    mk = state.board.points_of(Owner.MAKER)
    orders = {p: i for i, p in enumerate(state.board.points)}
    mk_orders = [orders[p] for p in mk]
    for entry in breaker.registry.entries.values():
        assert star_property_holds(
            entry.center, entry.guards, mk, orders[entry.center], mk_orders, 6
        )


def test_breaker_handles_disk_invasion():
    maker_pts = [Point(0, 0), Point(Q(1, 3), Q(1, 7)), Point(5, 5), Point(Q(16, 3), Q(51, 10))]
    state, breaker = play_rounds(maker_pts)
    assert breaker.registry.disks_disjoint()
    maker_idx = state.board.indices_of(Owner.MAKER)
    p1, p2 = state.board.points[maker_idx[0]], state.board.points[maker_idx[1]]
    assert breaker.registry.entries[maker_idx[0]].radius_sq == (p1 - p2).norm_sq() / 4
    # guards sit exactly on their circles
    for e in breaker.registry.entries.values():
        for g in e.guards:
            assert (g - e.center).norm_sq() == e.circle_radius ** 2


def test_lambda_five_unsupported():
    cfg = GameConfig(variant=Rule.BICHROMATIC, k=17, breaker_speed=10)
    breaker = PerturbedPolygonBreaker(lam=5)
    with pytest.raises(Exception):
        breaker.reset(cfg, Owner.BREAKER)


def test_one_round_double_strategy_runs():
    cfg = GameConfig(variant=Rule.BICHROMATIC, k=3, breaker_speed=2, seed=3, max_points=30, detect_win=False)
    from holegames.engine import run_match
    from holegames.baselines import RandomStrategy

    trace = run_match(RandomStrategy(), OneRoundDoubleBreaker(), cfg)
    assert not trace.annotations.get("error"), trace.annotations
