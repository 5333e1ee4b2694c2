import random
from itertools import combinations

import pytest

from conftest import random_general_position
from holegames.board import Owner, PointSet, Rule
from holegames.geom import Point, convex_hull, point_in_convex_polygon
from holegames.oracle import (
    NotSubset,
    WrongCardinality,
    any_k_hole,
    count_k_holes,
    enumerate_k_holes,
    find_k_hole,
    verify_hole,
)
from holegames.rationals import Q

SQUARE = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]


def brute_count(board: PointSet, k: int, rule: Rule) -> int:
    """Plain C(n,k) enumeration, independent of the fan pruning."""
    pts = board.points
    total = 0
    for idx in combinations(range(len(pts)), k):
        if rule is Rule.BICHROMATIC and any(
            board.owners[i] is not Owner.MAKER for i in idx
        ):
            continue
        cand = [pts[i] for i in idx]
        hull = convex_hull(cand)
        if len(hull) != k:
            continue
        if any(
            point_in_convex_polygon(hull, pts[j], closed=True)
            for j in range(len(pts))
            if j not in idx
        ):
            continue
        total += 1
    return total


def test_verify_hole_spec_examples():
    tri = PointSet.from_points([Point(0, 0), Point(3, 1), Point(1, 4)])
    assert verify_hole(tri, tri.points, 3, Rule.MONOCHROMATIC)

    board = PointSet.from_points(SQUARE + [Point("2/5", "1/2")])
    assert not verify_hole(board, SQUARE, 4, Rule.MONOCHROMATIC)
    # h(4) = 5: some 4-subset including the interior point is a hole
    center = Point("2/5", "1/2")
    found = False
    for sub in combinations(board.points, 4):
        if center in sub and verify_hole(board, list(sub), 4, Rule.MONOCHROMATIC):
            found = True
    assert found


def test_verify_hole_errors():
    board = PointSet.from_points(SQUARE)
    with pytest.raises(WrongCardinality):
        verify_hole(board, SQUARE[:3], 4, Rule.MONOCHROMATIC)
    with pytest.raises(NotSubset):
        verify_hole(board, SQUARE[:3] + [Point(9, 9)], 4, Rule.MONOCHROMATIC)


def test_count_spec_examples():
    board = PointSet.from_points(SQUARE)
    assert count_k_holes(board, 3) == 4
    assert count_k_holes(board, 4) == 1
    five = PointSet.from_points(
        [Point(0, 0), Point(4, 1), Point(5, 4), Point(1, 5), Point(-2, 2)]
    )
    assert count_k_holes(five, 5) == 1


def test_find_k_hole_lexicographic_and_none():
    board = PointSet.from_points(SQUARE + [Point("2/5", "1/2")])
    cert = find_k_hole(board, 4)
    assert cert is not None
    assert min(enumerate_k_holes(board, 4, Rule.MONOCHROMATIC)) == tuple(
        cert.indices_in(board)
    )
    small = PointSet.from_points(SQUARE[:2])
    assert find_k_hole(small, 3) is None


def test_fan_enumeration_matches_brute_force(rng):
    for trial in range(60):
        n = rng.randrange(4, 11)
        k = rng.randrange(3, 7)
        pts = random_general_position(rng, n)
        board = PointSet()
        for p in pts:
            board.add(p, Owner.MAKER if rng.random() < 0.6 else Owner.BREAKER)
        for rule in (Rule.MONOCHROMATIC, Rule.BICHROMATIC):
            assert count_k_holes(board, k, rule) == brute_count(board, k, rule)


def test_find_none_iff_count_zero(rng):
    for trial in range(150):
        n = rng.randrange(3, 13)
        k = rng.randrange(3, 7)
        board = PointSet.from_points(random_general_position(rng, n))
        cert = find_k_hole(board, k)
        cnt = count_k_holes(board, k)
        assert (cert is None) == (cnt == 0)
        if cert is not None:
            assert verify_hole(board, list(cert.vertices), k, Rule.MONOCHROMATIC)


def test_bichromatic_at_most_monochromatic(rng):
    for trial in range(40):
        pts = random_general_position(rng, rng.randrange(5, 11))
        board = PointSet()
        for p in pts:
            board.add(p, Owner.MAKER if rng.random() < 0.5 else Owner.BREAKER)
        for k in (3, 4):
            assert count_k_holes(board, k, Rule.BICHROMATIC) <= count_k_holes(
                board, k, Rule.MONOCHROMATIC
            )


def test_certificates_survive_removal(rng):
    """A hole of S u {p} avoiding p is a hole of S."""
    for trial in range(40):
        pts = random_general_position(rng, 9)
        board = PointSet.from_points(pts)
        bigger = count_and_collect(board, 4)
        smaller = PointSet.from_points(pts[:-1])
        dropped = pts[-1]
        for tup in bigger:
            verts = [board.points[i] for i in tup]
            if dropped in verts:
                continue
            assert verify_hole(smaller, verts, 4, Rule.MONOCHROMATIC)


def count_and_collect(board, k):
    return list(enumerate_k_holes(board, k, Rule.MONOCHROMATIC))


def test_any_k_hole_with_required_vertex(rng):
    for trial in range(40):
        pts = random_general_position(rng, 8)
        board = PointSet.from_points(pts)
        for i in range(len(pts)):
            got = any_k_hole(board, 3, Rule.MONOCHROMATIC, require_vertex=i)
            holes_with_i = [
                tup for tup in enumerate_k_holes(board, 3, Rule.MONOCHROMATIC) if i in tup
            ]
            assert (got is not None) == bool(holes_with_i)
            if got is not None:
                assert pts[i] in got.vertices
