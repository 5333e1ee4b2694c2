import random

import pytest
from hypothesis import given, settings, strategies as st

from holegames.board import IllegalCollinear, Owner, PointSet
from holegames.geom import COLLINEAR, Point, orientation
from holegames.rationals import Q

coords = st.integers(min_value=-12, max_value=12)
points = st.builds(lambda x, y: Point(Q(x), Q(y)), coords, coords)


def brute_conflict(existing, p):
    for i, q in enumerate(existing):
        if q == p:
            return True
        for j in range(i + 1, len(existing)):
            if orientation(q, existing[j], p) == COLLINEAR:
                return True
    return False


@given(st.lists(points, min_size=0, max_size=14), points)
@settings(max_examples=300)
def test_slope_dict_matches_brute_force(pts, probe):
    board = PointSet()
    accepted = []
    for p in pts:
        try:
            board.add(p, Owner.MAKER)
            accepted.append(p)
        except IllegalCollinear:
            pass
    assert (board.collinearity_conflict(probe) is not None) == brute_conflict(accepted, probe)


def test_add_unadd_roundtrip():
    board = PointSet()
    board.add(Point(0, 0), Owner.MAKER)
    board.add(Point(1, 0), Owner.BREAKER)
    board.add(Point(0, 1), Owner.MAKER)
    with pytest.raises(IllegalCollinear):
        board.add(Point(2, 0), Owner.MAKER)
    board.add(Point(1, 2), Owner.MAKER)
    board.unadd()
    assert len(board) == 3
    # the removed point is placeable again
    board.add(Point(1, 2), Owner.MAKER)
    assert len(board) == 4
    assert board.points_of(Owner.BREAKER) == [Point(1, 0)]


def test_extra_screening():
    board = PointSet()
    board.add(Point(0, 0), Owner.MAKER)
    pending = [Point(2, 2)]
    assert board.collinearity_conflict(Point(1, 1), extra=pending) is not None
    assert board.collinearity_conflict(Point(1, 2), extra=pending) is None
    assert board.collinearity_conflict(Point(2, 2), extra=pending) is not None  # duplicate


def test_duplicate_reported_as_pair():
    board = PointSet()
    board.add(Point(3, 4), Owner.MAKER)
    conflict = board.collinearity_conflict(Point(3, 4))
    assert conflict == (Point(3, 4), Point(3, 4))
