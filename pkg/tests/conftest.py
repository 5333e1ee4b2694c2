import random

import pytest

from holegames.board import Owner, PointSet
from holegames.geom import Point
from holegames.rationals import Q


def random_general_position(rng: random.Random, n: int, span: int = 40, denom: int = 16):
    """n random rational points, rejection-sampled into general position."""
    board = PointSet()
    while len(board) < n:
        p = Point(
            Q(rng.randrange(-span * denom, span * denom + 1), denom),
            Q(rng.randrange(-span * denom, span * denom + 1), denom),
        )
        if board.collinearity_conflict(p) is None:
            board.add(p, Owner.MAKER)
    return board.points


@pytest.fixture
def rng():
    return random.Random(20240817)
