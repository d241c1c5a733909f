from fractions import Fraction as F

import pytest

from corematch import BuyerMarket, Market


def fr(rows):
    return tuple(tuple(F(v) for v in row) for row in rows)


@pytest.fixture
def bench():
    """Two firms with capacities (2,1), three workers; unique optimum 18."""
    return Market(("f1", "f2"), (2, 1), ("w1", "w2", "w3"),
                  fr([[8, 6, 3], [7, 6, 4]]))


@pytest.fixture
def ones():
    """All-ones 2x3 market with capacities (2,2); single core point."""
    return Market(("f1", "f2"), (2, 2), ("w1", "w2", "w3"),
                  fr([[1, 1, 1], [1, 1, 1]]))


@pytest.fixture
def dd():
    """Dominant-diagonal market, capacities (2,1)."""
    return Market(("f1", "f2"), (2, 1), ("w1", "w2", "w3"),
                  fr([[6, 4, 1], [5, 4, 5]]))


@pytest.fixture
def tiny():
    """2x2 market with capacities (2,1); the lemaral counterexample."""
    return Market(("f1", "f2"), (2, 1), ("w1", "w2"),
                  fr([[4, 3], [3, 2]]))


@pytest.fixture
def buyers():
    """Three unit-demand buyers, two sellers with capacities (2,1)."""
    return BuyerMarket(("b1", "b2", "b3"), ("s1", "s2"), (2, 1),
                       fr([[8, 7], [6, 6], [3, 4]]))
