from fractions import Fraction as F

import pytest

from corematch import (
    CorematchError,
    Market,
    RawMarket,
    balance,
    restrict,
    surplus_matrix,
)
from conftest import fr
from helpers import random_market
from random import Random


def test_surplus_clamps_at_zero():
    raw = RawMarket(("f1",), (1,), ("w1", "w2"),
                    fr([[8, 3]]), (F(0), F(5)))
    m = surplus_matrix(raw)
    assert m.matrix == fr([[8, 0]])


def test_surplus_recovers_bench_matrix(bench):
    raw = RawMarket(("f1", "f2"), (2, 1), ("w1", "w2", "w3"),
                    fr([[9, 7, 3], [8, 7, 4]]), (F(1), F(1), F(0)))
    assert surplus_matrix(raw) == bench


def test_surplus_dominates_difference():
    rng = Random(7)
    for _ in range(50):
        h = tuple(F(rng.randint(0, 9), rng.choice((1, 2))) for _ in range(3))
        t = F(rng.randint(0, 9), rng.choice((1, 2)))
        raw = RawMarket(("f1",), (2,), ("w1", "w2", "w3"), (h,), (t, t, t))
        m = surplus_matrix(raw)
        for a, hv in zip(m.matrix[0], h):
            assert a >= 0 and a >= hv - t


def test_balance_identity_when_already_balanced(bench):
    bm = balance(bench)
    assert bm.market == bench
    assert bm.dummy_worker_ids == ()
    assert bm.dummy_firm_id is None


def test_balance_appends_dummy_worker(ones):
    bm = balance(ones)
    assert len(bm.dummy_worker_ids) == 1
    assert bm.market.n_workers == 4
    assert all(row[3] == 0 for row in bm.market.matrix)
    # stripping the dummies recovers the original exactly
    assert restrict(bm.market, bm.market.firm_ids, ones.worker_ids) == ones


def test_balance_appends_dummy_firm():
    m = Market(("f1", "f2"), (1, 1), ("w1", "w2", "w3"), fr([[1, 2, 3], [4, 5, 6]]))
    bm = balance(m)
    assert bm.dummy_firm_id is not None
    assert bm.market.capacities[-1] == 1
    assert bm.market.matrix[-1] == (F(0),) * 3


def test_balance_never_alters_existing_entries():
    rng = Random(3)
    for _ in range(40):
        m = random_market(rng)
        bm = balance(m)
        for i in range(m.n_firms):
            assert bm.market.capacities[i] == m.capacities[i]
            for j in range(m.n_workers):
                assert bm.market.matrix[i][j] == m.matrix[i][j]
        assert bm.market.total_capacity == bm.market.n_workers


def test_restrict_full_is_identity(bench):
    assert restrict(bench, bench.firm_ids, bench.worker_ids) == bench


def test_restrict_single_pair(bench):
    sub = restrict(bench, ["f2"], ["w3"])
    assert sub.matrix == ((F(4),),)
    assert sub.capacities == (1,)


def test_restrict_row(bench):
    sub = restrict(bench, ["f1"], ["w1", "w2"])
    assert sub.matrix == ((F(8), F(6)),)
    assert sub.capacities == (2,)


def test_zero_capacity_rejected():
    with pytest.raises(CorematchError):
        Market(("f1",), (0,), ("w1",), fr([[1]]))


def test_negative_surplus_rejected():
    with pytest.raises(CorematchError):
        Market(("f1",), (1,), ("w1",), ((F(-1),),))


def test_duplicate_ids_rejected():
    with pytest.raises(CorematchError):
        Market(("f1", "f1"), (1, 1), ("w1",), fr([[1], [2]]))


def test_reserved_dummy_prefix_rejected():
    with pytest.raises(CorematchError):
        Market(("__dummy_f",), (1,), ("w1",), fr([[1]]))


def test_cross_side_id_clash_rejected():
    with pytest.raises(CorematchError):
        Market(("a",), (1,), ("a",), fr([[1]]))
