from fractions import Fraction as F
from random import Random

import pytest

from corematch import (
    Allocation,
    Market,
    NotOptimalError,
    RawMarket,
    balance,
    build_game,
    constant_decrease,
    core_constraints,
    core_violation,
    firm_payoffs,
    is_competitive_equilibrium,
    is_core_allocation,
    is_in_worker_core,
    max_competitive_salaries,
    max_valid_decrease,
    min_competitive_salaries,
    optimal_matching,
    surplus_matrix,
)
from corematch.matching import Matching
from conftest import fr
from helpers import brute_force_core_membership, random_balanced_market


def _system(m):
    bm = balance(m)
    mu = optimal_matching(bm.market).matching
    return bm, mu, core_constraints(bm, mu)


def test_bench_constraint_rows(bench):
    _, _, system = _system(bench)
    rows = {(c.tail, c.head, c.rhs) for c in system.constraints}
    assert rows == {
        (0, 1, F(0)), (0, 2, F(0)), (0, 3, F(0)),
        (1, 0, F(-8)), (2, 0, F(-6)), (3, 0, F(-4)),
        (1, 3, F(-5)), (2, 3, F(-3)),
        (3, 1, F(3)), (3, 2, F(2)),
    }


def test_constraint_count_bound():
    rng = Random(37)
    for _ in range(20):
        m = random_balanced_market(rng)
        _, _, system = _system(m)
        n = m.n_workers
        assert len(system.constraints) <= n * n + 2 * n


def test_single_firm_has_only_boxes():
    m = Market(("f1",), (3,), ("w1", "w2", "w3"), fr([[5, 4, 3]]))
    _, _, system = _system(m)
    assert all(c.tail == 0 or c.head == 0 for c in system.constraints)


def test_ones_constraints(ones):
    bm, _, system = _system(ones)
    # real workers: boxes [0, 1]; cross-firm differences >= 0
    for c in system.constraints:
        if c.tail == 0:
            assert c.rhs == 0
        elif c.head == 0:
            assert c.rhs in (F(-1), F(0))  # dummy column upper bound is 0
    assert bm.market.n_workers == 4


def test_non_optimal_reference_rejected(bench):
    bm = balance(bench)
    bad = Matching((("f1", "w1"), ("f1", "w3"), ("f2", "w2")))
    with pytest.raises(NotOptimalError):
        core_constraints(bm, bad)


def test_worker_core_membership(bench):
    _, _, system = _system(bench)
    assert is_in_worker_core(system, (F(3), F(2), F(0)))
    assert not is_in_worker_core(system, (F(0), F(6), F(3)))
    assert is_in_worker_core(system, (F(8), F(6), F(4)))


def test_firm_payoffs(bench):
    bm, mu, _ = _system(bench)
    assert firm_payoffs(bm, mu, (F(3), F(2), F(0))).firm_payoffs == (F(9), F(4))
    assert firm_payoffs(bm, mu, (F(8), F(6), F(4))).firm_payoffs == (F(0), F(0))
    # paying every box upper bound leaves all firms with zero
    uppers = tuple(bm.market.matrix[system_firm][j]
                   for j, system_firm in enumerate(_system(bench)[2].firm_of))
    assert firm_payoffs(bm, mu, uppers).firm_payoffs == (F(0), F(0))


def test_core_allocation_checks(ones, dd):
    g = build_game(ones)
    bad = Allocation((F(1), F(1)), (F(1, 3),) * 3)
    assert not is_core_allocation(g, bad)
    good = Allocation((F(0), F(0)), (F(1),) * 3)
    assert is_core_allocation(g, good)
    g_dd = build_game(dd)
    alloc = Allocation((F(0), F(5)), (F(6), F(4), F(0)))
    assert core_violation(g_dd, alloc) == frozenset(("f1", "w3"))


def test_core_allocation_full_mode_agrees(ones):
    g = build_game(ones)
    rng = Random(41)
    for _ in range(30):
        z = [F(rng.randint(0, 3), rng.choice((1, 2, 3))) for _ in range(5)]
        alloc = Allocation(tuple(z[:2]), tuple(z[2:]))
        assert is_core_allocation(g, alloc) == is_core_allocation(
            g, alloc, full=True
        )
        assert is_core_allocation(g, alloc, full=True) == (
            brute_force_core_membership(g, z)
        )


def test_competitive_equilibrium(bench):
    mu = optimal_matching(bench).matching
    assert is_competitive_equilibrium(bench, mu, (F(3), F(2), F(0)))
    # at zero salaries f2 demands w1 (7) over its assigned w3 (4)
    assert not is_competitive_equilibrium(bench, mu, (F(0), F(0), F(0)))


def test_demand_value_matches_bundle_enumeration():
    from itertools import combinations

    from corematch.core import demand_value

    rng = Random(151)
    for _ in range(25):
        m = random_balanced_market(rng, n_workers=rng.randint(2, 4))
        y = tuple(F(rng.randint(0, 10), 2) for _ in range(m.n_workers))
        for i in range(m.n_firms):
            best = F(0)
            for size in range(1, m.capacities[i] + 1):
                for bundle in combinations(range(m.n_workers), size):
                    gain = sum((m.matrix[i][j] - y[j] for j in bundle), F(0))
                    best = max(best, gain)
            assert demand_value(m, i, y) == best


def test_unmatched_worker_needs_zero_salary():
    m = Market(("f1",), (1,), ("w1", "w2"), fr([[5, 0]]))
    mu = Matching((("f1", "w1"),))
    assert is_competitive_equilibrium(m, mu, (F(0), F(0)))
    assert not is_competitive_equilibrium(m, mu, (F(0), F(1)))


def test_salary_bounds(bench, dd):
    assert max_competitive_salaries(bench) == (F(8), F(6), F(4))
    assert min_competitive_salaries(bench) == (F(3), F(2), F(0))
    assert max_competitive_salaries(dd) == (F(6), F(4), F(5))
    assert min_competitive_salaries(dd) == (F(0), F(0), F(0))


def test_null_worker_and_single_pair_bounds():
    m = Market(("f1",), (1,), ("w1", "w2"), fr([[5, 0]]))
    assert max_competitive_salaries(m)[1] == 0
    single = Market(("f1",), (1,), ("w1",), fr([[5]]))
    assert min_competitive_salaries(single) == (F(0),)
    assert max_competitive_salaries(single) == (F(5),)


def test_core_equivalences_on_random_markets():
    rng = Random(43)
    for _ in range(25):
        m = random_balanced_market(rng, n_workers=rng.randint(2, 4))
        bm, mu, system = _system(m)
        g = build_game(m)
        n = m.n_workers
        uppers = [m.matrix[system.firm_of[j]][j] for j in range(n)]
        for _ in range(12):
            y = tuple(
                F(rng.randint(0, int(uppers[j] * 2) + 1), 2) for j in range(n)
            )
            in_cw = is_in_worker_core(system, y)
            alloc = firm_payoffs(bm, mu, y)
            assert in_cw == is_core_allocation(g, alloc, full=True)
            assert in_cw == is_competitive_equilibrium(m, mu, y)


def test_lattice_bounds_hold_at_extremes(bench):
    from corematch import brute_force_vertices

    bm, _, _ = _system(bench)
    lo = min_competitive_salaries(bench)
    hi = max_competitive_salaries(bench)
    for vertex in brute_force_vertices(bm):
        assert all(lo[j] <= vertex[j] <= hi[j] for j in range(3))


def test_boundary_salaries_corollary():
    rng = Random(47)
    for _ in range(20):
        m = random_balanced_market(rng, n_workers=rng.randint(2, 4))
        bm, mu, system = _system(m)
        lo = min_competitive_salaries(m)
        hi = max_competitive_salaries(m)
        assert any(v == 0 for v in lo)
        assert any(
            hi[j] == m.matrix[system.firm_of[j]][j] for j in range(m.n_workers)
        )


RAW_BENCH = RawMarket(("f1", "f2"), (2, 1), ("w1", "w2", "w3"),
                      fr([[9, 7, 3], [8, 7, 4]]), (F(1), F(1), F(0)))


def test_constant_decrease_zero_is_identity():
    decreased, report = constant_decrease(RAW_BENCH, "f1", F(0))
    assert decreased == RAW_BENCH
    assert report.valid


def test_constant_decrease_f2_by_four():
    decreased, report = constant_decrease(RAW_BENCH, "f2", F(4))
    m = surplus_matrix(decreased)
    assert m.matrix[1] == (F(3), F(2), F(0))
    assert report.within_matched_surplus  # c = 4 <= a[f2][w3] = 4
    # the old optimum stays optimal in the decreased market
    assert report.keeps_optimal_matchings
    assert report.valid


def test_constant_decrease_clamps_and_fails_condition():
    decreased, report = constant_decrease(RAW_BENCH, "f2", F(9))
    m = surplus_matrix(decreased)
    assert m.matrix[1] == (F(0), F(0), F(0))
    assert not report.within_matched_surplus


def test_max_valid_decrease(bench):
    assert max_valid_decrease(bench, "f1") == 4  # min{8-3, 6-2}
    assert max_valid_decrease(bench, "f2") == 4  # 4 - 0


def test_max_valid_decrease_touching_zero():
    # two firms bidding 5 for one worker: competition forces the minimum
    # salary up to the full surplus, leaving no room to decrease
    m = Market(("f1", "f2"), (1, 1), ("w1",), fr([[5], [5]]))
    assert min_competitive_salaries(m) == (F(5),)
    assert max_valid_decrease(m, "f1") == 0


def test_min_salary_invariance_under_valid_decrease():
    rng = Random(53)
    checked = 0
    for _ in range(30):
        m = random_balanced_market(rng, n_workers=rng.randint(2, 4))
        raw = RawMarket(m.firm_ids, m.capacities, m.worker_ids, m.matrix,
                        (F(0),) * m.n_workers)
        mu = optimal_matching(m).matching
        firm = rng.choice(m.firm_ids)
        if not mu.workers_of(firm):
            continue
        c_star = max_valid_decrease(m, firm)
        lo = min_competitive_salaries(m)
        for c in {F(0), c_star / 2, c_star}:
            decreased, report = constant_decrease(raw, firm, c)
            if not report.valid:
                continue
            lo_c = min_competitive_salaries(surplus_matrix(decreased))
            for w in mu.workers_of(firm):
                j = m.worker_index(w)
                assert lo_c[j] == lo[j]
                checked += 1
    assert checked > 20
