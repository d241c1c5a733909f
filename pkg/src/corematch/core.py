"""Worker-space core, competitive equilibria, and extreme salary bounds.

For a capacity-balanced market with reference optimal matching mu, the core
projects onto worker salaries as a system of at most n^2 + 2n difference
constraints, all of the form y[head] - y[tail] >= rhs over the node set
workers + {0}, where node 0 carries the fixed salary 0. Firm payoffs are then
determined, so membership, extremality, and the salary bounds can all be
decided in this space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import CorematchError, NotBalancedError, NotOptimalError
from .game import GameTable
from .market import BalancedMarket, Market, RawMarket, surplus_matrix
from .matching import (
    Matching,
    all_optimal_matchings,
    coalition_value,
    matching_arrays,
    optimal_matching,
    value_with_column_duplicated,
)

ZERO = Fraction(0)


class Allocation(NamedTuple):
    """Full payoff vector: firm payoffs and worker salaries, in market order."""

    firm_payoffs: tuple[Fraction, ...]
    worker_payoffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class CoreConstraint:
    """One core inequality y[head] - y[tail] >= rhs, with y[0] fixed to 0.

    tail == 0 encodes the lower bound y[head] >= rhs (= 0), head == 0 the
    upper bound -y[tail] >= rhs (= -a[tail's firm][tail]), and worker-worker
    rows the cross-firm difference bounds.
    """

    tail: int
    head: int
    rhs: Fraction

    def satisfied_by(self, y: Sequence[Fraction]) -> bool:
        return self.slack(y) >= 0

    def tight_at(self, y: Sequence[Fraction]) -> bool:
        return self.slack(y) == 0

    def slack(self, y: Sequence[Fraction]) -> Fraction:
        head = ZERO if self.head == 0 else y[self.head - 1]
        tail = ZERO if self.tail == 0 else y[self.tail - 1]
        return head - tail - self.rhs


@dataclass(frozen=True)
class CoreConstraintSystem:
    """The worker-space core of a balanced market at a reference matching."""

    bm: BalancedMarket
    matching: Matching
    firm_of: tuple[int, ...]
    constraints: tuple[CoreConstraint, ...]

    @property
    def n_workers(self) -> int:
        return self.bm.market.n_workers

    def contains(self, y: Sequence[Fraction]) -> bool:
        """Exact membership test for the competitive salary polytope."""
        if len(y) != self.n_workers:
            raise CorematchError(
                f"expected {self.n_workers} salaries, got {len(y)}"
            )
        return all(c.satisfied_by(y) for c in self.constraints)

    def tight_constraints(self, y: Sequence[Fraction]) -> tuple[CoreConstraint, ...]:
        return tuple(c for c in self.constraints if c.tight_at(y))

    def upper_bound(self, j: int) -> Fraction:
        """a[j's matched firm][j], the box upper bound of worker j."""
        return self.bm.market.matrix[self.firm_of[j]][j]


def _saturating_arrays(bm: BalancedMarket, mu: Matching) -> tuple[list, list]:
    m = bm.market
    if not m.is_balanced:
        raise NotBalancedError("internal: balanced market expected")
    firm_of, workers_of = matching_arrays(m, mu)
    if any(f is None for f in firm_of):
        raise NotOptimalError(
            "reference matching must assign every worker of the balanced market"
        )
    return firm_of, workers_of


def check_optimal(m: Market, mu: Matching) -> Fraction:
    """Value of ``mu``, raising unless it attains the market optimum."""
    matching_arrays(m, mu)
    value = mu.value(m)
    best = coalition_value(m, m.firm_ids, m.worker_ids)
    if value != best:
        raise NotOptimalError(
            f"matching value {value} is below the optimum {best}"
        )
    return value


def core_constraints(bm: BalancedMarket, mu: Matching) -> CoreConstraintSystem:
    """Build the worker-space core system for ``bm`` at optimal matching ``mu``.

    Rows: 0 <= y_j <= a[mu(j)][j] for every worker, and
    y_k - y_j >= a[mu(j)][k] - a[mu(j)][j] for workers of different firms.
    """
    m = bm.market
    check_optimal(m, mu)
    firm_of, _ = _saturating_arrays(bm, mu)
    n = m.n_workers
    rows: list[CoreConstraint] = []
    for j in range(n):
        rows.append(CoreConstraint(0, j + 1, ZERO))
    for j in range(n):
        rows.append(CoreConstraint(j + 1, 0, -m.matrix[firm_of[j]][j]))
    for j in range(n):
        a_j = m.matrix[firm_of[j]]
        for k in range(n):
            if k == j or firm_of[k] == firm_of[j]:
                continue
            rows.append(CoreConstraint(j + 1, k + 1, a_j[k] - a_j[j]))
    assert len(rows) <= n * n + 2 * n
    return CoreConstraintSystem(bm, mu, tuple(firm_of), tuple(rows))


def is_in_worker_core(system: CoreConstraintSystem, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` is a competitive salary vector of the balanced market."""
    return system.contains(y)


def firm_payoffs(
    bm: BalancedMarket, mu: Matching, y: Sequence[Fraction]
) -> Allocation:
    """The allocation induced by salaries ``y``: x_i = sum of a[i][j] - y_j
    over the workers matched to firm i, mapped back to the original market."""
    m = bm.market
    firm_of, workers_of = _saturating_arrays(bm, mu)
    if len(y) == bm.n_original_workers:
        y = bm.extend_worker_vector(y)
    if len(y) != m.n_workers:
        raise CorematchError(f"expected {m.n_workers} salaries, got {len(y)}")
    x = []
    for i in range(bm.n_original_firms):
        x.append(sum((m.matrix[i][j] - y[j] for j in workers_of[i]), ZERO))
    return Allocation(tuple(x), bm.strip_worker_vector(y))


def candidate_masks(g: GameTable) -> list[int]:
    """Bitmasks of the essential-candidate coalitions of the game."""
    masks = [1 << i for i in range(g.n_players)]
    nf = g.n_firms
    nw = g.n_players - nf
    for i in range(nf):
        cap = g.capacities[i]
        fbit = 1 << i
        for wmask in range(1, 1 << nw):
            if wmask.bit_count() <= cap:
                masks.append(fbit | (wmask << nf))
    return masks


def core_violation(
    g: GameTable, alloc: Allocation, *, full: bool = False
) -> frozenset[str] | None:
    """A coalition witnessing that ``alloc`` is not in the core, or None.

    Checks efficiency plus coalitional rationality over the essential
    candidates; ``full=True`` scans every coalition instead (cross-check
    mode). The grand coalition is returned when efficiency fails.
    """
    z = list(alloc.firm_payoffs) + list(alloc.worker_payoffs)
    if len(z) != g.n_players:
        raise CorematchError("allocation does not match the game's players")
    if sum(z, ZERO) != g.values[g.grand_mask]:
        return g.coalition_of(g.grand_mask)
    if full:
        sums = g.payoff_sums(z)
        for mask in range(1, g.grand_mask):
            if sums[mask] < g.values[mask]:
                return g.coalition_of(mask)
        return None
    for mask in candidate_masks(g):
        total = ZERO
        mm = mask
        while mm:
            low = mm & -mm
            total += z[low.bit_length() - 1]
            mm ^= low
        if total < g.values[mask]:
            return g.coalition_of(mask)
    return None


def is_core_allocation(g: GameTable, alloc: Allocation, *, full: bool = False) -> bool:
    """Exact core membership of a full payoff vector."""
    return core_violation(g, alloc, full=full) is None


def demand_value(m: Market, i: int, y: Sequence[Fraction]) -> Fraction:
    """Best net value firm i can get from any bundle of at most r_i workers."""
    gains = sorted(
        (m.matrix[i][j] - y[j] for j in range(m.n_workers)), reverse=True
    )
    total = ZERO
    for gain in gains[: m.capacities[i]]:
        if gain <= 0:
            break
        total += gain
    return total


def is_competitive_equilibrium(
    m: Market, mu: Matching, y: Sequence[Fraction]
) -> bool:
    """True iff (mu, y) is a competitive equilibrium: every firm's assigned
    bundle maximizes its net value at salaries y, and unmatched workers have
    zero salary."""
    if len(y) != m.n_workers:
        raise CorematchError(f"expected {m.n_workers} salaries, got {len(y)}")
    if any(v < 0 for v in y):
        return False
    firm_of, workers_of = matching_arrays(m, mu)
    for i in range(m.n_firms):
        bundle = sum((m.matrix[i][j] - y[j] for j in workers_of[i]), ZERO)
        if bundle != demand_value(m, i, y):
            return False
    for j in range(m.n_workers):
        if firm_of[j] is None and y[j] != 0:
            return False
    return True


def max_competitive_salaries(m: Market) -> tuple[Fraction, ...]:
    """The worker-optimal salary vector: each worker's marginal contribution
    to the grand coalition."""
    total = coalition_value(m, m.firm_ids, m.worker_ids)
    out = []
    for w in m.worker_ids:
        others = tuple(x for x in m.worker_ids if x != w)
        out.append(total - coalition_value(m, m.firm_ids, others))
    return tuple(out)


def min_competitive_salaries(m: Market) -> tuple[Fraction, ...]:
    """The firm-optimal salary vector: the value added by a clone of each
    worker when the clone may not join the same firm as the original."""
    total = coalition_value(m, m.firm_ids, m.worker_ids)
    return tuple(
        value_with_column_duplicated(m, w) - total for w in m.worker_ids
    )


@dataclass(frozen=True)
class DecreaseReport:
    """Validity of a constant decrease of one firm's valuations.

    ``within_matched_surplus``: the decrease does not exceed any surplus the
    firm realizes under any optimal matching. ``keeps_optimal_matchings``:
    every optimal matching of the original market stays optimal afterwards.
    """

    firm_id: str
    amount: Fraction
    within_matched_surplus: bool
    keeps_optimal_matchings: bool

    @property
    def valid(self) -> bool:
        return self.within_matched_surplus and self.keeps_optimal_matchings


def constant_decrease(
    raw: RawMarket, firm_id: str, c: Fraction, *, limit: int = 10
) -> tuple[RawMarket, DecreaseReport]:
    """Decrease all hire values of one firm by ``c`` (floored at zero) and
    report whether the decrease satisfies the invariance conditions."""
    c = Fraction(c)
    if c < 0:
        raise CorematchError("the decrease must be non-negative")
    market = surplus_matrix(raw)
    i0 = market.firm_index(firm_id)
    new_h = tuple(
        tuple(max(h - c, ZERO) for h in row) if i == i0 else row
        for i, row in enumerate(raw.hire_values)
    )
    decreased_raw = RawMarket(
        raw.firm_ids, raw.capacities, raw.worker_ids, new_h, raw.reservations
    )
    decreased = surplus_matrix(decreased_raw)

    old_optimal = all_optimal_matchings(market, limit=limit)
    within = True
    for mu in old_optimal:
        for w in mu.workers_of(firm_id):
            if c > market.matrix[i0][market.worker_index(w)]:
                within = False
    new_optimal = set(all_optimal_matchings(decreased, limit=limit))
    keeps = all(mu in new_optimal for mu in old_optimal)
    return decreased_raw, DecreaseReport(firm_id, c, within, keeps)


def max_valid_decrease(m: Market, firm_id: str) -> Fraction:
    """The largest valid constant decrease for a firm: the least surplus
    margin a[i0][j] - min_salary_j over its optimally matched workers."""
    i0 = m.firm_index(firm_id)
    mu = optimal_matching(m).matching
    matched = mu.workers_of(firm_id)
    if not matched:
        raise CorematchError(
            f"firm {firm_id!r} hires nobody under the optimal matching"
        )
    lower = min_competitive_salaries(m)
    return min(
        m.matrix[i0][m.worker_index(w)] - lower[m.worker_index(w)]
        for w in matched
    )
