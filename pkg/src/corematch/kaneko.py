"""The mirrored buyer-seller market: unit-demand buyers, capacitated sellers.

Transposing the matrix turns this into the job-market model with sellers in
the firm role, so the core machinery is reused directly. The difference sits
in the competitive equilibria: all units of a seller trade at one price, so
the CE payoff set adds difference constraints between buyers of the same
seller and can be strictly smaller than the core.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Allocation,
    CoreConstraint,
    CoreConstraintSystem,
    core_constraints,
    firm_payoffs,
)
from .errors import CorematchError, NotInCoreError
from .market import BalancedMarket, Market, balance
from .matching import Matching, matching_arrays, optimal_matching
from .maxmin import _scan, vertices_of_system
from .tight_digraph import TightDigraph

ZERO = Fraction(0)


@dataclass(frozen=True)
class BuyerMarket:
    """Buyers value one unit each; sellers offer up to their capacity."""

    buyer_ids: tuple[str, ...]
    seller_ids: tuple[str, ...]
    capacities: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]  # buyers x sellers

    def __post_init__(self):
        if len(self.matrix) != len(self.buyer_ids) or any(
            len(row) != len(self.seller_ids) for row in self.matrix
        ):
            raise CorematchError("valuation matrix must be buyers x sellers")
        transposed = tuple(
            tuple(self.matrix[i][j] for i in range(len(self.buyer_ids)))
            for j in range(len(self.seller_ids))
        )
        job = Market(self.seller_ids, self.capacities, self.buyer_ids, transposed)
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))
        object.__setattr__(self, "_job", job)

    def as_job_market(self) -> Market:
        """The transposed market: sellers act as capacitated firms."""
        return self._job

    def balanced(self) -> BalancedMarket:
        return balance(self._job)


def optimal_assignment(b: BuyerMarket) -> Matching:
    """Optimal matching of the balanced transposed market; pairs are
    (seller id, buyer id)."""
    return optimal_matching(b.balanced().market).matching


def buyer_core_constraints(
    b: BuyerMarket, mu: Matching | None = None
) -> CoreConstraintSystem:
    """The buyer-space core: boxes plus difference constraints between buyers
    of different sellers."""
    bm = b.balanced()
    if mu is None:
        mu = optimal_matching(bm.market).matching
    return core_constraints(bm, mu)


def ce_constraints(
    b: BuyerMarket, mu: Matching | None = None
) -> CoreConstraintSystem:
    """The competitive-equilibrium payoff set: the core constraints plus the
    difference constraints between buyers of the same seller, which force a
    single per-unit price per seller."""
    base = buyer_core_constraints(b, mu)
    m = base.bm.market
    firm_of = base.firm_of
    extra = []
    for j in range(m.n_workers):
        row_j = m.matrix[firm_of[j]]
        for k in range(m.n_workers):
            if k != j and firm_of[j] == firm_of[k]:
                extra.append(CoreConstraint(j + 1, k + 1, row_j[k] - row_j[j]))
    return CoreConstraintSystem(
        base.bm, base.matching, firm_of, base.constraints + tuple(extra)
    )


def seller_payoffs(
    b: BuyerMarket, mu: Matching, x: Sequence[Fraction]
) -> Allocation:
    """Allocation induced by buyer payoffs x: each seller collects the
    residual a[i][j] - x_i over its buyers."""
    return firm_payoffs(b.balanced(), mu, x)


def ce_prices(
    b: BuyerMarket, x: Sequence[Fraction], mu: Matching | None = None
) -> tuple[Fraction, ...]:
    """Per-seller unit prices supporting a CE payoff vector."""
    system = ce_constraints(b, mu)
    bm = system.bm
    if len(x) == bm.n_original_workers:
        x = bm.extend_worker_vector(x)
    if not system.contains(x):
        raise NotInCoreError(f"{tuple(x)} is not a CE payoff vector")
    m = bm.market
    _, buyers_of = matching_arrays(m, system.matching)
    prices = []
    for j in range(b.balanced().n_original_firms):
        block = buyers_of[j]
        values = {m.matrix[j][i] - x[i] for i in block}
        if len(values) != 1:
            raise AssertionError("inconsistent prices inside a seller block")
        prices.append(values.pop())
    return tuple(prices)


@dataclass(frozen=True)
class CEVertex:
    buyer_payoffs: tuple[Fraction, ...]
    prices: tuple[Fraction, ...]


def ce_vertices(b: BuyerMarket, *, limit: int = 6) -> tuple[CEVertex, ...]:
    """All extreme CE payoff vectors (projected to the original buyers).

    The vertex-enumeration oracle on the CE constraint system is the
    authority; the modified max-min scan (predecessors over all buyers) is
    compared against it and any discrepancy is reported as a warning.
    """
    system = ce_constraints(b)
    bm = system.bm
    vertices = vertices_of_system(system, limit=limit)

    m = bm.market
    scale, _, _, witnesses = _scan(m, list(system.firm_of), False, False)
    scanned = frozenset(
        tuple(Fraction(v, scale) for v in vec) for vec in witnesses
    )
    if scanned != vertices:
        warnings.warn(
            "max-min scan and vertex oracle disagree on the CE extreme set; "
            "returning the oracle result",
            stacklevel=2,
        )
    out = []
    for vec in sorted(vertices):
        stripped = bm.strip_worker_vector(vec)
        out.append(CEVertex(stripped, ce_prices(b, vec)))
    return tuple(out)


def extended_tight_digraph(
    b: BuyerMarket, mu: Matching, x: Sequence[Fraction]
) -> TightDigraph:
    """Tight digraph over buyers + ground node built from all CE constraints;
    same-seller equalities contribute arcs in both directions."""
    system = ce_constraints(b, mu)
    bm = system.bm
    if len(x) == bm.n_original_workers:
        x = bm.extend_worker_vector(x)
    if not system.contains(x):
        raise NotInCoreError(f"{tuple(x)} is not a CE payoff vector")
    return TightDigraph(system.n_workers, system.tight_constraints(x))


def ce_equals_core(b: BuyerMarket) -> bool:
    """Sufficient condition for every core element to be competitive: moving
    any buyer from its seller to another seller's buyer slot (swapping with a
    buyer there) never gains in total value."""
    bm = b.balanced()
    m = bm.market
    mu = optimal_matching(m).matching
    _, buyers_of = matching_arrays(m, mu)
    n_sellers = m.n_firms
    for j in range(n_sellers):
        for jp in range(n_sellers):
            if j == jp:
                continue
            for i in buyers_of[j]:
                for ip in buyers_of[jp]:
                    if (
                        m.matrix[jp][i] + m.matrix[j][ip]
                        < m.matrix[j][i] + m.matrix[jp][ip]
                    ):
                        return False
    return True
