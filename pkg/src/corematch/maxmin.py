"""Extended orders and the enumeration of extreme competitive salary vectors.

An extended order is a worker permutation with a minimize/maximize flag per
position. Walking the order, each worker's salary is set tight against the
strongest bound induced by its predecessors (zero / box bound when none
applies). Every extreme point of the salary polytope arises this way, so
scanning all n! * 2^n extended orders and keeping the vectors that satisfy
the core constraints yields exactly the extreme set. An independent
vertex-enumeration oracle over the same constraint rows cross-checks this.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from . import _kernels
from .core import Allocation, CoreConstraintSystem, core_constraints, firm_payoffs
from .errors import LimitExceededError
from .market import BalancedMarket
from .matching import Matching, matching_arrays, optimal_matching
from .rationals import common_denominator

ZERO = Fraction(0)
SENTINEL = _kernels.SENTINEL


@dataclass(frozen=True)
class ExtendedOrder:
    """A worker permutation with a maximize flag per position."""

    workers: tuple[str, ...]
    maximize: tuple[bool, ...]

    def __post_init__(self):
        if len(self.workers) != len(self.maximize):
            raise ValueError("one flag per position is required")

    def label(self) -> str:
        return "(" + ", ".join(
            f"{w}{'+' if up else '-'}" for w, up in zip(self.workers, self.maximize)
        ) + ")"


@dataclass(frozen=True)
class ExtremePoint:
    """An extreme salary vector with its witnesses and induced allocation."""

    salaries: tuple[Fraction, ...]
    allocation: Allocation
    witnesses: tuple[ExtendedOrder, ...]


@dataclass(frozen=True)
class ExtremeSet:
    points: tuple[ExtremePoint, ...]

    def salary_vectors(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(p.salaries for p in self.points)

    def witness_count(self) -> int:
        return sum(len(p.witnesses) for p in self.points)


def maxmin_vector(
    bm: BalancedMarket, mu: Matching, order: ExtendedOrder
) -> tuple[Fraction, ...]:
    """The salary vector built by honouring the order position by position."""
    m = bm.market
    firm_of, _ = matching_arrays(m, mu)
    if sorted(order.workers) != sorted(m.worker_ids):
        raise ValueError("order must be a permutation of the balanced workers")
    y: dict[int, Fraction] = {}
    placed: list[int] = []
    for wid, up in zip(order.workers, order.maximize):
        k = m.worker_index(wid)
        row_k = m.matrix[firm_of[k]]
        if up:
            best = row_k[k]
            for j in placed:
                if firm_of[j] != firm_of[k]:
                    best = min(best, y[j] - row_k[j] + row_k[k])
        else:
            best = ZERO
            for j in placed:
                if firm_of[j] != firm_of[k]:
                    row_j = m.matrix[firm_of[j]]
                    best = max(best, y[j] - row_j[j] + row_j[k])
        y[k] = best
        placed.append(k)
    return tuple(y[k] for k in range(m.n_workers))


def _scaled_tables(m, firm_of, skip_same_firm: bool):
    """Integer tables for the kernels: diagonal box bounds plus the lower and
    upper bound increments between ordered worker pairs."""
    n = m.n_workers
    scale = common_denominator(v for row in m.matrix for v in row)
    diag = [int(m.matrix[firm_of[j]][j] * scale) for j in range(n)]
    lower = [[SENTINEL] * n for _ in range(n)]
    upper = [[SENTINEL] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if k == j or (skip_same_firm and firm_of[j] == firm_of[k]):
                continue
            row_j = m.matrix[firm_of[j]]
            row_k = m.matrix[firm_of[k]]
            lower[j][k] = int((row_j[k] - row_j[j]) * scale)
            upper[j][k] = int((row_k[k] - row_k[j]) * scale)
    return scale, diag, lower, upper


def _scan(m, firm_of, skip_same_firm, collect_rows, jobs=1):
    n = m.n_workers
    scale, diag, lower, upper = _scaled_tables(m, firm_of, skip_same_firm)
    perms = list(permutations(range(n)))
    if jobs > 1 and not collect_rows and len(perms) >= jobs:
        chunk = (len(perms) + jobs - 1) // jobs
        parts = [perms[k : k + chunk] for k in range(0, len(perms), chunk)]
        args = [
            (part, n, diag, lower, upper, k * chunk)
            for k, part in enumerate(parts)
        ]
        witnesses: dict[tuple, list] = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part_wit in pool.map(_scan_chunk, args):
                for vec, codes in part_wit.items():
                    witnesses.setdefault(vec, []).extend(codes)
        for codes in witnesses.values():
            codes.sort()
        rows = None
    else:
        rows, witnesses = _kernels.scan_orders(
            perms, n, diag, lower, upper, collect_rows
        )
    return scale, perms, rows, witnesses


def _scan_chunk(args):
    perms, n, diag, lower, upper, offset = args
    _, witnesses = _kernels.scan_orders(perms, n, diag, lower, upper, False)
    return {
        vec: [(pi + offset, bits) for pi, bits in codes]
        for vec, codes in witnesses.items()
    }


def _order_from_code(m, perm, bits: int) -> ExtendedOrder:
    n = len(perm)
    return ExtendedOrder(
        tuple(m.worker_ids[perm[pos]] for pos in range(n)),
        tuple(bool(bits >> (n - 1 - pos) & 1) for pos in range(n)),
    )


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise LimitExceededError(
            f"{n} workers exceeds the enumeration limit {limit}"
        )


def enumerate_extremes(
    bm: BalancedMarket, *, limit: int = 8, jobs: int = 1
) -> ExtremeSet:
    """All extreme competitive salary vectors, with every witnessing extended
    order and the induced allocation on the original market."""
    m = bm.market
    _check_limit(m.n_workers, limit)
    mu = optimal_matching(m).matching
    firm_of, _ = matching_arrays(m, mu)
    scale, perms, _, witnesses = _scan(m, firm_of, True, False, jobs=jobs)
    points = []
    for vec in sorted(witnesses):
        salaries = tuple(Fraction(v, scale) for v in vec)
        orders = tuple(
            _order_from_code(m, perms[pi], bits) for pi, bits in witnesses[vec]
        )
        points.append(
            ExtremePoint(salaries, firm_payoffs(bm, mu, salaries), orders)
        )
    return ExtremeSet(tuple(points))


def maxmin_table(
    bm: BalancedMarket, *, limit: int = 8
) -> list[tuple[ExtendedOrder, tuple[Fraction, ...], bool]]:
    """Every extended order with its max-min vector and core membership flag,
    in enumeration order (permutations lexicographic, min flags first)."""
    m = bm.market
    _check_limit(m.n_workers, limit)
    mu = optimal_matching(m).matching
    firm_of, _ = matching_arrays(m, mu)
    scale, perms, rows, _ = _scan(m, firm_of, True, True)
    return [
        (
            _order_from_code(m, perms[pi], bits),
            tuple(Fraction(v, scale) for v in vec),
            ok,
        )
        for pi, bits, vec, ok in rows
    ]


def witnesses_for(
    bm: BalancedMarket, y: Sequence[Fraction], *, limit: int = 8
) -> tuple[ExtendedOrder, ...]:
    """All extended orders whose max-min vector equals ``y``.

    Only extreme competitive salary vectors have witnesses; anything else
    yields an empty tuple with a warning.
    """
    m = bm.market
    _check_limit(m.n_workers, limit)
    if len(y) == bm.n_original_workers:
        y = bm.extend_worker_vector(y)
    mu = optimal_matching(m).matching
    firm_of, _ = matching_arrays(m, mu)
    scale, perms, _, witnesses = _scan(m, firm_of, True, False)
    key = []
    for v in y:
        scaled = Fraction(v) * scale
        if scaled.denominator != 1:
            key = None
            break
        key.append(scaled.numerator)
    codes = witnesses.get(tuple(key)) if key is not None else None
    if not codes:
        warnings.warn(
            "no extended order produces this vector; it is not an extreme "
            "competitive salary vector",
            stacklevel=2,
        )
        return ()
    return tuple(_order_from_code(m, perms[pi], bits) for pi, bits in codes)


def vertices_of_system(
    system: CoreConstraintSystem | None,
    *,
    rows=None,
    n: int | None = None,
    limit: int = 6,
) -> frozenset[tuple[Fraction, ...]]:
    """Brute-force vertex oracle for a difference-constraint system.

    Every n-subset of rows is treated as equalities and solved exactly when
    nonsingular; feasible solutions are the vertices. Independent of the
    extended-order machinery.
    """
    if system is not None:
        rows = system.constraints
        n = system.n_workers
    _check_limit(n, limit)
    scale = common_denominator(c.rhs for c in rows)
    int_rows = [(c.tail, c.head, int(c.rhs * scale)) for c in rows]
    solutions = _kernels.vertex_solutions(n, int_rows)
    return frozenset(
        tuple(Fraction(v, scale) for v in vec) for vec in solutions
    )


def brute_force_vertices(
    bm: BalancedMarket, *, limit: int = 6
) -> frozenset[tuple[Fraction, ...]]:
    """The exact vertex set of the competitive salary polytope of ``bm``."""
    mu = optimal_matching(bm.market).matching
    return vertices_of_system(core_constraints(bm, mu), limit=limit)
