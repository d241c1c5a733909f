"""Exact rational linear programming via a dense two-phase simplex.

Minimizes c.x subject to equality and <= rows over x >= 0, entirely in
rational arithmetic. The whole dictionary (constraint rows and objective row)
is kept as integers over a shared positive denominator and updated by integer
pivoting, the classical fraction-free rule
new = (old * pivot - column * pivot_row) / previous_pivot,
whose divisions are exact because every entry is a subdeterminant of the
scaled input. Bland's rule guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rationals import common_denominator

ZERO = Fraction(0)


class LPInfeasibleError(Exception):
    pass


class LPUnboundedError(Exception):
    pass


@dataclass
class LPSolution:
    objective: Fraction
    x: list[Fraction]
    #: one flag per <= row: True when the row's optimal multiplier is nonzero,
    #: which certifies the row is tight at every optimum.
    ub_multiplier_nonzero: list[bool]


def solve_lp(c, eq_rows, ub_rows) -> LPSolution:
    """min c.x s.t. eq rows hold with equality, ub rows as <=, x >= 0.

    Rows are (coefficients, rhs) pairs of Fractions.
    """
    n = len(c)
    n_ub = len(ub_rows)
    n_cols = n + n_ub  # structural + slack
    rows: list[list[int]] = []
    slack_col: list[int | None] = []
    for k, (coeffs, rhs) in enumerate(list(eq_rows) + list(ub_rows)):
        row = list(coeffs) + [ZERO] * n_ub + [rhs]
        if k >= len(eq_rows):
            row[n + (k - len(eq_rows))] = Fraction(1)
        scale = common_denominator(row)
        introw = [int(v * scale) for v in row]
        if introw[-1] < 0:
            introw = [-v for v in introw]
        rows.append(introw)
        slack_col.append(n + (k - len(eq_rows)) if k >= len(eq_rows) else None)

    m = len(rows)
    denom = 1  # shared positive denominator of the integer dictionary
    basis: list[int] = []
    for i in range(m):
        s = slack_col[i]
        if s is not None and rows[i][s] > 0:
            basis.append(s)
        else:
            basis.append(-1)  # placeholder for an artificial column
    art_start = n_cols
    n_art = 0
    for i in range(m):
        if basis[i] == -1:
            basis[i] = art_start + n_art
            n_art += 1
    total_cols = n_cols + n_art
    width = total_cols + 1
    for i in range(m):
        rhs = rows[i].pop()
        rows[i].extend([0] * n_art)
        rows[i].append(rhs)
        if basis[i] >= art_start:
            rows[i][basis[i]] = 1

    obj: list[int] = []

    def build_obj(int_cost: list[int]) -> list[int]:
        # integer reduced-cost row: denom * cost - cost_B . rows
        out = [denom * v for v in int_cost] + [0] * (width - len(int_cost))
        for i in range(m):
            cb = int_cost[basis[i]] if basis[i] < len(int_cost) else 0
            if cb:
                rowi = rows[i]
                for j in range(width):
                    if rowi[j]:
                        out[j] -= cb * rowi[j]
        return out

    def pivot(r: int, p: int) -> None:
        nonlocal denom
        rowr = rows[r]
        piv = rowr[p]
        assert piv > 0
        for rowi in rows + [obj]:
            if rowi is rowr:
                continue
            factor = rowi[p]
            check = rowi[-1] * piv - factor * rowr[-1]
            for j in range(width):
                num = rowi[j] * piv - factor * rowr[j]
                rowi[j] = num // denom if num else 0
            # the fraction-free rule divides exactly; verify once per row
            assert rowi[-1] * denom == check, "integer pivoting invariant broken"
        denom = piv
        basis[r] = p

    def run_simplex(allowed) -> None:
        while True:
            enter = -1
            for j in range(total_cols):
                if allowed[j] and obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best_num = best_den = 0
            for i in range(m):
                a = rows[i][enter]
                if a > 0:
                    num, den = rows[i][-1], a
                    if (
                        leave < 0
                        or num * best_den < best_num * den
                        or (num * best_den == best_num * den
                            and basis[i] < basis[leave])
                    ):
                        leave, best_num, best_den = i, num, den
            if leave < 0:
                raise LPUnboundedError()
            pivot(leave, enter)

    # phase 1: minimize the sum of artificials
    phase1_cost = [0] * n_cols + [1] * n_art
    obj = build_obj(phase1_cost)
    allowed = [True] * total_cols
    run_simplex(allowed)
    if obj[-1] < 0:  # -denom * (sum of artificials) at the optimum
        raise LPInfeasibleError()
    # remove artificials still in the basis (degenerate at zero)
    drop: list[int] = []
    for i in range(m):
        if basis[i] >= art_start:
            assert rows[i][-1] == 0  # artificial basic at value zero
            p = next((j for j in range(n_cols) if rows[i][j] != 0), None)
            if p is None:
                drop.append(i)
            else:
                if rows[i][p] < 0:
                    rows[i] = [-v for v in rows[i]]
                pivot(i, p)
    for i in reversed(drop):
        del rows[i]
        del basis[i]
    m = len(rows)

    # phase 2: the original objective, artificial columns barred
    obj_scale = common_denominator(c)
    cost2 = [int(v * obj_scale) for v in c] + [0] * (total_cols - n)
    obj = build_obj(cost2)
    allowed = [j < art_start for j in range(total_cols)]
    run_simplex(allowed)

    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = Fraction(rows[i][-1], denom)
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    multipliers = [obj[n + k] != 0 for k in range(n_ub)]
    return LPSolution(value, x, multipliers)


def solve_affine(eq_rows, n: int):
    """Gaussian elimination for a rational equality system over n unknowns.

    Returns (rank, solution) where solution is the unique solution when
    rank == n and the system is consistent, else None. Raises
    LPInfeasibleError on an inconsistent system.
    """
    aug = [list(coeffs) + [rhs] for coeffs, rhs in eq_rows]
    rank = 0
    pivots: list[int] = []
    for col in range(n):
        sel = next((r for r in range(rank, len(aug)) if aug[r][col] != 0), None)
        if sel is None:
            continue
        aug[rank], aug[sel] = aug[sel], aug[rank]
        prow = aug[rank]
        inv = Fraction(1) / prow[col]
        aug[rank] = [v * inv for v in prow]
        prow = aug[rank]
        for r in range(len(aug)):
            if r != rank and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * pv for v, pv in zip(aug[r], prow)]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(aug)):
        if aug[r][n] != 0:
            raise LPInfeasibleError("inconsistent equality system")
    if rank < n:
        return rank, None
    x = [ZERO] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return rank, x
