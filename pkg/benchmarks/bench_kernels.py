#!/usr/bin/env python3
"""Benchmark the compiled enumeration kernels against the pure-Python twins.

Times the two hot loops behind `enumerate_extremes` and
`brute_force_vertices` on a random capacity-balanced market:

    python benchmarks/bench_kernels.py --workers 6

The extended-order scan visits n! * 2^n orders; the vertex oracle visits all
acyclic n-subsets of the core constraint rows. Both are exact either way; the
compiled path only changes speed.
"""

import argparse
import time
from fractions import Fraction
from itertools import permutations
from random import Random

from corematch import balance, core_constraints, optimal_matching
from corematch.market import Market
from corematch.matching import matching_arrays
from corematch.maxmin import _scaled_tables
from corematch.rationals import common_denominator
from corematch import _kernels_py

try:
    from corematch import _speedups
except ImportError:
    _speedups = None


def random_market(rng: Random, n: int) -> Market:
    caps = [n // 2, n - n // 2]
    matrix = tuple(
        tuple(Fraction(rng.randint(0, 60), rng.choice((1, 2, 3))) for _ in range(n))
        for _ in range(2)
    )
    return Market(("f1", "f2"), tuple(caps), tuple(f"w{j}" for j in range(n)), matrix)


def time_call(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return time.perf_counter() - start, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workers", type=int, default=6)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = Random(args.seed)
    m = random_market(rng, args.workers)
    bm = balance(m)
    mu = optimal_matching(bm.market).matching
    firm_of, _ = matching_arrays(bm.market, mu)
    n = bm.market.n_workers

    _, diag, lower, upper = _scaled_tables(bm.market, firm_of, True)
    perms = list(permutations(range(n)))
    system = core_constraints(bm, mu)
    scale = common_denominator(c.rhs for c in system.constraints)
    rows = [(c.tail, c.head, int(c.rhs * scale)) for c in system.constraints]

    print(f"market: 2 firms, {n} workers; "
          f"{len(perms) * (1 << n)} extended orders, "
          f"{len(rows)} constraint rows")

    t_pure, wit_pure = time_call(
        _kernels_py.scan_orders, perms, n, diag, lower, upper, False
    )
    print(f"order scan   pure:     {t_pure:8.3f} s "
          f"({len(wit_pure[1])} extreme vectors)")
    if _speedups is not None:
        t_fast, wit_fast = time_call(
            _speedups.scan_orders, perms, n, diag, lower, upper, False
        )
        assert wit_fast[1] == wit_pure[1]
        print(f"order scan   compiled: {t_fast:8.3f} s "
              f"(speedup {t_pure / t_fast:5.1f}x)")

    t_pure, verts_pure = time_call(_kernels_py.vertex_solutions, n, rows)
    print(f"vertex oracle pure:     {t_pure:8.3f} s "
          f"({len(verts_pure)} vertices)")
    if _speedups is not None:
        t_fast, verts_fast = time_call(_speedups.vertex_solutions, n, rows)
        assert verts_fast == verts_pure
        print(f"vertex oracle compiled: {t_fast:8.3f} s "
              f"(speedup {t_pure / t_fast:5.1f}x)")
    if _speedups is None:
        print("compiled kernels not built; showing pure-Python timings only")


if __name__ == "__main__":
    main()
