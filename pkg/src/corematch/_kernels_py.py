"""Pure-Python enumeration kernels over scaled integers.

These are the reference implementations of the two hot loops; the compiled
module `_speedups` mirrors them exactly. All values arrive pre-scaled to a
common denominator, so the arithmetic below is exact integer arithmetic.

`SENTINEL` marks worker pairs that impose no constraint (same-firm pairs in
the job-market model); it is far outside the guarded magnitude range.
"""

from __future__ import annotations

SENTINEL = -(1 << 62)


def scan_orders(perms, n, diag, lower, upper, collect_rows):
    """Evaluate the max-min salary vector of every extended order.

    perms: permutations of range(n) to scan, in the order to report.
    diag[j]: scaled box upper bound of worker j.
    lower[j][k] / upper[j][k]: scaled bound increments induced on worker k by
    predecessor j (SENTINEL = no constraint between the pair).

    Flag bits are read most-significant-first: bit (n-1-pos) set means the
    worker at position pos maximizes.

    Returns (rows, witnesses): rows is a list of
    (perm_index, flag_bits, salary_tuple, in_core) when collect_rows, else
    None; witnesses maps each in-core salary tuple to its (perm_index,
    flag_bits) list in scan order.
    """
    rows = [] if collect_rows else None
    witnesses: dict[tuple, list] = {}
    y = [0] * n
    for pi, perm in enumerate(perms):
        for bits in range(1 << n):
            for pos in range(n):
                k = perm[pos]
                if (bits >> (n - 1 - pos)) & 1:
                    best = diag[k]
                    for q in range(pos):
                        j = perm[q]
                        u = upper[j][k]
                        if u != SENTINEL:
                            cand = y[j] + u
                            if cand < best:
                                best = cand
                else:
                    best = 0
                    for q in range(pos):
                        j = perm[q]
                        lo = lower[j][k]
                        if lo != SENTINEL:
                            cand = y[j] + lo
                            if cand > best:
                                best = cand
                y[k] = best
            ok = True
            for j in range(n):
                if y[j] < 0 or y[j] > diag[j]:
                    ok = False
                    break
            if ok:
                for j in range(n):
                    yj = y[j]
                    row = lower[j]
                    for k in range(n):
                        lo = row[k]
                        if lo != SENTINEL and y[k] - yj < lo:
                            ok = False
                            break
                    if not ok:
                        break
            vec = tuple(y)
            if collect_rows:
                rows.append((pi, bits, vec, ok))
            if ok:
                witnesses.setdefault(vec, []).append((pi, bits))
    return rows, witnesses


def vertex_solutions(n, rows):
    """All basic solutions of the constraint system that are feasible.

    rows: (tail, head, rhs) triples meaning y[head] - y[tail] >= rhs over
    nodes 0..n with y[0] = 0. Every n-subset of rows is treated as a system
    of equalities; the subset is nonsingular exactly when, read as edges,
    it forms a spanning tree of the node set, and is then solved by
    propagation from node 0. Feasible solutions are returned as a set of
    salary tuples.
    """
    m = len(rows)
    found: set[tuple] = set()
    if n == 0:
        return {()} if all(c <= 0 for _, _, c in rows) else set()
    parent = list(range(n + 1))
    size = [1] * (n + 1)
    chosen: list[int] = []
    y = [0] * (n + 1)

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    def leaf() -> None:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
        for idx in chosen:
            t, h, c = rows[idx]
            adj[t].append((h, c))
            adj[h].append((t, -c))
        stack = [0]
        seen = [False] * (n + 1)
        seen[0] = True
        y[0] = 0
        while stack:
            u = stack.pop()
            for v, delta in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    y[v] = y[u] + delta
                    stack.append(v)
        for t, h, c in rows:
            if y[h] - y[t] < c:
                return
        found.add(tuple(y[1:]))

    def descend(start: int, need: int) -> None:
        if need == 0:
            leaf()
            return
        for idx in range(start, m - need + 1):
            t, h, _ = rows[idx]
            rt, rh = find(t), find(h)
            if rt == rh:
                continue
            if size[rt] < size[rh]:
                rt, rh = rh, rt
            parent[rh] = rt
            size[rt] += size[rh]
            chosen.append(idx)
            descend(idx + 1, need - 1)
            chosen.pop()
            parent[rh] = rh
            size[rt] -= size[rh]

    descend(0, n)
    return found
