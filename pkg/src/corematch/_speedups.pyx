# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python enumeration kernels.

Same contracts as `_kernels_py`; inputs are pre-scaled integers whose
magnitudes are guarded by the dispatcher so that all intermediates fit in a
C long long.
"""

from libc.stdlib cimport malloc, free

SENTINEL = -(1 << 62)

cdef long long C_SENTINEL = SENTINEL


def scan_orders(perms, int n, diag, lower, upper, bint collect_rows):
    cdef long long* cdiag = <long long*> malloc(n * sizeof(long long))
    cdef long long* L = <long long*> malloc(n * n * sizeof(long long))
    cdef long long* U = <long long*> malloc(n * n * sizeof(long long))
    cdef long long* y = <long long*> malloc(n * sizeof(long long))
    cdef int* p = <int*> malloc(n * sizeof(int))
    if not (cdiag and L and U and y and p):
        raise MemoryError()
    cdef int i, j, k, pos, q, pi
    cdef int nperms = len(perms)
    cdef unsigned int bits, flag_count = 1u << n
    cdef long long best, cand, yj, lo
    cdef bint ok, maximize
    rows = [] if collect_rows else None
    witnesses = {}
    try:
        for i in range(n):
            cdiag[i] = diag[i]
            row_l = lower[i]
            row_u = upper[i]
            for j in range(n):
                L[i * n + j] = row_l[j]
                U[i * n + j] = row_u[j]
        for pi in range(nperms):
            perm = perms[pi]
            for i in range(n):
                p[i] = perm[i]
            for bits in range(flag_count):
                for pos in range(n):
                    k = p[pos]
                    maximize = (bits >> (n - 1 - pos)) & 1u
                    if maximize:
                        best = cdiag[k]
                        for q in range(pos):
                            j = p[q]
                            cand = U[j * n + k]
                            if cand != C_SENTINEL:
                                cand = y[j] + cand
                                if cand < best:
                                    best = cand
                    else:
                        best = 0
                        for q in range(pos):
                            j = p[q]
                            cand = L[j * n + k]
                            if cand != C_SENTINEL:
                                cand = y[j] + cand
                                if cand > best:
                                    best = cand
                    y[k] = best
                ok = True
                for j in range(n):
                    if y[j] < 0 or y[j] > cdiag[j]:
                        ok = False
                        break
                if ok:
                    for j in range(n):
                        yj = y[j]
                        for k in range(n):
                            lo = L[j * n + k]
                            if lo != C_SENTINEL and y[k] - yj < lo:
                                ok = False
                                break
                        if not ok:
                            break
                if collect_rows or ok:
                    vec = tuple([y[i] for i in range(n)])
                    if collect_rows:
                        rows.append((pi, bits, vec, ok))
                    if ok:
                        bucket = witnesses.get(vec)
                        if bucket is None:
                            witnesses[vec] = [(pi, bits)]
                        else:
                            bucket.append((pi, bits))
    finally:
        free(cdiag)
        free(L)
        free(U)
        free(y)
        free(p)
    return rows, witnesses


cdef struct _Row:
    int tail
    int head
    long long rhs


cdef class _VertexScan:
    cdef _Row* rows
    cdef int m, n
    cdef int* parent
    cdef int* size
    cdef int* chosen
    cdef long long* y
    cdef bint* seen
    cdef object found

    def __cinit__(self, int n, row_list):
        self.n = n
        self.m = len(row_list)
        self.rows = <_Row*> malloc(self.m * sizeof(_Row))
        self.parent = <int*> malloc((n + 1) * sizeof(int))
        self.size = <int*> malloc((n + 1) * sizeof(int))
        self.chosen = <int*> malloc((n + 1) * sizeof(int))
        self.y = <long long*> malloc((n + 1) * sizeof(long long))
        self.seen = <bint*> malloc((n + 1) * sizeof(bint))
        if not (self.rows and self.parent and self.size and self.chosen
                and self.y and self.seen):
            raise MemoryError()
        cdef int i
        for i in range(self.m):
            t, h, c = row_list[i]
            self.rows[i].tail = t
            self.rows[i].head = h
            self.rows[i].rhs = c
        for i in range(n + 1):
            self.parent[i] = i
            self.size[i] = 1
        self.found = set()

    def __dealloc__(self):
        free(self.rows)
        free(self.parent)
        free(self.size)
        free(self.chosen)
        free(self.y)
        free(self.seen)

    cdef int _find(self, int x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    cdef void _leaf(self, int depth):
        cdef int i, idx, u, v, changed
        cdef long long c
        for i in range(self.n + 1):
            self.seen[i] = False
        self.seen[0] = True
        self.y[0] = 0
        # propagate along the chosen spanning tree (<= n sweeps suffice)
        changed = 1
        while changed:
            changed = 0
            for i in range(depth):
                idx = self.chosen[i]
                u = self.rows[idx].tail
                v = self.rows[idx].head
                c = self.rows[idx].rhs
                if self.seen[u] and not self.seen[v]:
                    self.y[v] = self.y[u] + c
                    self.seen[v] = True
                    changed = 1
                elif self.seen[v] and not self.seen[u]:
                    self.y[u] = self.y[v] - c
                    self.seen[u] = True
                    changed = 1
        for i in range(self.m):
            u = self.rows[i].tail
            v = self.rows[i].head
            if self.y[v] - self.y[u] < self.rows[i].rhs:
                return
        self.found.add(tuple([self.y[i] for i in range(1, self.n + 1)]))

    cdef void _descend(self, int start, int need):
        cdef int idx, rt, rh, tmp
        if need == 0:
            self._leaf(self.n)
            return
        for idx in range(start, self.m - need + 1):
            rt = self._find(self.rows[idx].tail)
            rh = self._find(self.rows[idx].head)
            if rt == rh:
                continue
            if self.size[rt] < self.size[rh]:
                tmp = rt
                rt = rh
                rh = tmp
            self.parent[rh] = rt
            self.size[rt] += self.size[rh]
            self.chosen[self.n - need] = idx
            self._descend(idx + 1, need - 1)
            self.parent[rh] = rh
            self.size[rt] -= self.size[rh]

    def run(self):
        self._descend(0, self.n)
        return self.found


def vertex_solutions(int n, rows):
    if n == 0:
        return {()} if all(c <= 0 for _, _, c in rows) else set()
    return _VertexScan(n, rows).run()
