# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_elim_py``: same pivot order, same results.

Entries stay Python integers (they can outgrow a machine word); the speedup
comes from typed loop variables and a machine-word path for valuations.
"""

from math import gcd

cdef object _THREE = 3


cdef int _val3_small(long long n):
    cdef int k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


cdef int _val3(object n):
    cdef int k = 0
    if -4611686018427387904 < n < 4611686018427387904:
        return _val3_small(n)
    while n % 81 == 0:
        n //= 81
        k += 4
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


cdef object _strip3(object n):
    while n % 3 == 0:
        n //= 3
    return n


cdef void _normalize(dict row):
    cdef object g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return
    g = _strip3(g)
    if g > 1:
        for c in row:
            row[c] //= g


def snf_exponents(rows, ncols):
    """Exponents of the nonzero invariant factors of a sparse integer matrix."""
    cdef list R = [dict(rr) for rr in rows if rr]
    cdef dict cols = {}
    cdef dict prow, row
    cdef int ri, r, e, v, best_v
    cdef object c, best_c, p, u, q, g, uu, qq, y
    cdef list out = []
    for ri in range(len(R)):
        for c in <dict>R[ri]:
            cols.setdefault(c, set()).add(ri)
    while True:
        best_v = -1
        best_c = None
        r = -1
        for c in sorted(cols):
            for ri in sorted(cols[c]):
                v = _val3((<dict>R[ri])[c])
                if best_v < 0 or v < best_v:
                    best_v, best_c, r = v, c, ri
                    if v == 0:
                        break
            if best_v == 0:
                break
        if best_v < 0:
            return out
        e, c = best_v, best_c
        prow = R[r]
        p = prow[c]
        u = p // _THREE**e
        for ri in list(cols[c]):
            if ri == r:
                continue
            row = R[ri]
            q = row[c] // _THREE**e
            g = gcd(q, u)
            uu, qq = u // g, q // g
            if uu != 1:
                for k in row:
                    row[k] *= uu
            for k, x in prow.items():
                y = row.get(k, 0) - qq * x
                if y:
                    if k not in row:
                        cols[k].add(ri)
                    row[k] = y
                elif k in row:
                    del row[k]
                    cols[k].discard(ri)
            if row:
                _normalize(row)
        for k in prow:
            cols[k].discard(r)
            if not cols[k]:
                del cols[k]
        out.append(e)


def column_echelon(cols, nrows):
    """Column-reduce a dense integer matrix with an appended identity block."""
    cdef Py_ssize_t n = len(cols)
    cdef Py_ssize_t i, j, r, m, j0
    cdef int v, e
    cdef list work = []
    cdef list col, pc
    cdef list remaining = list(range(n))
    cdef list pivots = []
    cdef object x, a, u, q, g, uu, qq
    for j in range(n):
        work.append(list(cols[j]) + [1 if i == j else 0 for i in range(n)])
    for r in range(nrows):
        e = -1
        j0 = -1
        for j in remaining:
            x = (<list>work[j])[r]
            if x:
                v = _val3(x)
                if e < 0 or v < e:
                    e, j0 = v, j
                    if v == 0:
                        break
        if e < 0:
            continue
        pc = work[j0]
        u = pc[r] // _THREE**e
        remaining.remove(j0)
        for j in remaining:
            col = work[j]
            a = col[r]
            if not a:
                continue
            q = a // _THREE**e
            g = gcd(q, u)
            uu, qq = u // g, q // g
            m = len(col)
            for i in range(m):
                col[i] = uu * col[i] - qq * pc[i]
            g = 0
            for x in col:
                g = gcd(g, x)
            g = _strip3(g) if g else 0
            if g > 1:
                for i in range(m):
                    col[i] //= g
        pivots.append((r, work[j0]))
    kernel = [(<list>work[j])[nrows:] for j in remaining]
    return pivots, kernel
