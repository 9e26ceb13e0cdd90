"""Pure-Python elimination kernels over Z_(3).

All inputs are integer matrices.  Every operation used is invertible over
Z_(3): swaps, scaling by integers prime to 3, and adding multiples of one
line to another.  The compiled twin in ``_elim.pyx`` runs the same algorithm.
"""

from math import gcd


def _val3(n):
    k = 0
    while n % 81 == 0:
        n //= 81
        k += 4
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


def _strip3(n):
    while n % 3 == 0:
        n //= 3
    return n


def _normalize(row):
    # divide out the 3-free content; a unit of Z_(3)
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return
    g = _strip3(g)
    if g > 1:
        for c in row:
            row[c] //= g


def snf_exponents(rows, ncols):
    """Exponents of the nonzero invariant factors of a sparse integer matrix.

    ``rows`` is a list of ``{col: int}`` dicts (consumed).  Pivots are chosen by
    minimal 3-adic valuation, ties broken by column then row index, so the
    returned list is weakly increasing.
    """
    rows = [dict(r) for r in rows if r]
    cols = {}
    for ri, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(ri)
    alive = set(range(len(rows)))
    out = []
    while True:
        best = None
        for c in sorted(cols):
            for ri in sorted(cols[c]):
                v = _val3(rows[ri][c])
                if best is None or v < best[0]:
                    best = (v, c, ri)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            return out
        e, c, r = best
        prow = rows[r]
        p = prow[c]
        u = p // 3**e
        for ri in list(cols[c]):
            if ri == r:
                continue
            row = rows[ri]
            q = row[c] // 3**e
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
            else:
                alive.discard(ri)
        for k in prow:
            cols[k].discard(r)
            if not cols[k]:
                del cols[k]
        alive.discard(r)
        out.append(e)


def column_echelon(cols, nrows):
    """Column-reduce a dense integer matrix with an appended identity block.

    ``cols`` is a list of length-``nrows`` integer lists.  Returns
    ``(pivots, kernel)`` where ``pivots`` is a list of ``(row, column)`` pairs for
    the echelon image basis and ``kernel`` a list of integer vectors (length
    ``len(cols)``) spanning the kernel over Z_(3).
    """
    n = len(cols)
    work = [list(col) + [1 if i == j else 0 for i in range(n)] for j, col in enumerate(cols)]
    remaining = list(range(n))
    pivots = []
    for r in range(nrows):
        best = None
        for j in remaining:
            x = work[j][r]
            if x:
                v = _val3(x)
                if best is None or v < best[0]:
                    best = (v, j)
                    if v == 0:
                        break
        if best is None:
            continue
        e, j0 = best
        pc = work[j0]
        u = pc[r] // 3**e
        remaining.remove(j0)
        for j in remaining:
            col = work[j]
            a = col[r]
            if not a:
                continue
            q = a // 3**e
            g = gcd(q, u)
            uu, qq = u // g, q // g
            for i in range(len(col)):
                col[i] = uu * col[i] - qq * pc[i]
            g = 0
            for x in col:
                g = gcd(g, x)
            g = _strip3(g) if g else 0
            if g > 1:
                for i in range(len(col)):
                    col[i] //= g
        pivots.append((r, work[j0]))
    kernel = [work[j][nrows:] for j in remaining]
    return pivots, kernel
