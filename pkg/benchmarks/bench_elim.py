"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_elim.py [--repeat 3]

Runs both kernels on the same inputs, checks the outputs agree, and prints
timings.  Inputs are random 3-adically interesting matrices plus the actual
connecting matrix of a large sector.
"""

import argparse
import random
import time

from q2bkss.homology import _elim_py

try:
    from q2bkss.homology import _elim
except ImportError:  # extension not built
    _elim = None


def random_rows(rng, n, m, density=0.3):
    rows = []
    for _ in range(n):
        row = {}
        for c in range(m):
            if rng.random() < density:
                row[c] = rng.choice([1, 2, 3, 6, 9, 27, 81]) * rng.choice([1, -1, 2, 4, 5])
        rows.append(row)
    return rows


def sector_rows(V):
    from q2bkss import connecting

    C = connecting.connecting_matrix(1, 13, V)
    rows = [dict() for _ in C.lifts.row_labels]
    for (r, c), x in C.lifts.entries.items():
        rows[r][c] = int(x.num * pow(int(x.den), -1, 3**12)) % 3**12
    return rows, len(C.lifts.col_labels)


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(7)
    cases = [(f"random {n}x{n}", random_rows(rng, n, n), n) for n in (40, 80, 120)]
    rows, nc = sector_rows(24)
    cases.append(("sector (1, 13), V=24", rows, nc))
    dense = [[rng.choice([0, 0, 1, 3, 9, 2, -4]) for _ in range(60)] for _ in range(60)]

    print(f"{'kernel':<32}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, rows, nc in cases:
        tp, a = timed(lambda: _elim_py.snf_exponents(rows, nc), args.repeat)
        if _elim is None:
            print(f"snf {name:<28}{tp:>12.4f}{'n/a':>12}")
            continue
        tc, b = timed(lambda: _elim.snf_exponents(rows, nc), args.repeat)
        assert a == b, name
        print(f"snf {name:<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.2f}")
    tp, a = timed(lambda: _elim_py.column_echelon([list(c) for c in dense], 60), args.repeat)
    if _elim is not None:
        tc, b = timed(lambda: _elim.column_echelon([list(c) for c in dense], 60), args.repeat)
        assert a == b
        print(f"{'echelon dense 60x60':<32}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.2f}")


if __name__ == "__main__":
    main()
