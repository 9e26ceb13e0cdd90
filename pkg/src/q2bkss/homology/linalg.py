"""Smith normal form, kernels, cokernels and cohomology over Z_(3)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..arith import LocalScalar, val3_int
from . import backend
from .presentation import FREE, LabeledMatrix, ModulePresentation, ThreeTermComplex

log = logging.getLogger(__name__)


class ExactnessError(ValueError):
    """A composite of differentials failed to vanish."""


class SplittingError(ValueError):
    """The hypothesis needed to split the H^1 extension does not hold."""


def _frac_val(x: Fraction):
    return val3_int(x.numerator)


@dataclass
class SNFResult:
    exponents: list  # nonzero invariant factors 3^e, weakly increasing
    shape: tuple
    U: list | None = None  # dense Fraction matrices, U*M*V = D
    V: list | None = None
    D: list | None = None

    @property
    def rank(self) -> int:
        return len(self.exponents)


def smith_normal_form(M: LabeledMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form over Z_(3); diagonal entries are exact powers of 3.

    Without ``transforms`` this runs the sparse elimination kernel.  With it,
    a dense exact routine also returns U and V with ``U*M*V = D``.
    """
    nr, nc = M.shape
    if not transforms:
        return SNFResult(backend.snf_exponents(M.integer_rows(), nc), (nr, nc))
    A = [[Fraction(0)] * nc for _ in range(nr)]
    for (r, c), x in M.entries.items():
        A[r][c] = x.to_fraction()
    U = [[Fraction(int(i == j)) for j in range(nr)] for i in range(nr)]
    V = [[Fraction(int(i == j)) for j in range(nc)] for i in range(nc)]
    exps = []
    t = 0
    while t < min(nr, nc):
        best = None
        for c in range(t, nc):
            for r in range(t, nr):
                if A[r][c]:
                    v = _frac_val(A[r][c])
                    if best is None or v < best[0]:
                        best = (v, r, c)
        if best is None:
            break
        e, r, c = best
        A[t], A[r] = A[r], A[t]
        U[t], U[r] = U[r], U[t]
        for row in A:
            row[t], row[c] = row[c], row[t]
        for row in V:
            row[t], row[c] = row[c], row[t]
        unit = A[t][t] / 3**e
        A[t] = [x / unit for x in A[t]]
        U[t] = [x / unit for x in U[t]]
        p = A[t][t]
        for r in range(nr):
            if r != t and A[r][t]:
                q = A[r][t] / p
                A[r] = [x - q * y for x, y in zip(A[r], A[t])]
                U[r] = [x - q * y for x, y in zip(U[r], U[t])]
        for c in range(nc):
            if c != t and A[t][c]:
                q = A[t][c] / p
                for row in A:
                    row[c] -= q * row[t]
                for row in V:
                    row[c] -= q * row[t]
        exps.append(e)
        t += 1
    return SNFResult(exps, (nr, nc), U, V, A)


# --- lattice helpers ------------------------------------------------------


def _int_column(vec) -> list:
    """Scale a Fraction/LocalScalar/int vector by its denominator lcm (a unit)."""
    fr = [x.to_fraction() if isinstance(x, LocalScalar) else Fraction(x) for x in vec]
    d = 1
    for x in fr:
        d = lcm(d, x.denominator)
    return [int(x * d) for x in fr]


def echelon_basis(vectors, n: int):
    """Z_(3)-basis (echelon, with pivot rows) of the span of integer ``vectors``."""
    pivots, _ = backend.column_echelon([_int_column(v) for v in vectors], n)
    return [(r, col[:n]) for r, col in pivots]


def kernel_basis(vectors, n: int):
    """Basis of the relation lattice among ``vectors`` (as coefficient vectors)."""
    _, ker = backend.column_echelon([_int_column(v) for v in vectors], n)
    return ker


def solve_in_basis(basis, b):
    """Coordinates of ``b`` over Z_(3) in an echelon basis, or ``None``."""
    b = [Fraction(x) for x in b]
    coords = []
    for r, col in basis:
        piv = col[r]
        if b[r] == 0:
            coords.append(Fraction(0))
            continue
        if _frac_val(b[r]) < val3_int(piv):
            return None
        q = b[r] / piv
        coords.append(q)
        b = [x - q * y for x, y in zip(b, col)]
    if any(b):
        return None
    return coords


def quotient(generators, subgenerators, n: int, prefix: str = "g") -> ModulePresentation:
    """Iso type of L/S with L, S spanned by columns; S must lie in L."""
    basis = echelon_basis(generators, n)
    if not basis:
        return ModulePresentation.zero()
    rows = [dict() for _ in range(len(basis))]
    for j, s in enumerate(subgenerators):
        coords = solve_in_basis(basis, _int_column(s))
        if coords is None:
            raise ValueError("sub-lattice not contained in lattice")
        col = _int_column(coords)
        for i, x in enumerate(col):
            if x:
                rows[i][j] = x
    exps = backend.snf_exponents(rows, len(subgenerators))
    return ModulePresentation.from_invariants(len(basis) - len(exps), exps, prefix)


def in_span(vectors, b, n: int) -> bool:
    return solve_in_basis(echelon_basis(vectors, n), _int_column(b)) is not None


# --- kernels / cokernels ----------------------------------------------------


def _orders(x) -> list:
    if isinstance(x, ModulePresentation):
        return list(x.orders)
    return [None if k == "free" else k for k in x]


def _check_well_defined(M: LabeledMatrix, src, tgt):
    for (r, c), x in M.entries.items():
        a, b = src[c], tgt[r]
        if b is None:
            if a is not None:
                raise ValueError(f"torsion generator {M.col_labels[c]!r} maps to a free summand")
        elif a is not None and val3_int(x.num) + a < b:
            raise ValueError(f"map not well defined on generator {M.col_labels[c]!r}")


def _lifted_columns(M: LabeledMatrix, tgt):
    """Columns of [M | diag(3^b)] as integer vectors, entries reduced mod 3^b.

    Returns ``(columns, scales)``; column j of M was multiplied by the unit
    ``scales[j]`` to clear denominators.
    """
    nr, nc = M.shape
    cols = [[0] * nr for _ in range(nc)]
    for (r, c), x in M.entries.items():
        if tgt[r] is not None:
            mod = 3 ** tgt[r]
            cols[c][r] = x.num * pow(x.den, -1, mod) % mod
        else:
            cols[c][r] = x.to_fraction()
    scales = []
    for j, col in enumerate(cols):
        d = 1
        for x in col:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
        scales.append(d)
        cols[j] = [int(x * d) for x in col]
    for r, b in enumerate(tgt):
        if b is not None:
            e = [0] * nr
            e[r] = 3**b
            cols.append(e)
    return cols, scales


def cokernel(M: LabeledMatrix, target_orders, prefix: str = "c") -> ModulePresentation:
    tgt = _orders(target_orders)
    nr = M.shape[0]
    cols, _ = _lifted_columns(M, tgt)
    rows = [dict() for _ in range(nr)]
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            if x:
                rows[i][j] = x
    exps = backend.snf_exponents(rows, len(cols))
    return ModulePresentation.from_invariants(nr - len(exps), exps, prefix)


def kernel_lattice(M: LabeledMatrix, target_orders) -> list:
    """Generators of {x in F_source : Mx in R_target} as integer vectors."""
    tgt = _orders(target_orders)
    nr, nc = M.shape
    cols, scales = _lifted_columns(M, tgt)
    rel = kernel_basis(cols, nr)
    return [[x * d for x, d in zip(v[:nc], scales)] for v in rel]


def kernel(M: LabeledMatrix, source_orders, target_orders, prefix: str = "k") -> ModulePresentation:
    src = _orders(source_orders)
    nc = M.shape[1]
    gens = [v for v in kernel_lattice(M, target_orders) if any(v)]
    rels = []
    for i, a in enumerate(src):
        if a is not None:
            e = [0] * nc
            e[i] = 3**a
            rels.append(e)
    if not gens:
        return ModulePresentation.zero()
    return quotient(gens, rels, nc, prefix)


def kernel_cokernel(M: LabeledMatrix, source_orders, target_orders):
    """Kernel and cokernel of the induced map of f.g. Z_(3)-modules.

    Finite orders are handled by lifting to free modules and appending
    relation columns diag(3^k).
    """
    src, tgt = _orders(source_orders), _orders(target_orders)
    _check_well_defined(M, src, tgt)
    return kernel(M, src, tgt), cokernel(M, tgt)


# --- complexes ----------------------------------------------------------


def check_composite_zero(d1: LabeledMatrix, d2: LabeledMatrix, orders2) -> None:
    orders2 = _orders(orders2)
    comp = d2.matmul(d1)
    for (r, c), x in sorted(comp.entries.items()):
        k = orders2[r]
        if k is None or val3_int(x.num) < k:
            raise ExactnessError(
                f"d2*d1 != 0 on basis vector {d1.col_labels[c]!r} (component {d2.row_labels[r]!r})"
            )


def _isolated(n_here, incoming: LabeledMatrix | None, outgoing: LabeledMatrix | None, orders):
    busy = set()
    if incoming is not None:
        busy.update(r for (r, _c) in incoming.entries)
    if outgoing is not None:
        busy.update(c for (_r, c) in outgoing.entries)
    return [i for i in range(n_here) if i not in busy and orders[i] is not None]


def _restrict(M: LabeledMatrix, rows, cols) -> LabeledMatrix:
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: i for i, c in enumerate(cols)}
    entries = {(ri[r], ci[c]): x for (r, c), x in M.entries.items() if r in ri and c in ci}
    return LabeledMatrix([M.row_labels[r] for r in rows], [M.col_labels[c] for c in cols], entries)


def complex_cohomology(C: ThreeTermComplex):
    """(H0, H1, H2) of a three-term complex; d2*d1 = 0 is checked, not assumed."""
    o0, o1, o2 = list(C.m0.orders), list(C.m1.orders), list(C.m2.orders)
    check_composite_zero(C.d1, C.d2, o2)

    # torsion basis vectors untouched by both differentials split off
    iso0 = _isolated(len(o0), None, C.d1, o0)
    iso1 = _isolated(len(o1), C.d1, C.d2, o1)
    iso2 = _isolated(len(o2), C.d2, None, o2)
    keep0 = [i for i in range(len(o0)) if i not in set(iso0)]
    keep1 = [i for i in range(len(o1)) if i not in set(iso1)]
    keep2 = [i for i in range(len(o2)) if i not in set(iso2)]
    d1 = _restrict(C.d1, keep1, keep0)
    d2 = _restrict(C.d2, keep2, keep1)
    k0 = [o0[i] for i in keep0]
    k1 = [o1[i] for i in keep1]
    k2 = [o2[i] for i in keep2]

    def passthrough(orders, idx, labels):
        return ModulePresentation(tuple(labels[i] for i in idx), tuple(orders[i] for i in idx))

    extra = [
        passthrough(o0, iso0, C.m0.generators),
        passthrough(o1, iso1, C.m1.generators),
        passthrough(o2, iso2, C.m2.generators),
    ]

    if all(k is None for k in k0 + k1 + k2):
        n0, n1, n2 = len(k0), len(k1), len(k2)
        s1 = backend.snf_exponents(d1.integer_rows(), n0)
        s2 = backend.snf_exponents(d2.integer_rows(), n1)
        r1, r2 = len(s1), len(s2)
        # ker d2 is saturated in M1, so tors(H1) = tors(coker d1)
        H0 = ModulePresentation.from_invariants(n0 - r1, [], "h0_")
        H1 = ModulePresentation.from_invariants(n1 - r1 - r2, s1, "h1_")
        H2 = ModulePresentation.from_invariants(n2 - r2, s2, "h2_")
    else:
        H0 = kernel(d1, k0, k1, "h0_")
        H2 = cokernel(d2, k2, "h2_")
        z1 = [v for v in kernel_lattice(d2, k2) if any(v)]
        b1 = [_int_column([d1.entries.get((r, c), 0) for r in range(len(k1))]) for c in range(len(k0))]
        for i, a in enumerate(k1):
            if a is not None:
                e = [0] * len(k1)
                e[i] = 3**a
                b1.append(e)
        b1 = [v for v in b1 if any(v)]
        H1 = quotient(z1, b1, len(k1), "h1_") if z1 else ModulePresentation.zero()
    return H0.direct_sum(extra[0]), H1.direct_sum(extra[1]), H2.direct_sum(extra[2])


def les_assemble(ker_g, ker_h, coker_g, coker_h, delta0, delta1, degree: int):
    """Cohomology from the filtration long exact sequence in one internal degree.

    ``delta0``/``delta1`` are labeled matrices on the given presentations.
    H0 = ker d0, H2 = coker d1, H1 = coker d0 + ker d1 (split).
    """
    k0, c0 = kernel_cokernel(delta0, ker_g, ker_h)
    k1, c1 = kernel_cokernel(delta1, coker_g, coker_h)
    if degree != 0 and not c0.is_zero():
        raise SplittingError(f"coker delta0 nonzero in degree {degree}")
    if degree == 0 and k1.invariants() != (1, ()):
        raise SplittingError(f"ker delta1 in degree 0 is {k1.summary()}, expected Z_(3)")
    return k0, c0.direct_sum(k1), c1
