"""The connecting maps delta0: ker g -> ker h and delta1: coker g -> coker h.

Both are computed from first principles: delta0 is (psi_d - 1) o embed on
degree 0, and delta1 is the class of -embed in coker h.  The staircase shape
of delta1 (leading terms) and the five-case kernel/cokernel description are
checked against these matrices rather than used as input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .arith import LocalScalar, ZERO, reduce_mod, val3_int
from .bring import (
    EigenClass,
    NonStabilizationError,
    a_order,
    antisymmetrize,
    b_order,
    h_map,
    psi_d,
)
from .homology import LabeledMatrix, ModulePresentation, kernel_cokernel, smith_normal_form
from .homology.linalg import in_span, kernel_lattice
from .homology.presentation import FREE
from .tmfpi import ZeroLineClass, basis_class, ell_max, embed


class LeadingTermMismatch(AssertionError):
    pass


class PreconditionError(ValueError):
    pass


def _pow4(n: int) -> LocalScalar:
    return LocalScalar(4**n) if n >= 0 else LocalScalar(1, 4**-n)


def floor_half(m: int) -> int:
    """The index f = floor((m - 1) / 2) of the middle eigenclass A_0^m."""
    return (m - 1) // 2


def sector_order(eps: int, m: int):
    """Exponent k of coker g and coker h in sector (eps, m); ``None`` at t = 0."""
    if eps == 0 and m == 0:
        return None
    return b_order(m) if eps else a_order(m)


# -- delta0 ------------------------------------------------------------------

def delta0_formula(v: int) -> dict:
    """Closed form of delta0(C_v^0) as ``{i: coefficient of a_{-i,i}}``."""
    out = {}
    scale = 2 ** (8 * v)
    for i in range(1, 2 * v + 1):
        c = ZERO
        if i <= v:
            c = c + comb(3 * v, 2 * v + i) * _pow4(-i)
        c = c - comb(3 * v, 2 * v - i) * _pow4(i)
        c = c * scale
        if c:
            out[i] = c
    return out


def delta0_direct(x: ZeroLineClass):
    """(psi_d - 1)(embed x), checked to lie in ker h."""
    if x.degree != 0:
        raise PreconditionError("delta0 is defined on degree 0 only")
    e = embed(x)
    d = psi_d(e) - e
    if h_map(d):
        raise ArithmeticError(f"delta0({x}) is not killed by h")
    return d


def delta0_coefficients(x: ZeroLineClass) -> dict:
    """delta0(x) as ``{i: coefficient of a_{-i,i}}``."""
    coeffs, rest = antisymmetrize(delta0_direct(x))
    if rest:
        raise ArithmeticError("delta0 left the antisymmetric sector")
    return {c.j: d for c, d in coeffs.items()}


def delta0_matrix(V: int) -> LabeledMatrix:
    """Columns gamma_v C_v^0 (v <= V), rows a_{-i,i} for 1 <= i <= 2V (at least 1)."""
    cols = [basis_class(0, 0, v) for v in range(V + 1)]
    data = [delta0_coefficients(c) for c in cols]
    n = max([1] + [max(d) for d in data if d])
    rows = [EigenClass("A", -i, i) for i in range(1, n + 1)]
    return LabeledMatrix.from_columns(
        rows, cols, [{EigenClass("A", -i, i): x for i, x in d.items()} for d in data]
    )


def u_unit(k: int) -> LocalScalar:
    """Entry of column C_k^0 (unscaled) in row a_{-2k,2k}."""
    return delta0_formula(k).get(2 * k, ZERO)


def delta0_ker_coker(V: int, check: bool = True):
    """``(ker delta0, coker delta0)`` on the truncated window, torsion of pi_0 excluded."""
    if V < 2:
        raise PreconditionError("V must be at least 2")
    ker, coker = _delta0_kc(V)
    if check:
        ker4, coker4 = _delta0_kc(V + 4)
        if ker4.invariants() != ker.invariants() or not coker4.contains_iso(coker):
            raise NonStabilizationError("delta0 changes between V and V+4")
        extra = coker4.minus_iso(coker)
        if extra.invariants() != (4, tuple(1 for v in range(V + 1, V + 5) if v % 3)):
            raise NonStabilizationError("delta0 grows by an unexpected amount between V and V+4")
    return ker, coker


def _delta0_kc(V: int):
    M = delta0_matrix(V)
    nr, nc = M.shape
    exps = smith_normal_form(M).exponents
    ker = ModulePresentation.from_invariants(nc - len(exps), [], "k")
    coker = ModulePresentation.from_invariants(nr - len(exps), exps, "c")
    return ker, coker


def delta0_closed_form(V: int):
    """Labeled closed form on the same window as :func:`delta0_matrix`."""
    ker = ModulePresentation(("1",), (FREE,))
    n = 2 * V
    free = [f"a_{{-{i},{i}}}" for i in range(1, n + 1, 2)]
    tors = [f"delta0(C_{v}^0)" for v in range(1, V + 1) if v % 3]
    coker = ModulePresentation(tuple(free + tors), (FREE,) * len(free) + (1,) * len(tors))
    return ker, coker


# -- delta1 ------------------------------------------------------------------

def delta1_lift(x: ZeroLineClass) -> dict:
    """Antisymmetric coefficients of -embed(x): a Z_(3) lift of delta1(x)."""
    coeffs, _ = antisymmetrize(-embed(x))
    return coeffs


def delta1_column(eps: int, m: int, v: int) -> dict:
    """delta1(basis_class(eps, m, v)) as ``{EigenClass: residue}`` in coker h."""
    lift = delta1_lift(basis_class(eps, m, v))
    k = sector_order(eps, m)
    if k is None:
        return dict(lift)
    out = {}
    for c, d in lift.items():
        r = reduce_mod(d, k)
        if r:
            out[c] = r
    return out


@dataclass
class ConnectingMatrix:
    """delta1 restricted to the sector (eps, m) on the window v <= V."""

    eps: int
    m: int
    V: int
    k: int | None
    columns: list
    rows: list
    lifts: LabeledMatrix  # Z_(3) entries of the gamma/theta-scaled columns

    @property
    def kind(self) -> str:
        return "B" if self.eps else "A"

    def residue(self, r: int, c: int) -> int:
        x = self.lifts.entries.get((r, c), ZERO)
        if self.k is None:
            raise ValueError("degree 0 has no residues")
        return reduce_mod(x, self.k)

    def residues(self) -> LabeledMatrix:
        if self.k is None:
            return self.lifts
        return LabeledMatrix(
            self.lifts.row_labels,
            self.lifts.col_labels,
            {rc: reduce_mod(x, self.k) for rc, x in self.lifts.entries.items()},
        )

    def source_orders(self) -> list:
        return [self.k] * len(self.columns)

    def target_orders(self) -> list:
        return [self.k] * len(self.rows)

    def restrict_columns(self, idx) -> "ConnectingMatrix":
        idx = list(idx)
        pos = {c: n for n, c in enumerate(idx)}
        entries = {(r, pos[c]): x for (r, c), x in self.lifts.entries.items() if c in pos}
        lifts = LabeledMatrix(self.lifts.row_labels, [self.lifts.col_labels[c] for c in idx], entries)
        return ConnectingMatrix(self.eps, self.m, self.V, self.k, [self.columns[c] for c in idx], self.rows, lifts)

    def ker_coker(self):
        return kernel_cokernel(self.residues(), self.source_orders(), self.target_orders())

    def to_json(self) -> dict:
        data = self.residues().to_json()
        data.update({"eps": self.eps, "m": self.m, "V": self.V,
                     "modulus": None if self.k is None else 3**self.k})
        data["rows"] = [c.label() for c in self.rows]
        data["cols"] = [c.label() for c in self.columns]
        return data


def row_window(eps: int, m: int, V: int) -> int:
    """Eigen-window size W for sector (eps, m): the smallest W >= V whose
    monomial window holds embed of every basis class with v <= V."""
    f = floor_half(m)
    W = V
    for v in range(V + 1):
        for mono in embed(basis_class(eps, m, v)).terms:
            W = max(W, f - min(mono.i, mono.j))
    return W


def connecting_matrix(eps: int, m: int, V: int) -> ConnectingMatrix:
    kind = "B" if eps else "A"
    columns = [basis_class(eps, m, v) for v in range(V + 1)]
    lifts = [delta1_lift(c) for c in columns]
    W = row_window(eps, m, V)
    rows = [EigenClass.from_mv(kind, m, w) for w in range(W + 1)]
    M = LabeledMatrix.from_columns(rows, columns, lifts)
    return ConnectingMatrix(eps, m, V, sector_order(eps, m), columns, rows, M)


# -- leading terms --------------------------------------------------------------

@dataclass(frozen=True)
class LeadingTerm:
    """Predicted leading term: ``kind`` is "row", "zero" or "star" (nonzero, position open)."""

    kind: str
    w: int | None = None

    def __str__(self):
        return f"row {self.w}" if self.kind == "row" else self.kind


def is_case5(eps: int, m: int) -> bool:
    return eps == 1 and m > 0 and m % 27 == 13


def leading_term(eps: int, m: int, v: int) -> LeadingTerm:
    ell = ell_max(eps, m)
    f = floor_half(m)
    L = ell - v
    if L < 0:
        return LeadingTerm("row", f - 2 * ell + 2 * v)
    if L > 0:
        return LeadingTerm("row", f - ell + v)
    return LeadingTerm("star") if is_case5(eps, m) else LeadingTerm("zero")


def observed_leading(eps: int, m: int, v: int):
    """``(w, coefficient)`` of the highest nonzero row of the unscaled column mod 3^k."""
    x = basis_class(eps, m, v)
    unscaled = ZeroLineClass(x.n, x.eps, x.ell, 1)
    k = sector_order(eps, m)
    best = None
    for c, d in delta1_lift(unscaled).items():
        if k is not None and reduce_mod(d, k) == 0:
            continue
        if best is None or c.v > best[0]:
            best = (c.v, d)
    return best


def verify_leading_term(eps: int, m: int, v: int) -> LeadingTerm:
    pred = leading_term(eps, m, v)
    obs = observed_leading(eps, m, v)
    where = f"(eps={eps}, m={m}, v={v})"
    if pred.kind == "zero":
        if obs is not None:
            raise LeadingTermMismatch(f"{where}: expected zero column, found row {obs[0]}")
    elif pred.kind == "star":
        if obs is None:
            raise LeadingTermMismatch(f"{where}: expected a nonzero column")
    else:
        if obs is None:
            raise LeadingTermMismatch(f"{where}: expected row {pred.w}, column is zero")
        w, d = obs
        if w != pred.w or val3_int(d.num) != 0:
            raise LeadingTermMismatch(
                f"{where}: expected unit at row {pred.w}, found {d} at row {w}"
            )
    return pred


# -- the five cases -------------------------------------------------------------

def case_id(eps: int, m: int) -> int:
    if eps == 0 and m == 0:
        raise PreconditionError("degree 0 is handled by delta0")
    if eps == 0:
        return 1 if m < 0 else 2
    if m <= 0:
        return 3
    return 5 if m % 27 == 13 else 4


def excluded_residue(eps: int, m: int) -> int:
    """v mod 3 of the columns whose scaling factor is 1, read off m mod 9."""
    r = (m - eps) % 9
    return 0 if r in (0, 1, 2) else 1 if r in (3, 4, 5) else 2


def _name(eps: int, v: int, m: int) -> str:
    return f"{'D' if eps else 'C'}_{v}^{m}"


@dataclass
class CaseReport:
    case: int
    eps: int
    m: int
    V: int
    kernel_closed: ModulePresentation
    coker_closed: ModulePresentation
    kernel_computed: ModulePresentation
    coker_computed: ModulePresentation
    match: bool
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "eps": self.eps,
            "m": self.m,
            "V": self.V,
            "kernel": {"closed": self.kernel_closed.to_json(), "computed": self.kernel_computed.summary()},
            "cokernel": {"closed": self.coker_closed.to_json(), "computed": self.coker_computed.summary()},
            "match": self.match,
            "notes": list(self.notes),
        }


def _kernel_element(k: int, nc: int, v: int, order_exp: int) -> list:
    # element of order 3^order_exp on basis vector v of (Z/3^k)^nc
    e = [0] * nc
    e[v] = 3 ** (k - order_exp)
    return e


def closed_kernel(eps: int, m: int, V: int, k: int):
    """Closed-form kernel on the window: list of ``(label, v, order exponent)``."""
    case = case_id(eps, m)
    ell = ell_max(eps, m)
    skip = excluded_residue(eps, m)
    mult = "" if k == 1 else f"3^{k - 1}*"
    gens = []
    if case in (2, 4):
        gens.append((_name(eps, ell, m), ell, k))
    for v in range(V + 1):
        if v % 3 == skip:
            continue
        if case == 5 and v <= ell:
            continue
        gens.append((f"{mult}3{_name(eps, v, m)}", v, 1))
    return gens


def closed_cokernel(eps: int, m: int, V: int, W: int, k: int) -> ModulePresentation:
    """Closed-form cokernel on rows 0..W and columns 0..V (Case 5: column ell omitted)."""
    case = case_id(eps, m)
    ell = ell_max(eps, m)
    f = floor_half(m)
    kind = "B" if eps else "A"
    skip = excluded_residue(eps, m)
    rows = set()
    if case in (1, 3):
        rows.update(range(0, f - 2 * ell))
        rows.update(w for w in range(f - 2 * ell + 1, W + 1, 2))
    else:
        rows.update(range(0, f - ell))
        rows.add(f)
        rows.update(w for w in range(f + 1, W + 1, 2))
    rows = sorted(w for w in rows if 0 <= w <= W)
    small = [v for v in range(V + 1) if v % 3 != skip and v != ell]
    gens = [f"{kind}_{w}^{m}" for w in rows] + [f"delta1({_name(eps, v, m)})" for v in small]
    return ModulePresentation(tuple(gens), (k,) * len(rows) + (1,) * len(small))


def _check_kernel_labels(C: ConnectingMatrix, gens) -> list:
    """Each named generator lies in the kernel; together they generate it."""
    notes = []
    M = C.residues()
    nc = len(C.columns)
    lattice = kernel_lattice(M, C.target_orders())
    rels = [_kernel_element(C.k, nc, v, 0) for v in range(nc)]
    for label, v, e in gens:
        x = _kernel_element(C.k, nc, v, e)
        if not in_span(lattice + rels, x, nc):
            notes.append(f"{label} is not in the kernel")
    return notes


def _growth_ok(small: ModulePresentation, big: ModulePresentation, allowed) -> bool:
    if not big.contains_iso(small):
        return False
    d = big.minus_iso(small)
    return d.free_rank == 0 and set(d.torsion_exponents) <= set(allowed)


def case_analysis(eps: int, m: int, V: int, check_stable: bool = True) -> CaseReport:
    case = case_id(eps, m)
    C = connecting_matrix(eps, m, V)
    k, ell = C.k, ell_max(eps, m)
    W = len(C.rows) - 1
    ker, coker = C.ker_coker()
    gens = closed_kernel(eps, m, V, k)
    notes = []
    extra = {}

    if case == 5:
        kpp = ModulePresentation(tuple(g[0] for g in gens), tuple(g[2] for g in gens))
        U = resolve_u_on(C)
        kernel_closed = kpp.direct_sum(U)
        main = C.restrict_columns([v for v in range(V + 1) if v != ell])
        _, coker4 = main.ker_coker()
        coker_closed = closed_cokernel(eps, m, V, W, k)
        if not coker4.iso_equal(coker_closed):
            notes.append(f"cokernel without the extra column is {coker4.summary()}, "
                         f"closed form {coker_closed.summary()}")
        star = {C.rows[r].label(): C.residue(r, ell) for (r, c) in C.lifts.entries if c == ell}
        star = {lab: x for lab, x in star.items() if x}
        extra.update(star_column=star, K2=kpp, U=U)
        if not star:
            notes.append("the extra column is zero")
        if coker.log3_order() >= coker4.log3_order():
            extra["observations"] = ["the extra relation already holds in the span of the other columns"]
        notes += _check_kernel_labels(C, gens)
        coker_closed = ModulePresentation(
            coker_closed.generators, coker_closed.orders,
            (f"delta1({_name(eps, ell, m)}) = 0",),
        )
        match = not notes and ker.iso_equal(kernel_closed)
    else:
        kernel_closed = ModulePresentation(tuple(g[0] for g in gens), tuple(g[2] for g in gens))
        coker_closed = closed_cokernel(eps, m, V, W, k)
        notes += _check_kernel_labels(C, gens)
        if not ker.iso_equal(kernel_closed):
            notes.append(f"kernel {ker.summary()} != closed form {kernel_closed.summary()}")
        if not coker.iso_equal(coker_closed):
            notes.append(f"cokernel {coker.summary()} != closed form {coker_closed.summary()}")
        match = not notes

    if check_stable:
        C4 = connecting_matrix(eps, m, V + 4)
        ker4, coker4 = C4.ker_coker()
        if not (_growth_ok(ker, ker4, {1}) and _growth_ok(coker, coker4, {1, k})):
            raise NonStabilizationError(f"sector (eps={eps}, m={m}) changes between V={V} and V+4")
    return CaseReport(case, eps, m, V, kernel_closed, coker_closed, ker, coker, match, notes, extra)


# -- the undetermined summand ----------------------------------------------------

def _explicit_kernel(C: ConnectingMatrix):
    """Kernel of a residue matrix on (Z/3^k)^n with explicit cyclic generators.

    Returns a list of ``(vector, order exponent)`` whose cyclic spans form a
    direct sum equal to the kernel.
    """
    from sympy import Matrix

    n, k = len(C.columns), C.k
    rels = [_kernel_element(k, n, v, 0) for v in range(n)]
    lattice = kernel_lattice(C.residues(), C.target_orders()) + rels
    # L contains 3^k Z^n, so its echelon basis is square
    B = Matrix([[col[i] for _, col in _echelon(lattice, n)] for i in range(n)])
    coords = B.inv() * Matrix([[r[i] for r in rels] for i in range(n)])
    R = LabeledMatrix(range(n), range(n), {
        (i, j): _to_local(coords[i, j]) for i in range(n) for j in range(n) if coords[i, j] != 0
    })
    snf = smith_normal_form(R, transforms=True)
    G = B * Matrix(snf.U).inv()
    out = []
    for i, e in enumerate(snf.exponents):
        if e:
            out.append((_primitive([G[r, i] for r in range(n)], k), e))
    return out


def _echelon(vectors, n):
    from .homology.linalg import echelon_basis

    return echelon_basis(vectors, n)


def _to_local(x) -> LocalScalar:
    return LocalScalar(int(x.p), int(x.q))


def _primitive(vec, k: int) -> list:
    """Integer representative in [0, 3^k) of a 3-local vector."""
    mod = 3**k
    out = []
    for x in vec:
        out.append(int(x.p) * pow(int(x.q), -1, mod) % mod)
    return out


def resolve_u_on(C: ConnectingMatrix) -> ModulePresentation:
    """Kernel of the columns v <= ell with explicit generators."""
    ell = ell_max(C.eps, C.m)
    M1 = C.restrict_columns(range(ell + 1))
    gens = _explicit_kernel(M1)
    labels, orders = [], []
    for vec, e in gens:
        terms = [f"{x}*{M1.columns[v].label()}" for v, x in enumerate(vec) if x]
        labels.append(" + ".join(terms))
        orders.append(e)
    return ModulePresentation(tuple(labels), tuple(orders), meta={"vectors": [g[0] for g in gens]})


@dataclass
class UResult:
    m: int
    V: int
    U: ModulePresentation
    K2: ModulePresentation
    kernel: ModulePresentation
    stable: bool
    certificate: dict

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t": 4 * self.m + 2,
            "V": self.V,
            "U": self.U.to_json() | {"summary": self.U.summary()},
            "K2": self.K2.summary(),
            "kernel": self.kernel.summary(),
            "stable": self.stable,
            "certificate": self.certificate,
        }


def resolve_u(m: int, V: int) -> UResult:
    """U^{4m+2}: the complement of K'' in ker delta1 on W^{1,m}, with a V vs V+4 certificate."""
    if not is_case5(1, m):
        raise PreconditionError(f"m={m} is not a positive integer = 13 mod 27")
    ell = ell_max(1, m)
    if V <= ell:
        raise PreconditionError(f"V must exceed {ell}")
    reports = []
    for VV in (V, V + 4):
        C = connecting_matrix(1, m, VV)
        ker, _ = C.ker_coker()
        gens = closed_kernel(1, m, VV, C.k)
        K2 = ModulePresentation(tuple(g[0] for g in gens), tuple(g[2] for g in gens))
        U = resolve_u_on(C)
        if _check_kernel_labels(C, gens):
            raise ArithmeticError("K'' is not contained in the kernel")
        if not ker.iso_equal(K2.direct_sum(U)):
            raise ArithmeticError(f"kernel {ker.summary()} != K'' + U")
        reports.append((ker, K2, U))
    (ker, K2, U), (ker4, K24, U4) = reports
    stable = U.invariants() == U4.invariants() and U.meta["vectors"] == U4.meta["vectors"]
    cert = {
        "V": V,
        "V+4": V + 4,
        "U(V)": U.summary(),
        "U(V+4)": U4.summary(),
        "kernel(V)": ker.summary(),
        "kernel(V+4)": ker4.summary(),
        "generators_equal": U.meta["vectors"] == U4.meta["vectors"],
    }
    if not stable:
        raise NonStabilizationError(f"U^{4 * m + 2} differs between V={V} and V+4")
    return UResult(m, V, U, K2, ker, stable, cert)
