"""The E2-term over a window of internal degrees, by two independent paths.

* direct: cohomology of the three-term complex
  pi_t --d1--> B_t x pi_t --d2--> B_t, with
  d1(x) = ((psi_d - 1) embed x, (2^t - 1) x) and d2(b, y) = h(b) - embed(y);
* filtration: the long exact sequence built from ker/coker of g and h and
  the connecting maps delta0, delta1.

A third table transcribes the closed-form answer on the same truncation.
Infinite families are rendered by their finite count inside the window.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bring import (
    EigenClass,
    NonStabilizationError,
    RingElement,
    h_map,
    ker_coker_h_closed,
    monomial_window,
    psi_d,
)
from .connecting import (
    PreconditionError,
    case_id,
    closed_cokernel,
    closed_kernel,
    connecting_matrix,
    delta0_coefficients,
    floor_half,
    resolve_u,
    row_window,
    sector_order,
)
from .homology import LabeledMatrix, ModulePresentation, ThreeTermComplex, complex_cohomology, les_assemble
from .homology.presentation import FREE
from .tmfpi import basis_class, ell_max, embed, g_factor, ker_coker_g, torsion_at_internal, zero_line_basis

log = logging.getLogger(__name__)

PROVENANCES = ("direct", "filtration", "theorem")


@dataclass(frozen=True, order=True)
class Bidegree:
    s: int
    t: int

    @property
    def chart_x(self) -> int:
        return self.t - self.s


def sector_of(t: int):
    """``(eps, m)`` with t = 4m + 2 eps, or ``None`` for odd t."""
    if t % 2:
        return None
    return (1, (t - 2) // 4) if t % 4 == 2 else (0, t // 4)


def torsion_module(t: int) -> ModulePresentation:
    tors = torsion_at_internal(t)
    return ModulePresentation(tuple(c.label() for c in tors), (1,) * len(tors))


# -- direct path --------------------------------------------------------------

def direct_complex(t: int, V: int) -> ThreeTermComplex:
    sec = sector_of(t)
    zl = zero_line_basis(t, V)
    tors = torsion_at_internal(t)
    if sec is None:
        monos = []
    else:
        eps, m = sec
        monos = monomial_window(t, row_window(eps, m, V))
    g0 = [("pi", c) for c in zl] + [("tors", c) for c in tors]
    g1 = [("b", x) for x in monos] + g0
    g2 = [("b", x) for x in monos]
    ft = g_factor(t)
    d1_cols = []
    for kind, c in g0:
        if kind == "tors":
            d1_cols.append({})
            continue
        e = embed(c)
        col = {("b", mono): x for mono, x in (psi_d(e) - e).terms.items()}
        if ft:
            col[("pi", c)] = ft
        d1_cols.append(col)
    d2_cols = []
    for kind, c in g1:
        if kind == "b":
            d2_cols.append({("b", mono): x for mono, x in h_map(RingElement({c: 1})).terms.items()})
        elif kind == "pi":
            d2_cols.append({("b", mono): -x for mono, x in embed(c).terms.items()})
        else:
            d2_cols.append({})
    try:
        d1 = LabeledMatrix.from_columns(g1, g0, d1_cols)
        d2 = LabeledMatrix.from_columns(g2, g1, d2_cols)
    except KeyError as exc:
        raise NonStabilizationError(f"degree {t}: monomial outside the B window ({exc})") from None

    def pres(gens):
        return ModulePresentation(
            tuple(_gen_label(k, c) for k, c in gens), tuple(1 if k == "tors" else FREE for k, _ in gens)
        )

    return ThreeTermComplex(pres(g0), pres(g1), pres(g2), d1, d2)


def _gen_label(kind, c) -> str:
    return c.label() if kind in ("pi", "tors") else f"B:{c}"


def e2_direct_degree(t: int, V: int) -> tuple:
    return complex_cohomology(direct_complex(t, V))


# -- filtration path ------------------------------------------------------------

def e2_filtration_degree(t: int, V: int) -> tuple:
    sec = sector_of(t)
    tors = torsion_module(t)
    if sec is None:
        return tors, tors, ModulePresentation.zero()
    eps, m = sec
    C = connecting_matrix(eps, m, V)
    W = len(C.rows) - 1
    ker_g, coker_g = ker_coker_g(t, V)
    ker_h, coker_h = ker_coker_h_closed(t, W)
    ntors = len(tors.orders)
    n_zl = len(C.columns)
    d0_entries = {}
    if t == 0:
        row_of = {c: r for r, c in enumerate(C.rows)}
        for j, x in enumerate(C.columns):
            for i, d in delta0_coefficients(x).items():
                d0_entries[(row_of[EigenClass("A", -i, i)], j)] = d
    d0 = LabeledMatrix(ker_h.generators, ker_g.generators, d0_entries)
    d1 = LabeledMatrix(
        coker_h.generators,
        coker_g.generators,
        C.residues().entries if C.k is not None else C.lifts.entries,
    )
    assert len(ker_g.orders) in (ntors, n_zl + ntors)
    return les_assemble(ker_g, ker_h, coker_g, coker_h, d0, d1, t)


# -- closed forms ------------------------------------------------------------

@dataclass
class TheoremEntry:
    module: ModulePresentation
    placeholder: bool = False
    note: str = ""


def closed_window(eps: int, m: int, V: int) -> int:
    ell = ell_max(eps, m)
    if V < ell + 2:
        raise PreconditionError(f"V={V} too small for sector (eps={eps}, m={m}); need V >= {ell + 2}")
    return floor_half(m) - 2 * ell + 2 * V


def theorem_degree(t: int, V: int) -> dict:
    """Closed-form E2^{s,t} (s = 0, 1, 2) on the truncation V."""
    tors = torsion_module(t)
    zero = ModulePresentation.zero()
    sec = sector_of(t)
    if sec is None:
        return {0: TheoremEntry(tors), 1: TheoremEntry(tors), 2: TheoremEntry(zero)}
    eps, m = sec
    if t == 0:
        free = [f"a_{{-{i},{i}}}" for i in range(1, 2 * V + 1, 2)]
        small = [f"delta0(C_{v}^0)" for v in range(1, V + 1) if v % 3]
        rest = ModulePresentation(tuple(free + small), (FREE,) * len(free) + (1,) * len(small))
        one = ModulePresentation(("1",), (FREE,))
        return {
            0: TheoremEntry(one.direct_sum(tors)),
            1: TheoremEntry(one.direct_sum(rest, tors)),
            2: TheoremEntry(rest),
        }
    k = sector_order(eps, m)
    W = closed_window(eps, m, V)
    gens = closed_kernel(eps, m, V, k)
    ker = ModulePresentation(tuple(g[0] for g in gens), tuple(g[2] for g in gens))
    coker = closed_cokernel(eps, m, V, W, k)
    if case_id(eps, m) == 5:
        known = tors.direct_sum(ker)
        with_u = ModulePresentation(known.generators, known.orders, meta={"placeholders": [f"U^{t}"]})
        return {
            0: TheoremEntry(tors),
            1: TheoremEntry(with_u, True, f"U^{t} undetermined in closed form"),
            2: TheoremEntry(
                ModulePresentation(coker.generators, coker.orders, ("~",)), True, "one extra relation"
            ),
        }
    return {0: TheoremEntry(tors), 1: TheoremEntry(tors.direct_sum(ker)), 2: TheoremEntry(coker)}


def theorem_shape_ok(t: int, s: int, module: ModulePresentation) -> bool:
    """Does a closed-form entry only use the summand types listed for (s, t)?"""
    tors_n = len(torsion_at_internal(t))
    sec = sector_of(t)
    if sec is None or s == 0:
        if t == 0 and s == 0:
            return module.invariants() == (1, (1,) * tors_n)
        return module.invariants() == (0, (1,) * tors_n)
    eps, m = sec
    if t == 0:
        return set(module.torsion_exponents) <= {1}
    k = sector_order(eps, m)
    exps = list(module.torsion_exponents)
    if module.free_rank:
        return False
    if s == 1:
        big = [e for e in exps if e != 1]
        if eps == 0 and m < 0 or eps == 1 and m <= 0:
            return not big
        return len(big) <= 1 and set(big) <= {k}
    return set(exps) <= {1, k}


# -- pages ------------------------------------------------------------------------

@dataclass
class E2Page:
    provenance: str
    V: int
    entries: dict = field(default_factory=dict)  # Bidegree -> ModulePresentation
    notes: dict = field(default_factory=dict)

    def get(self, s: int, t: int) -> ModulePresentation:
        return self.entries.get(Bidegree(s, t), ModulePresentation.zero())

    def degrees(self) -> list:
        return sorted({b.t for b in self.entries})

    def nonzero(self) -> list:
        return sorted(b for b, mod in self.entries.items() if not mod.is_zero())

    def to_json(self) -> list:
        out = []
        for b in sorted(self.entries, key=lambda b: (b.t, b.s)):
            mod = self.entries[b]
            d = {"s": b.s, "t": b.t, "chartX": b.chart_x}
            d.update(mod.to_json())
            d["summary"] = mod.summary()
            d["provenance"] = self.provenance
            out.append(d)
        return out


def _degree_job(args):
    path, t, V = args
    if path == "direct":
        return e2_direct_degree(t, V)
    return e2_filtration_degree(t, V)


def _run(path: str, ts, V: int, jobs: int) -> list:
    work = [(path, t, V) for t in ts]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_degree_job, work))
    return [_degree_job(w) for w in work]


def _allowed_growth(s: int, t: int) -> set:
    sec = sector_of(t)
    if s == 0 or sec is None:
        return set()
    if t == 0:
        return {FREE, 1}
    return {1} if s == 1 else {1, sector_order(*sec)}


def stable_growth(s: int, t: int, small: ModulePresentation, big: ModulePresentation) -> bool:
    """``big`` is ``small`` plus summands of the family types for (s, t)."""
    if not big.contains_iso(small):
        return False
    d = big.minus_iso(small)
    types = set(d.torsion_exponents) | ({FREE} if d.free_rank else set())
    return types <= _allowed_growth(s, t)


def _page(path: str, t_min: int, t_max: int, V: int, jobs: int, certify: bool) -> E2Page:
    ts = list(range(t_min, t_max + 1))
    page = E2Page(path, V)
    results = _run(path, ts, V, jobs)
    for t, hs in zip(ts, results):
        for s, mod in enumerate(hs):
            page.entries[Bidegree(s, t)] = mod
    if certify:
        bigger = _run(path, ts, V + 4, jobs)
        bad = []
        for t, hs in zip(ts, bigger):
            for s, mod in enumerate(hs):
                if not stable_growth(s, t, page.entries[Bidegree(s, t)], mod):
                    bad.append((s, t))
        page.notes["certificate"] = {"V": V, "V+4": V + 4, "unstable": bad}
        if bad:
            raise NonStabilizationError(f"{path} page changes between V={V} and V+4 at {bad}")
    return page


def e2_direct(t_min: int, t_max: int, V: int, jobs: int = 1, certify: bool = True) -> E2Page:
    if V < 8:
        raise PreconditionError("V must be at least 8")
    return _page("direct", t_min, t_max, V, jobs, certify)


def e2_filtration(t_min: int, t_max: int, V: int, jobs: int = 1, certify: bool = True) -> E2Page:
    if V < 8:
        raise PreconditionError("V must be at least 8")
    return _page("filtration", t_min, t_max, V, jobs, certify)


def theorem_table(t_min: int, t_max: int, V: int) -> E2Page:
    page = E2Page("theorem", V)
    for t in range(t_min, t_max + 1):
        for s, entry in theorem_degree(t, V).items():
            page.entries[Bidegree(s, t)] = entry.module
            if entry.placeholder:
                page.notes.setdefault("placeholders", []).append((s, t))
    return page


@dataclass
class CrossCheckRow:
    s: int
    t: int
    direct: str
    filtration: str
    theorem: str
    status: str  # "match", "placeholder" or "mismatch"
    detail: str = ""


@dataclass
class CrossCheck:
    V: int
    rows: list
    resolved_u: dict

    @property
    def ok(self) -> bool:
        return all(r.status != "mismatch" for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if r.status == "mismatch"]

    def to_json(self) -> dict:
        return {
            "V": self.V,
            "ok": self.ok,
            "rows": [r.__dict__ for r in self.rows],
            "resolvedU": self.resolved_u,
        }


def cross_check(t_min: int, t_max: int, V: int, jobs: int = 1, certify: bool = True,
                pages: tuple | None = None) -> CrossCheck:
    if pages is None:
        direct = e2_direct(t_min, t_max, V, jobs, certify)
        filt = e2_filtration(t_min, t_max, V, jobs, certify)
    else:
        direct, filt = pages
    theo = theorem_table(t_min, t_max, V)
    placeholders = set(theo.notes.get("placeholders", []))
    rows, resolved = [], {}
    for t in range(t_min, t_max + 1):
        for s in range(3):
            a, b, c = direct.get(s, t), filt.get(s, t), theo.get(s, t)
            detail = ""
            if not a.iso_equal(b):
                status, detail = "mismatch", "direct != filtration"
            elif (s, t) in placeholders:
                status = "placeholder"
                if s == 2:
                    bare = ModulePresentation(c.generators, c.orders)
                    detail = "relation redundant" if b.iso_equal(bare) else "relation cuts down"
                if s == 1:
                    sec = sector_of(t)
                    u = resolve_u(sec[1], V)
                    resolved[t] = u.U.summary()
                    if not b.iso_equal(c.direct_sum(u.U)):
                        status, detail = "mismatch", "filtration != torsion + K'' + U"
            elif not b.iso_equal(c):
                status, detail = "mismatch", "filtration != theorem"
            elif not theorem_shape_ok(t, s, c):
                status, detail = "mismatch", "closed form has a summand type outside the theorem"
            else:
                status = "match"
            rows.append(CrossCheckRow(s, t, a.summary(), b.summary(), c.summary(), status, detail))
        for s in range(3, 5):
            rows.append(CrossCheckRow(s, t, "0", "0", "0", "match", "complex has length 3"))
    return CrossCheck(V, rows, resolved)


# -- differentials ---------------------------------------------------------------

@dataclass(frozen=True)
class DifferentialCandidate:
    source: tuple  # (s, t)
    target: tuple
    r: int
    status: str  # "possibly-nonzero" or "forced-zero"
    reason: str = ""


def topological_page(page: E2Page) -> dict:
    """Regrade a page: 0-line and B classes of internal degree t go to 2t,
    torsion classes to their own topological stem.  Returns ``{(s, tTop): module}``."""
    out = {}

    def add(key, mod):
        out[key] = out.get(key, ModulePresentation.zero()).direct_sum(mod)

    for b, mod in page.entries.items():
        if mod.is_zero():
            continue
        tors = torsion_at_internal(b.t) if b.s in (0, 1) else []
        tmod = ModulePresentation(tuple(c.label() for c in tors), (1,) * len(tors))
        rest = mod.minus_iso(tmod) if tors else mod
        if not rest.is_zero():
            add((b.s, 2 * b.t), rest)
        for c in tors:
            add((b.s, c.t_top), ModulePresentation((c.label(),), (1,)))
    return out


def d2_candidates(page: E2Page, grading: str = "internal", r_max: int = 4) -> list:
    """Classify every d_r (2 <= r <= r_max) leaving a nonzero group: d_r goes (s, t) -> (s + r, t + r - 1)."""
    if grading == "internal":
        groups = {(b.s, b.t): m for b, m in page.entries.items() if not m.is_zero()}
        ts = page.degrees()
    elif grading == "topological":
        groups = {k: m for k, m in topological_page(page).items() if not m.is_zero()}
        ts = sorted({k[1] for k in groups})
    else:
        raise ValueError("grading must be 'internal' or 'topological'")
    lo, hi = (min(ts), max(ts)) if ts else (0, -1)
    out = []
    for (s, t) in sorted(groups):
        for r in range(2, r_max + 1):
            tgt = (s + r, t + r - 1)
            if s + r >= 3:
                status, reason = "forced-zero", "target row s >= 3 vanishes"
            elif not lo <= tgt[1] <= hi:
                status, reason = "forced-zero", "target outside window"
            elif tgt not in groups:
                status, reason = "forced-zero", "target-zero"
            else:
                status, reason = "possibly-nonzero", ""
            out.append(DifferentialCandidate((s, t), tgt, r, status, reason))
    return out


@dataclass
class CollapseReport:
    grading: str
    possibly_nonzero: list
    expected: list
    rows_above_two_zero: bool
    one_line_permanent: bool
    ok: bool

    def to_json(self) -> dict:
        return {
            "grading": self.grading,
            "possiblyNonzero": [(c.source, c.target) for c in self.possibly_nonzero],
            "expected": self.expected,
            "rowsAboveTwoZero": self.rows_above_two_zero,
            "oneLinePermanent": self.one_line_permanent,
            "ok": self.ok,
        }


def collapse_check(page: E2Page, grading: str = "internal") -> CollapseReport:
    cands = d2_candidates(page, grading)
    live = [c for c in cands if c.status == "possibly-nonzero"]
    if grading == "internal":
        groups = {(b.s, b.t) for b, m in page.entries.items() if not m.is_zero()}
        ts = page.degrees()
    else:
        groups = {k for k, m in topological_page(page).items() if not m.is_zero()}
        ts = sorted({k[1] for k in groups})
    lo, hi = (min(ts), max(ts)) if ts else (0, -1)
    expected = sorted(
        ((0, t), (2, t + 1)) for (s, t) in groups if s == 0 and (2, t + 1) in groups and t + 1 <= hi
    )
    got = sorted((c.source, c.target) for c in live)
    rows_zero = all(s < 3 for (s, _t) in groups)
    # nothing can hit or leave the 1-line: sources in row 1 land in row >= 3,
    # and a d_r into row 1 would start in row <= -1
    one_line = all(c.status == "forced-zero" for c in cands if c.source[0] == 1)
    only_r2 = all(c.r == 2 for c in live)
    ok = got == expected and rows_zero and one_line and only_r2
    return CollapseReport(grading, live, expected, rows_zero, one_line, ok)
