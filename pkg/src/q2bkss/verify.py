"""Invariant suites behind ``q2bkss verify``.

Each check returns a :class:`Check`; a suite is a list of checks.  Random
samples use a fixed seed so reports are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import bring, connecting, spectral, tmfpi
from .arith import LocalScalar, reduce_mod, val3
from .bring import RingElement, a_elem, b_elem, h_map, psi2, psi_d

SEED = 20240611


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check(suite, name, fn) -> Check:
    try:
        res = fn()
    except Exception as exc:  # report, do not crash the suite
        return Check(suite, name, False, f"{type(exc).__name__}: {exc}")
    if isinstance(res, tuple):
        return Check(suite, name, bool(res[0]), str(res[1]))
    return Check(suite, name, bool(res))


def random_scalar(rng: random.Random, bound: int = 200) -> LocalScalar:
    den = rng.choice([1, 1, 2, 4, 5, 7, 8, 16])
    return LocalScalar(rng.randint(-bound, bound), den)


def random_homogeneous(rng: random.Random, terms: int = 4) -> RingElement:
    """Random element of a single internal degree."""
    m = rng.randint(-6, 6)
    e = rng.randint(0, 1)
    out = {}
    for _ in range(terms):
        i = rng.randint(-5, 5)
        out[(i, m - i, e)] = random_scalar(rng)
    return RingElement(out)


def suite_arith(n: int = 300) -> list:
    rng = random.Random(SEED)
    samples = [(random_scalar(rng), random_scalar(rng)) for _ in range(n)]

    def hom():
        for x, y in samples:
            for k in (1, 2, 4):
                mod = 3**k
                if reduce_mod(x * y, k) != reduce_mod(x, k) * reduce_mod(y, k) % mod:
                    return False, f"product {x}*{y} mod 3^{k}"
                if reduce_mod(x + y, k) != (reduce_mod(x, k) + reduce_mod(y, k)) % mod:
                    return False, f"sum {x}+{y} mod 3^{k}"
        return True

    def valuation():
        for x, y in samples:
            if x and y and val3(x * y) != val3(x) + val3(y):
                return False, f"{x}, {y}"
        return True

    return [_check("arith", "reduce_mod is a ring map", hom), _check("arith", "val3 is additive", valuation)]


def suite_ring(n: int = 200, V: int = 24, t_bound: int = 80) -> list:
    rng = random.Random(SEED)

    def psi_square():
        for _ in range(n):
            x = random_homogeneous(rng)
            if psi_d(psi_d(x)) != psi2(x):
                return False, str(x)
        return True

    def discriminant():
        return bring.c4() ** 3 - bring.c6() ** 2 == bring.delta_pow(1) * 1728

    def eigen():
        for i in range(-16, 17):
            for j in range(i + 1, 17):
                a, b = a_elem(i, j), b_elem(i, j)
                if h_map(a) != a * bring.a_eigenvalue(i + j):
                    return False, f"a_{i},{j}"
                if h_map(b) != b * bring.b_eigenvalue(i + j):
                    return False, f"b_{i},{j}"
        return True

    def from_q_hom():
        r = random.Random(SEED + 1)
        for _ in range(n):
            x = {(r.randint(0, 3), r.randint(0, 2), r.randint(-1, 1)): r.randint(-9, 9) for _ in range(2)}
            y = {(r.randint(0, 3), r.randint(0, 2), r.randint(-1, 1)): r.randint(-9, 9) for _ in range(2)}
            xy = {}
            for (a, b, c), u in x.items():
                for (a2, b2, c2), w in y.items():
                    key = (a + a2, b + b2, c + c2)
                    xy[key] = xy.get(key, 0) + u * w
            if bring.from_q(xy) != bring.from_q(x) * bring.from_q(y):
                return False, f"{x} * {y}"
        return True

    def symmetric_invertible():
        for t in range(-t_bound, t_bound + 1, 2):
            for mono in bring.monomial_window(t, 6):
                x = RingElement({mono: 1}) + RingElement({mono.swapped(): 1})
                coeffs, _ = bring.antisymmetrize(h_map(x))
                if coeffs:
                    return False, f"degree {t}"
                lam = h_map(x).coefficient(*mono) / x.coefficient(*mono)
                if not lam.is_unit():
                    return False, f"{mono}: eigenvalue {lam}"
        return True

    def ker_coker():
        for t in range(-t_bound, t_bound + 1):
            bring.ker_coker_h(t, V)
        return True

    return [
        _check("ring", "psi_d o psi_d = psi_[2]", psi_square),
        _check("ring", "1728 Delta = c4^3 - c6^2", discriminant),
        _check("ring", "h eigenvalues on a_ij, b_ij", eigen),
        _check("ring", "from_q is multiplicative", from_q_hom),
        _check("ring", "h is invertible on the symmetric sector", symmetric_invertible),
        _check("ring", f"ker/coker h closed form = Smith form, |t| <= {t_bound}", ker_coker),
    ]


def suite_tmf(V: int = 24) -> list:
    def gammas():
        for eps in (0, 1):
            for m in range(-20, 21):
                skip = connecting.excluded_residue(eps, m)
                for v in range(V + 1):
                    g = tmfpi.basis_class(eps, m, v).gamma
                    if (g == 1) != (v % 3 == skip):
                        return False, f"(eps={eps}, m={m}, v={v})"
        return True

    def degrees():
        for eps in (0, 1):
            for m in range(-20, 21):
                for v in range(V + 1):
                    c = tmfpi.basis_class(eps, m, v)
                    if c.degree != 4 * m + 2 * eps or embed_degree(c) != c.degree:
                        return False, str(c)
        return True

    def embed_degree(c):
        return tmfpi.embed(c).degree()

    def torsion_slots():
        slots = {3, 10, 13, 20, 27, 30, 37, 40}
        for t in range(-144, 145):
            if bool(tmfpi.torsion_at(t)) != (t % 72 in slots):
                return False, str(t)
        return True

    return [
        _check("tmf", "unit sequences follow m mod 9", gammas),
        _check("tmf", "basis degrees 4m + 2eps", degrees),
        _check("tmf", "torsion slots mod 72", torsion_slots),
    ]


def suite_delta(V: int = 16) -> list:
    def formula():
        for v in range(11):
            x = tmfpi.ZeroLineClass(3 * v, 0, -v)
            if connecting.delta0_formula(v) != connecting.delta0_coefficients(x):
                return False, f"v={v}"
        return True

    def units():
        for k in range(1, 7):
            if connecting.u_unit(k) != -(2 ** (12 * k)):
                return False, f"k={k}"
        return True

    def half():
        for v in range(11):
            d0 = connecting.delta0_coefficients(tmfpi.basis_class(0, 0, v))
            d1 = connecting.delta1_lift(tmfpi.basis_class(0, 0, v))
            d1 = {c.j: x for c, x in d1.items()}
            if {i: x * LocalScalar(1, 2) for i, x in d0.items()} != d1:
                return False, f"v={v}"
        return True

    def leading():
        for eps in (0, 1):
            for m in range(-20, 21):
                if eps == 0 and m == 0:
                    continue
                for v in range(min(V, 16) + 1):
                    connecting.verify_leading_term(eps, m, v)
        return True

    def cases():
        bad = []
        for eps in (0, 1):
            for m in range(-20, 21):
                if eps == 0 and m == 0:
                    continue
                r = connecting.case_analysis(eps, m, V)
                if not r.match:
                    bad.append((eps, m, r.notes))
        return not bad, bad or ""

    def case5():
        for m in (13, 40):
            col = connecting.delta1_column(1, m, tmfpi.ell_max(1, m))
            if not col:
                return False, f"m={m}: zero column"
        return True

    return [
        _check("delta", "delta0 closed form = direct, v <= 10", formula),
        _check("delta", "u_k = -2^(12k), k <= 6", units),
        _check("delta", "delta1 = delta0 / 2 in degree 0", half),
        _check("delta", "leading terms, |m| <= 20, v <= 16", leading),
        _check("delta", "case closed forms, |m| <= 20", cases),
        _check("delta", "special column nonzero for m = 13, 40", case5),
    ]


def suite_e2(t_min: int = -24, t_max: int = 24, V: int = 12, jobs: int = 1) -> list:
    holder = {}

    def cross():
        cc = spectral.cross_check(t_min, t_max, V, jobs)
        holder["page"] = cc
        return cc.ok, "; ".join(f"(s={r.s}, t={r.t}) {r.detail}" for r in cc.failures())

    def collapse():
        page = spectral.e2_filtration(t_min, t_max, V, jobs, certify=False)
        ok = all(spectral.collapse_check(page, g).ok for g in ("internal", "topological"))
        return ok

    return [
        _check("e2", f"direct = filtration = closed form on [{t_min}, {t_max}]", cross),
        _check("e2", "d2 candidates and collapse bookkeeping", collapse),
    ]


SUITES = {
    "arith": suite_arith,
    "ring": suite_ring,
    "tmf": suite_tmf,
    "delta": suite_delta,
    "e2": suite_e2,
}


def run(suite: str, **kw) -> list:
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        fn = SUITES[name]
        args = {}
        if name in ("ring", "tmf", "delta", "e2") and "V" in kw:
            args["V"] = kw["V"]
        if name == "e2":
            for key in ("t_min", "t_max", "jobs"):
                if key in kw:
                    args[key] = kw[key]
        out += fn(**args)
    return out


__all__ = ["Check", "SUITES", "run", "random_homogeneous"]
