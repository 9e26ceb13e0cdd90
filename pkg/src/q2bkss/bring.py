"""The graded ring B = Z_(3)[q2, q4, Delta^-1] in sigma/tau normal form.

Every element is written uniquely as a finite sum of ``sigma^i tau^j q2^e``
with ``i, j`` arbitrary integers and ``e`` in {0, 1}, using

    q4 = sigma/8,   q2^2 = (sigma + tau)/2,   Delta = sigma^2 tau / 8.

Internal degrees: |sigma| = |tau| = 4, |q2| = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .arith import LocalScalar, ONE, ZERO, reduce_mod, val3_int
from .homology import LabeledMatrix, ModulePresentation, smith_normal_form
from .homology.presentation import FREE

HALF = LocalScalar(1, 2)
EIGHTH = LocalScalar(1, 8)


class InhomogeneousError(ValueError):
    pass


class NonStabilizationError(RuntimeError):
    pass


class Monomial(NamedTuple):
    i: int
    j: int
    e: int = 0

    @property
    def degree(self) -> int:
        return 4 * (self.i + self.j) + 2 * self.e

    def swapped(self) -> "Monomial":
        return Monomial(self.j, self.i, self.e)

    def __str__(self):
        parts = []
        for name, k in (("s", self.i), ("t", self.j)):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        if self.e:
            parts.append("q2")
        return "*".join(parts) or "1"


class RingElement:
    """Immutable element of B.  ``terms`` maps :class:`Monomial` to nonzero scalars."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = LocalScalar.coerce(c)
            if c:
                if not isinstance(mono, Monomial):
                    mono = Monomial(*mono)
                if mono.e not in (0, 1):
                    raise ValueError("q2 exponent must be 0 or 1 in normal form")
                clean[mono] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def monomial(cls, i: int, j: int, e: int = 0, coeff=1) -> "RingElement":
        return cls({Monomial(i, j, e): coeff})

    @classmethod
    def scalar(cls, c) -> "RingElement":
        return cls({Monomial(0, 0, 0): c})

    # -- structure ---------------------------------------------------------
    def degrees(self) -> set:
        return {m.degree for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """Internal degree, ``"inhomogeneous"`` for mixed elements, ``None`` for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            return "inhomogeneous"
        return next(iter(ds))

    def coefficient(self, i: int, j: int, e: int = 0) -> LocalScalar:
        return self.terms.get(Monomial(i, j, e), ZERO)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, LocalScalar)):
            other = RingElement.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _lift(x) -> "RingElement":
        if isinstance(x, RingElement):
            return x
        return RingElement.scalar(x)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return RingElement(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "RingElement":
        c = LocalScalar.coerce(c)
        return RingElement({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        out = {}

        def put(m, c):
            out[m] = out.get(m, ZERO) + c

        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                i, j = m1.i + m2.i, m1.j + m2.j
                if m1.e + m2.e == 2:
                    half = c * HALF
                    put(Monomial(i + 1, j, 0), half)
                    put(Monomial(i, j + 1, 0), half)
                else:
                    put(Monomial(i, j, m1.e + m2.e), c)
        return RingElement(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible here")
            (m, c), = self.terms.items()
            if m.e:
                # q2^-1 = 2 q2 / (sigma + tau) is not a Laurent monomial
                raise ValueError("q2 is not a unit of B")
            return RingElement({Monomial(m.i * n, m.j * n, 0): ONE / c ** -n})
        result = RingElement.scalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- display / serialization --------------------------------------------
    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))

    def to_json(self) -> list:
        return [
            {"i": m.i, "j": m.j, "e": m.e, "num": str(c.num), "den": str(c.den)}
            for m, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data) -> "RingElement":
        return cls(
            {Monomial(d["i"], d["j"], d["e"]): LocalScalar(int(d["num"]), int(d["den"])) for d in data}
        )


SIGMA = RingElement.monomial(1, 0)
TAU = RingElement.monomial(0, 1)
Q2 = RingElement.monomial(0, 0, 1)
Q4 = SIGMA * EIGHTH
DELTA = RingElement.monomial(2, 1, 0, EIGHTH)


# -- q-coordinates ----------------------------------------------------------
# A formal polynomial in q2, q4, Delta^{+-1} is a dict {(a, b, c): coeff} meaning
# sum coeff * q2^a q4^b Delta^c.

def from_q(expr: dict) -> RingElement:
    out = RingElement()
    for (a, b, c), coeff in expr.items():
        if a < 0:
            raise ValueError("q2 is not invertible in B")
        s, e = divmod(a, 2)
        term = ((SIGMA + TAU) * HALF) ** s * (Q2 if e else 1)
        term = term * Q4 ** b * DELTA ** c
        out = out + term * LocalScalar.coerce(coeff)
    return out


def _qmul(x: dict, y: dict) -> dict:
    out = {}
    for (a1, b1, c1), u in x.items():
        for (a2, b2, c2), w in y.items():
            k = (a1 + a2, b1 + b2, c1 + c2)
            out[k] = out.get(k, ZERO) + u * w
    return {k: v for k, v in out.items() if v}


def _qpow(x: dict, n: int) -> dict:
    out = {(0, 0, 0): ONE}
    for _ in range(n):
        out = _qmul(out, x)
    return out


# sigma = 8 q4, tau = 2 q2^2 - 8 q4 and their inverses through Delta^-1:
#   sigma^-1 = q4 (2 q2^2 - 8 q4) Delta^-1,  tau^-1 = 8 q4^2 Delta^-1
_Q_SIGMA = {(0, 1, 0): LocalScalar(8)}
_Q_TAU = {(2, 0, 0): LocalScalar(2), (0, 1, 0): LocalScalar(-8)}
_Q_SIGMA_INV = {(2, 1, -1): LocalScalar(2), (0, 2, -1): LocalScalar(-8)}
_Q_TAU_INV = {(0, 2, -1): LocalScalar(8)}


def to_q(x: RingElement) -> dict:
    """One preimage under :func:`from_q`; ``from_q(to_q(x)) == x``."""
    out = {}
    for m, c in x.terms.items():
        t = {(m.e, 0, 0): c}
        t = _qmul(t, _qpow(_Q_SIGMA if m.i >= 0 else _Q_SIGMA_INV, abs(m.i)))
        t = _qmul(t, _qpow(_Q_TAU if m.j >= 0 else _Q_TAU_INV, abs(m.j)))
        for k, v in t.items():
            out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


# -- modular forms --------------------------------------------------------

def c4() -> RingElement:
    return SIGMA * 2 + TAU * 8


def c6() -> RingElement:
    return Q2 * (SIGMA * 4 - TAU * 32)


def delta_pow(ell: int) -> RingElement:
    return DELTA ** ell


# -- endomorphisms ----------------------------------------------------------

def _pow4(n: int) -> LocalScalar:
    return LocalScalar(4**n) if n >= 0 else LocalScalar(1, 4**-n)


def psi_d(x: RingElement) -> RingElement:
    """sigma -> 4 tau, tau -> 4 sigma, q2 -> -2 q2."""
    out = {}
    for m, c in x.terms.items():
        f = _pow4(m.i + m.j) * (-2 if m.e else 1)
        out[m.swapped()] = c * f
    return RingElement(out)


def psi2(x: RingElement) -> RingElement:
    """Multiplication by 2^t on the degree-t part."""
    out = {}
    for m, c in x.terms.items():
        t = m.degree
        out[m] = c * (LocalScalar(2**t) if t >= 0 else LocalScalar(1, 2**-t))
    return RingElement(out)


def h_map(x: RingElement) -> RingElement:
    return psi_d(x) + x


def a_eigenvalue(m: int) -> LocalScalar:
    return 1 - _pow4(m)


def b_eigenvalue(m: int) -> LocalScalar:
    return 1 + _pow4(m) * 2


def nu3(n: int):
    return val3_int(n)


def a_order(m: int) -> int:
    """Exponent k with coker h = Z/3^k on an a-class of weight m (m != 0)."""
    return nu3(m) + 1


def b_order(m: int) -> int:
    return nu3(2 * m + 1) + 1


# -- eigenbasis -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class EigenClass:
    """``a_{i,j} = s^i t^j - s^j t^i`` (kind "A") or ``b_{i,j} = a_{i,j} q2`` (kind "B"), i < j."""

    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ValueError("kind must be 'A' or 'B'")
        if not self.i < self.j:
            raise ValueError("eigenclasses need i < j")

    @property
    def m(self) -> int:
        return self.i + self.j

    @property
    def v(self) -> int:
        return (self.m - 1) // 2 - self.i

    @property
    def e(self) -> int:
        return 1 if self.kind == "B" else 0

    @property
    def degree(self) -> int:
        return 4 * self.m + 2 * self.e

    @classmethod
    def from_mv(cls, kind: str, m: int, v: int) -> "EigenClass":
        if v < 0:
            raise ValueError("v must be >= 0")
        i = (m - 1) // 2 - v
        return cls(kind, i, m - i)

    def element(self) -> RingElement:
        return RingElement({Monomial(self.i, self.j, self.e): 1, Monomial(self.j, self.i, self.e): -1})

    def label(self) -> str:
        return f"{self.kind}_{self.v}^{self.m}"

    def __str__(self):
        return self.label()


def a_elem(i: int, j: int) -> RingElement:
    return EigenClass("A", i, j).element()


def b_elem(i: int, j: int) -> RingElement:
    return EigenClass("B", i, j).element()


def antisymmetrize(x: RingElement):
    """Split a homogeneous element into eigenclass coefficients and a swap-symmetric rest."""
    if not x.is_homogeneous():
        raise InhomogeneousError("antisymmetrize needs a homogeneous element")
    coeffs = {}
    for m, c in x.terms.items():
        if m.i < m.j:
            d = (c - x.terms.get(m.swapped(), ZERO)) * HALF
        elif m.i > m.j and m.swapped() not in x.terms:
            d = -c * HALF
        else:
            continue
        if d:
            lo = m if m.i < m.j else m.swapped()
            coeffs[EigenClass("B" if lo.e else "A", lo.i, lo.j)] = d
    rest = x
    for cls_, d in coeffs.items():
        rest = rest - cls_.element() * d
    return coeffs, rest


def _split_degree(t: int):
    """``(m, e)`` with ``t = 4m + 2e``; ``None`` for odd ``t``."""
    if t % 2:
        return None
    return (t - 2) // 4 if t % 4 == 2 else t // 4, 1 if t % 4 == 2 else 0


def eigen_window(t: int, V: int) -> list:
    """Eigenclasses of degree ``t`` with ``v <= V``."""
    s = _split_degree(t)
    if s is None:
        return []
    m, e = s
    kind = "B" if e else "A"
    return [EigenClass.from_mv(kind, m, v) for v in range(V + 1)]


def project_coker_h(x: RingElement) -> dict:
    """Image in coker h as ``{EigenClass: residue}`` (zero residues dropped)."""
    if not x:
        return {}
    if not x.is_homogeneous():
        raise InhomogeneousError("project_coker_h needs a homogeneous element")
    t = x.degree()
    s = _split_degree(t)
    if s is None:
        raise ValueError(f"degree {t} carries no eigenclasses")
    m, e = s
    if e == 0 and any(mono.e for mono in x.terms):
        raise ValueError("q2-sector terms in degree 4m")
    coeffs, _ = antisymmetrize(x)
    if e == 0 and m == 0:
        # h vanishes on the a-sector in degree 0: coker is free there
        return {c: d for c, d in coeffs.items()}
    k = b_order(m) if e else a_order(m)
    out = {}
    for cls_, d in coeffs.items():
        r = reduce_mod(d, k)
        if r:
            out[cls_] = r
    return out


# -- ker / coker of h --------------------------------------------------------

def monomial_window(t: int, V: int) -> list:
    """Monomials of degree ``t`` whose swap pair lies in the ``v <= V`` window."""
    s = _split_degree(t)
    if s is None:
        return []
    m, e = s
    i_min = (m - 1) // 2 - V
    return [Monomial(i, m - i, e) for i in range(i_min, m - i_min + 1)]


def h_matrix(t: int, V: int) -> LabeledMatrix:
    monos = monomial_window(t, V)
    cols = [h_map(RingElement.monomial(*mono)).terms for mono in monos]
    return LabeledMatrix.from_columns(monos, monos, cols)


def ker_coker_h_closed(t: int, V: int):
    """Closed-form ``(ker h, coker h)`` in degree ``t`` on the truncated window."""
    classes = eigen_window(t, V)
    if not classes:
        return ModulePresentation.zero(), ModulePresentation.zero()
    m, e = classes[0].m, classes[0].e
    if e == 0 and m == 0:
        gens = tuple(c.label() for c in classes)
        free = ModulePresentation(gens, (FREE,) * len(gens))
        return free, free
    k = b_order(m) if e else a_order(m)
    coker = ModulePresentation(tuple(c.label() for c in classes), (k,) * len(classes))
    return ModulePresentation.zero(), coker


def ker_coker_h_snf(t: int, V: int):
    """``(ker h, coker h)`` invariants from the Smith form of the truncated matrix."""
    M = h_matrix(t, V)
    res = smith_normal_form(M)
    n = M.shape[0]
    rank = len(res.exponents)
    ker = ModulePresentation.from_invariants(n - rank, [], prefix="k")
    coker = ModulePresentation.from_invariants(n - rank, res.exponents, prefix="c")
    return ker, coker


def ker_coker_h(t: int, V: int, check: bool = True):
    """Closed form, cross-checked against the Smith form at ``V`` and ``V + 4``."""
    ker, coker = ker_coker_h_closed(t, V)
    if check:
        sk, sc = ker_coker_h_snf(t, V)
        if not (sk.iso_equal(ker) and sc.iso_equal(coker)):
            raise AssertionError(f"closed form and Smith form disagree in degree {t}")
        sk4, sc4 = ker_coker_h_snf(t, V + 4)
        grow = len(eigen_window(t, V + 4)) - len(eigen_window(t, V))
        if not _grows_by(sk, sk4, sc, sc4, grow):
            raise NonStabilizationError(f"h in degree {t} changes beyond the V={V} window")
    return ker, coker


def _grows_by(k0, k1, c0, c1, n) -> bool:
    # from V to V+4 the window gains n eigenclasses, each of the same type
    if not (k1.contains_iso(k0) and c1.contains_iso(c0)):
        return False
    dk, dc = k1.minus_iso(k0), c1.minus_iso(c0)
    if not n:
        return dk.is_zero() and dc.is_zero()
    types = set(dc.torsion_exponents) | ({FREE} if dc.free_rank else set())
    return len(dc.orders) == n and len(types) == 1
