"""Additive model of pi_* TMF_(3): the 0-line monomial basis plus the 3-torsion table.

Gradings are internal (c4 in degree 4, c6 in degree 6, Delta in degree 12).
A torsion class of topological stem ``n`` and filtration ``s`` sits in internal
degree ``(n + s) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import LocalScalar, val3_int
from .bring import RingElement, c4, c6, delta_pow
from .homology import ModulePresentation
from .homology.presentation import FREE

# One 72-period of torsion: (name, topological stem, filtration).
TORSION_TABLE = (
    ("alpha", 3, 1),
    ("beta", 10, 2),
    ("alpha*beta", 13, 3),
    ("beta^2", 20, 4),
    ("b", 27, 1),
    ("beta^3", 30, 6),  # equals b*alpha
    ("beta*b", 37, 3),
    ("beta^4", 40, 8),
)
PERIOD_TOP = 72
PERIOD_INTERNAL = 36

# Gamma-side representatives (r is the degree-1 generator of the coface ideal).
_REPRESENTATIVES = {
    "alpha": "r",
    "b": "r^2(x)r - r(x)r^2",
}  # the remaining classes are products of these and beta

SYMBOLS = {
    "alpha": "α",
    "beta": "β",
    "alpha*beta": "αβ",
    "beta^2": "β²",
    "b": "b",
    "beta^3": "β³",
    "beta*b": "βb",
    "beta^4": "β⁴",
}


def ell_max(eps: int, m: int) -> int:
    return m // 3 if eps == 0 else (m - 1) // 3


def gamma_factor(ell: int) -> int:
    return 1 if ell % 3 == 0 else 3


@dataclass(frozen=True, order=True)
class ZeroLineClass:
    """``gamma * c4^n c6^eps Delta^ell``."""

    n: int
    eps: int
    ell: int
    gamma: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative c4 exponent")
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        if self.gamma not in (1, 3):
            raise ValueError("gamma must be 1 or 3")

    @property
    def m(self) -> int:
        return self.n + self.eps + 3 * self.ell

    @property
    def degree(self) -> int:
        return 4 * self.n + 6 * self.eps + 12 * self.ell

    @property
    def v(self) -> int:
        return ell_max(self.eps, self.m) - self.ell

    def label(self) -> str:
        letter = "D" if self.eps else "C"
        pre = "3" if self.gamma == 3 else ""
        return f"{pre}{letter}_{self.v}^{self.m}"

    def monomial_str(self) -> str:
        parts = []
        if self.gamma != 1:
            parts.append(str(self.gamma))
        if self.n:
            parts.append("c4" if self.n == 1 else f"c4^{self.n}")
        if self.eps:
            parts.append("c6")
        if self.ell:
            parts.append("Delta" if self.ell == 1 else f"Delta^{self.ell}")
        return "*".join(parts) or "1"

    def __str__(self):
        return self.label()

    def to_json(self) -> dict:
        return {"kind": "zeroline", "n": self.n, "eps": self.eps, "ell": self.ell, "gamma": self.gamma}


@dataclass(frozen=True, order=True)
class TorsionClass:
    """Torsion class ``name * Delta^{3k}``; always of order 3."""

    name: str
    k: int = 0

    def __post_init__(self):
        if self.name not in SYMBOLS:
            raise ValueError(f"unknown torsion class {self.name!r}")

    @property
    def _row(self):
        return next(r for r in TORSION_TABLE if r[0] == self.name)

    @property
    def s(self) -> int:
        return self._row[2]

    @property
    def t_top(self) -> int:
        return self._row[1] + PERIOD_TOP * self.k

    @property
    def degree(self) -> int:
        return (self.t_top + self.s) // 2

    @property
    def representative(self) -> str:
        base = _REPRESENTATIVES.get(self.name, "product")
        return base if self.k == 0 else f"({base})*Delta^{3 * self.k}"

    def label(self) -> str:
        sym = SYMBOLS[self.name]
        return sym if self.k == 0 else f"{sym}Δ^{3 * self.k}"

    def __str__(self):
        return self.label()

    def to_json(self) -> dict:
        return {"kind": "torsion", "name": self.label(), "s": self.s, "tTop": self.t_top}


def torsion_at(t_top: int) -> list:
    k, r = divmod(t_top, PERIOD_TOP)
    return [TorsionClass(name, k) for name, n, _ in TORSION_TABLE if n == r]


def torsion_at_internal(t: int) -> list:
    out = []
    k0 = t // PERIOD_INTERNAL
    for k in (k0 - 1, k0, k0 + 1):
        out += [TorsionClass(name, k) for name, _, _ in TORSION_TABLE if TorsionClass(name, k).degree == t]
    return sorted(out)


def basis_class(eps: int, m: int, v: int) -> ZeroLineClass:
    """``gamma_v C_v^m`` (eps = 0) or ``theta_v D_v^m`` (eps = 1)."""
    if v < 0:
        raise ValueError("v must be >= 0")
    ell = ell_max(eps, m) - v
    n = m - eps - 3 * ell
    return ZeroLineClass(n, eps, ell, gamma_factor(ell))


def sector_basis(eps: int, m: int, V: int) -> list:
    return [basis_class(eps, m, v) for v in range(V + 1)]


def _split_degree(t: int):
    if t % 2:
        return None
    if t % 4 == 2:
        return 1, (t - 2) // 4
    return 0, t // 4


def zero_line_basis(t: int, V: int) -> list:
    s = _split_degree(t)
    return [] if s is None else sector_basis(s[0], s[1], V)


def g_factor(t: int) -> LocalScalar:
    """The scalar 2^t - 1 by which g acts in internal degree t."""
    return LocalScalar(2**t - 1) if t >= 0 else LocalScalar(1 - 2**-t, 2**-t)


def g_map(x):
    """``(scalar, x)`` with g(x) = scalar * x; the scalar is 0 on torsion."""
    if isinstance(x, TorsionClass):
        return LocalScalar(0), x
    return g_factor(x.degree), x


def g_order(t: int) -> int:
    """Exponent k with coker g = Z/3^k on each 0-line class of degree t != 0."""
    return val3_int(t) + 1


def ker_coker_g(t: int, V: int):
    """``(ker g, coker g)`` in internal degree ``t`` on the window ``v <= V``."""
    zl = zero_line_basis(t, V)
    tors = torsion_at_internal(t)
    tors_mod = ModulePresentation(tuple(c.label() for c in tors), (1,) * len(tors))
    if t == 0:
        free = ModulePresentation(tuple(c.label() for c in zl), (FREE,) * len(zl))
        return free.direct_sum(tors_mod), free.direct_sum(tors_mod)
    k = g_order(t)
    coker = ModulePresentation(tuple(c.label() for c in zl), (k,) * len(zl))
    return tors_mod, coker.direct_sum(tors_mod)


@lru_cache(maxsize=None)
def _c4_pow(n: int) -> RingElement:
    return c4() ** n


@lru_cache(maxsize=None)
def _embed(n: int, eps: int, ell: int, gamma: int) -> RingElement:
    x = _c4_pow(n) * delta_pow(ell)
    if eps:
        x = x * c6()
    return x * gamma


def embed(x: ZeroLineClass) -> RingElement:
    """Image of a 0-line class in B."""
    return _embed(x.n, x.eps, x.ell, x.gamma)
