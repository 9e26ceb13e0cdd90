"""Exact arithmetic in the 3-local integers Z_(3).

A :class:`LocalScalar` is a reduced fraction ``num/den`` whose denominator is
prime to 3.  Division is only defined by units, so every value stays inside
the ring.  Valuations are plain ints, with ``INF`` for zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, inf
from numbers import Rational

INF = inf
P = 3


def val3_int(n: int) -> float | int:
    """3-adic valuation of an integer (``INF`` for zero)."""
    if n == 0:
        return INF
    n = abs(n)
    k = 0
    # strip 3^4 at a time first; big powers of 3 are common in pivots
    while n % 81 == 0:
        n //= 81
        k += 4
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


def split3(n: int) -> tuple[int, int]:
    """Return ``(k, u)`` with ``n = 3**k * u`` and ``3 ∤ u``.  ``n`` must be nonzero."""
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k, n


class LocalScalar:
    __slots__ = ("num", "den")

    def __init__(self, num: int = 0, den: int = 1, *, _reduced: bool = False):
        if not _reduced:
            if isinstance(num, Rational) and not isinstance(num, int):
                num, den = num.numerator * 1, num.denominator * den
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num, den = -num, -den
            g = gcd(num, den)
            if g != 1:
                num //= g
                den //= g
            if den % 3 == 0:
                raise ValueError(f"{num}/{den} is not 3-local")
            if num == 0:
                den = 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("LocalScalar is immutable")

    @classmethod
    def coerce(cls, x) -> "LocalScalar":
        if isinstance(x, LocalScalar):
            return x
        if isinstance(x, int):
            return cls(x, 1, _reduced=True)
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to LocalScalar")

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            o = LocalScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == 1 and o.den == 1:
            return LocalScalar(self.num + o.num, 1, _reduced=True)
        return LocalScalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LocalScalar(-self.num, self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = LocalScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = LocalScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == 1 and o.den == 1:
            return LocalScalar(self.num * o.num, 1, _reduced=True)
        return LocalScalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = LocalScalar.coerce(other)
        if o.num == 0:
            raise ZeroDivisionError("division by zero in Z_(3)")
        if o.num % 3 == 0:
            raise ValueError(f"{o} is not a unit of Z_(3)")
        return LocalScalar(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return LocalScalar.coerce(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return LocalScalar(self.num**n, self.den**n, _reduced=True)
        return LocalScalar(1) / LocalScalar(self.num**-n, self.den**-n, _reduced=True)

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LocalScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == 1 and self.num == other
        if isinstance(other, Fraction):
            return self.num == other.numerator and self.den == other.denominator
        return NotImplemented

    def __hash__(self):
        if self.den == 1:
            return hash(self.num)
        return hash(Fraction(self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __repr__(self):
        return f"LocalScalar({self.num}, {self.den})" if self.den != 1 else f"LocalScalar({self.num})"

    def __str__(self):
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_unit(self) -> bool:
        return self.num % 3 != 0


ZERO = LocalScalar(0, 1, _reduced=True)
ONE = LocalScalar(1, 1, _reduced=True)


def val3(x) -> float | int:
    """3-adic valuation; the denominator of a 3-local scalar contributes nothing."""
    x = LocalScalar.coerce(x)
    return val3_int(x.num)


def unit_part(x) -> LocalScalar:
    x = LocalScalar.coerce(x)
    if x.num == 0:
        raise ValueError("unit part of zero is undefined")
    _, u = split3(x.num)
    return LocalScalar(u, x.den, _reduced=True)


def reduce_mod(x, k: int) -> int:
    """Image of ``x`` in Z/3^k, as an integer in ``[0, 3^k)``.  ``k = 0`` gives the zero ring."""
    if k < 0:
        raise ValueError("k must be non-negative")
    x = LocalScalar.coerce(x)
    if k == 0:
        return 0
    mod = P**k
    return x.num * pow(x.den, -1, mod) % mod
