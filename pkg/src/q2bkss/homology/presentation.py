"""Module presentations and labeled sparse matrices over Z_(3)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import lcm

from ..arith import LocalScalar, ONE, ZERO

FREE = None  # order marker for a free summand


@dataclass(frozen=True)
class ModulePresentation:
    """Direct sum of cyclic Z_(3)-modules.

    ``orders[i]`` is ``None`` for a free summand, otherwise the exponent ``k``
    of the summand Z/3^k (k >= 1).  ``relations`` carries extra relations as
    human-readable strings; they are only set when a module is deliberately
    left unsplit.
    """

    generators: tuple = ()
    orders: tuple = ()
    relations: tuple = ()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if len(self.generators) != len(self.orders):
            raise ValueError("generators and orders differ in length")
        for k in self.orders:
            if k is not None and k < 1:
                raise ValueError("torsion exponents must be >= 1")

    @classmethod
    def from_invariants(cls, free_rank: int, exponents, prefix: str = "g") -> "ModulePresentation":
        exps = sorted(e for e in exponents if e > 0)
        orders = [FREE] * free_rank + exps
        gens = [f"{prefix}{i}" for i in range(len(orders))]
        return cls(tuple(gens), tuple(orders))

    @classmethod
    def zero(cls) -> "ModulePresentation":
        return cls()

    @property
    def free_rank(self) -> int:
        return sum(1 for k in self.orders if k is None)

    @property
    def torsion_exponents(self) -> tuple:
        return tuple(sorted(k for k in self.orders if k is not None))

    def invariants(self) -> tuple:
        return (self.free_rank, self.torsion_exponents)

    def iso_equal(self, other: "ModulePresentation") -> bool:
        return self.invariants() == other.invariants()

    def is_zero(self) -> bool:
        return not self.orders

    def log3_order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite module")
        return sum(self.orders)

    def direct_sum(self, *others: "ModulePresentation") -> "ModulePresentation":
        gens, orders, rels = list(self.generators), list(self.orders), list(self.relations)
        for o in others:
            gens += o.generators
            orders += o.orders
            rels += o.relations
        return ModulePresentation(tuple(gens), tuple(orders), tuple(rels))

    def contains_iso(self, other: "ModulePresentation") -> bool:
        """True when ``other``'s invariants form a sub-multiset of ours."""
        if other.free_rank > self.free_rank:
            return False
        mine = Counter(self.torsion_exponents)
        theirs = Counter(other.torsion_exponents)
        return all(mine[k] >= n for k, n in theirs.items())

    def minus_iso(self, other: "ModulePresentation") -> "ModulePresentation":
        if not self.contains_iso(other):
            raise ValueError("not a sub-multiset")
        left = Counter(self.torsion_exponents)
        left.subtract(Counter(other.torsion_exponents))
        return ModulePresentation.from_invariants(
            self.free_rank - other.free_rank, list(left.elements())
        )

    def summary(self) -> str:
        parts = list(self.meta.get("placeholders", ()))
        if self.is_zero() and not parts:
            return "0"
        if self.free_rank:
            parts.append("Z_(3)" if self.free_rank == 1 else f"Z_(3)^{self.free_rank}")
        for k, n in sorted(Counter(self.torsion_exponents).items()):
            cyc = f"Z/{3**k}"
            parts.append(cyc if n == 1 else f"({cyc})^{n}")
        s = " + ".join(parts)
        if self.relations:
            s += " / ~"
        return s

    def to_json(self) -> dict:
        return {
            "summands": [
                {"order": "free" if k is None else 3**k, "label": str(g)}
                for g, k in zip(self.generators, self.orders)
            ]
            + [{"order": "placeholder", "label": p} for p in self.meta.get("placeholders", ())],
            "relations": list(self.relations),
        }


class LabeledMatrix:
    """Sparse matrix over Z_(3) with row and column labels.  No stored zeros."""

    __slots__ = ("row_labels", "col_labels", "entries", "_row_index", "_col_index")

    def __init__(self, row_labels, col_labels, entries=None):
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        self._row_index = {lab: i for i, lab in enumerate(self.row_labels)}
        self._col_index = {lab: i for i, lab in enumerate(self.col_labels)}
        self.entries = {}
        for (r, c), x in (entries or {}).items():
            x = LocalScalar.coerce(x)
            if x:
                self.entries[(r, c)] = x

    @property
    def shape(self) -> tuple:
        return len(self.row_labels), len(self.col_labels)

    def row_of(self, label) -> int:
        return self._row_index[label]

    def col_of(self, label) -> int:
        return self._col_index[label]

    @classmethod
    def from_columns(cls, row_labels, col_labels, columns) -> "LabeledMatrix":
        """``columns[j]`` maps row labels to scalars."""
        row_labels = tuple(row_labels)
        index = {lab: i for i, lab in enumerate(row_labels)}
        entries = {}
        for j, col in enumerate(columns):
            for lab, x in col.items():
                if lab not in index:
                    raise KeyError(f"row label {lab!r} outside the row window")
                entries[(index[lab], j)] = x
        return cls(row_labels, col_labels, entries)

    def column(self, j: int) -> dict:
        return {r: x for (r, c), x in self.entries.items() if c == j}

    def columns_dense(self) -> list:
        nr, nc = self.shape
        cols = [[ZERO] * nr for _ in range(nc)]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def integer_rows(self) -> list:
        """Rows as ``{col: int}`` after scaling each column by its (unit) denominator lcm."""
        nr, nc = self.shape
        dens = [1] * nc
        for (r, c), x in self.entries.items():
            if x.den != 1:
                dens[c] = lcm(dens[c], x.den)
        rows = [dict() for _ in range(nr)]
        for (r, c), x in self.entries.items():
            rows[r][c] = x.num * (dens[c] // x.den)
        return rows

    def integer_columns(self) -> list:
        nr, nc = self.shape
        rows = self.integer_rows()
        cols = [[0] * nr for _ in range(nc)]
        for r, row in enumerate(rows):
            for c, x in row.items():
                cols[c][r] = x
        return cols

    def matmul(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        by_row = {}
        for (k, c), y in other.entries.items():
            by_row.setdefault(k, []).append((c, y))
        out = {}
        for (r, k), x in self.entries.items():
            for c, y in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), ZERO) + x * y
        return LabeledMatrix(self.row_labels, other.col_labels, out)

    def hstack(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if self.shape[0] != other.shape[0]:
            raise ValueError("row mismatch")
        off = self.shape[1]
        entries = dict(self.entries)
        for (r, c), x in other.entries.items():
            entries[(r, c + off)] = x
        return LabeledMatrix(self.row_labels, self.col_labels + other.col_labels, entries)

    def to_json(self) -> dict:
        return {
            "rows": [str(r) for r in self.row_labels],
            "cols": [str(c) for c in self.col_labels],
            "entries": [
                {"row": r, "col": c, "num": str(x.num), "den": str(x.den)}
                for (r, c), x in sorted(self.entries.items())
            ],
        }


def diagonal(labels, exponents) -> LabeledMatrix:
    """Relation matrix diag(3^k) for the finite orders in ``exponents``."""
    cols, entries = [], {}
    for i, (lab, k) in enumerate(zip(labels, exponents)):
        if k is not None:
            entries[(i, len(cols))] = LocalScalar(3**k)
            cols.append(("rel", lab))
    return LabeledMatrix(labels, cols, entries)


@dataclass
class ThreeTermComplex:
    """``M0 --d1--> M1 --d2--> M2`` with module orders on each basis."""

    m0: ModulePresentation
    m1: ModulePresentation
    m2: ModulePresentation
    d1: LabeledMatrix
    d2: LabeledMatrix

    def __post_init__(self):
        if self.d1.shape != (len(self.m1.orders), len(self.m0.orders)):
            raise ValueError("d1 shape does not match M0 -> M1")
        if self.d2.shape != (len(self.m2.orders), len(self.m1.orders)):
            raise ValueError("d2 shape does not match M1 -> M2")


__all__ = [
    "FREE",
    "LabeledMatrix",
    "ModulePresentation",
    "ThreeTermComplex",
    "diagonal",
    "ONE",
]
