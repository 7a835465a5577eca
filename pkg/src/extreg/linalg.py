"""Exact dense linear algebra over a runtime-selected field.

Straight Gaussian elimination on row-major lists of raw field values.
Pivoting is deterministic (first nonzero entry scanning top-to-bottom,
left-to-right), so the reduced row echelon form, pivot columns, kernel
bases and every downstream artifact are reproducible bit for bit.  No
floating point, no tolerances: a kernel vector multiplied back into the
matrix gives exact zeros.

Matrices with zero rows or zero columns are legal everywhere (rank 0,
full kernel).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

from .fields import FieldSpec


@dataclass
class Matrix:
    """Row-major grid of raw field values; all entries share one field."""

    field: FieldSpec
    n_rows: int
    n_cols: int
    rows: list = dc_field(default_factory=list)

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        for row in self.rows:
            if len(row) != self.n_cols:
                raise ValueError("column count mismatch")

    @classmethod
    def from_rows(cls, field, rows) -> "Matrix":
        rows = [[field.coerce(x) for x in row] for row in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(field, n_rows, n_cols, rows)

    @classmethod
    def from_columns(cls, field, columns, n_rows=None) -> "Matrix":
        if n_rows is None:
            if not columns:
                raise ValueError("need n_rows for an empty column list")
            n_rows = len(columns[0])
        rows = [[col[r] for col in columns] for r in range(n_rows)]
        return cls(field, n_rows, len(columns), rows)

    @classmethod
    def zero(cls, field, n_rows, n_cols) -> "Matrix":
        z = field.zero()
        return cls(field, n_rows, n_cols, [[z] * n_cols for _ in range(n_rows)])

    @classmethod
    def identity(cls, field, n) -> "Matrix":
        z, o = field.zero(), field.one()
        rows = [[o if i == j else z for j in range(n)] for i in range(n)]
        return cls(field, n, n, rows)

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.n_cols)]

    def transpose(self) -> "Matrix":
        rows = [[self.rows[r][c] for r in range(self.n_rows)]
                for c in range(self.n_cols)]
        return Matrix(self.field, self.n_cols, self.n_rows, rows)

    def mat_vec(self, vec) -> list:
        if len(vec) != self.n_cols:
            raise ValueError("vector length must equal n_cols")
        f = self.field
        out = []
        for row in self.rows:
            acc = f.zero()
            for a, x in zip(row, vec):
                if a and x:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def __eq__(self, other):
        return (isinstance(other, Matrix)
                and self.field == other.field
                and self.n_rows == other.n_rows
                and self.n_cols == other.n_cols
                and self.rows == other.rows)


class RrefResult(NamedTuple):
    r: Matrix
    pivot_cols: tuple
    rank: int


def rref(m: Matrix) -> RrefResult:
    """Unique reduced row echelon form, pivot columns, and rank."""
    f = m.field
    rows = [list(row) for row in m.rows]
    n_rows, n_cols = m.n_rows, m.n_cols
    pivot_cols = []
    pr = 0
    for pc in range(n_cols):
        pivot = None
        for r in range(pr, n_rows):
            if rows[r][pc]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        pv = rows[pr][pc]
        if pv != f.one():
            inv = f.inv(pv)
            rows[pr] = [f.mul(inv, x) for x in rows[pr]]
        prow = rows[pr]
        for r in range(n_rows):
            if r != pr and rows[r][pc]:
                c = rows[r][pc]
                row = rows[r]
                rows[r] = [f.sub(a, f.mul(c, b)) if b else a
                           for a, b in zip(row, prow)]
        pivot_cols.append(pc)
        pr += 1
        if pr == n_rows:
            break
    reduced = Matrix(f, n_rows, n_cols, rows)
    return RrefResult(reduced, tuple(pivot_cols), len(pivot_cols))


def rank(m: Matrix) -> int:
    return rref(m).rank


def kernel_basis(m: Matrix) -> list:
    """Basis of the right kernel in textbook back-substitution form.

    One vector per free column, ordered by free column index; the free
    coordinate is 1 and the pivot coordinates are read off the reduced
    echelon form.  Exact: m.mat_vec(v) is identically zero for each v.
    """
    f = m.field
    reduced, pivot_cols, _ = rref(m)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        vec = [f.zero()] * m.n_cols
        vec[free] = f.one()
        for i, pc in enumerate(pivot_cols):
            entry = reduced.rows[i][free]
            if entry:
                vec[pc] = f.neg(entry)
        basis.append(vec)
    return basis


def in_span(m: Matrix, vec) -> bool:
    """Whether vec lies in the column space of m."""
    if len(vec) != m.n_rows:
        raise ValueError("vector length must equal n_rows")
    builder = SpanBuilder(m.field, m.n_rows)
    for col in m.columns():
        builder.insert(col)
    return builder.contains(vec)


class SpanBuilder:
    """Incremental row-space tracker for rank and membership queries.

    Vectors are inserted one at a time and reduced against the stored
    echelon rows (each normalized to a leading 1 at a unique pivot
    position).  Insertion order is the only source of ordering, so
    repeated runs over the same stream are identical.
    """

    def __init__(self, field: FieldSpec, length: int):
        self.field = field
        self.length = length
        self.pivot_rows = {}  # leading index -> normalized row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _reduce(self, vec):
        f = self.field
        vec = list(vec)
        while True:
            lead = next((i for i, x in enumerate(vec) if x), None)
            if lead is None or lead not in self.pivot_rows:
                return lead, vec
            c = vec[lead]
            row = self.pivot_rows[lead]
            vec = [f.sub(a, f.mul(c, b)) if b else a
                   for a, b in zip(vec, row)]

    def insert(self, vec) -> bool:
        """Add a vector; True if it enlarged the span."""
        if len(vec) != self.length:
            raise ValueError("vector length mismatch")
        f = self.field
        lead, vec = self._reduce(vec)
        if lead is None:
            return False
        pv = vec[lead]
        if pv != f.one():
            inv = f.inv(pv)
            vec = [f.mul(inv, x) for x in vec]
        self.pivot_rows[lead] = vec
        return True

    def contains(self, vec) -> bool:
        if len(vec) != self.length:
            raise ValueError("vector length mismatch")
        lead, _ = self._reduce(vec)
        return lead is None
