"""Sparse matrices over Q and the exact operations homology needs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ..errors import UsageError
from ._kernels import integer_rank

NOT_IN_IMAGE = None


@dataclass
class SparseMatrixQ:
    nrows: int
    ncols: int
    entries: dict = field(default_factory=dict)
    col_labels: list | None = None

    def __post_init__(self):
        self.entries = {ij: Fraction(v) for ij, v in self.entries.items() if v}
        if self.col_labels is not None and len(set(map(repr, self.col_labels))) != len(self.col_labels):
            raise UsageError("column labels must be unique")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrixQ":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        return cls(nrows, ncols, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[dict], labels=None) -> "SparseMatrixQ":
        entries = {(i, j): v for j, col in enumerate(columns) for i, v in col.items() if v}
        return cls(nrows, len(columns), entries, labels)

    def dense(self) -> list:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def integer_rows(self) -> list:
        """Rows scaled by the lcm of their denominators; same row space."""
        rows = self.dense()
        out = []
        for row in rows:
            den = 1
            for v in row:
                den = lcm(den, v.denominator)
            out.append([int(v * den) for v in row])
        return out

    def matvec(self, v: Sequence) -> list:
        out = [Fraction(0)] * self.nrows
        for (i, j), a in self.entries.items():
            out[i] += a * v[j]
        return out


def rank(M: SparseMatrixQ, backend: str | None = None) -> int:
    if not M.entries:
        return 0
    return integer_rank(M.integer_rows(), backend)


def _echelon(rows: list, ncols: int):
    """Fraction-free echelon form in place; returns pivot columns."""
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p, best = -1, 0
        for i in range(r, nrows):
            v = abs(rows[i][c])
            if v > best:
                p, best = i, v
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(nrows):
            if i == r or not rows[i][c]:
                continue
            f = rows[i][c]
            row = rows[i]
            g = 0
            for j in range(len(row)):
                row[j] = piv * row[j] - f * rows[r][j]
                g = gcd(g, row[j])
            if g > 1:
                rows[i] = [v // g for v in row]
        pivots.append(c)
        r += 1
    return pivots


def kernel_basis(M: SparseMatrixQ) -> list:
    """Basis of {v : M v = 0} as lists of Fractions."""
    rows = M.integer_rows()
    pivots = _echelon(rows, M.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * M.ncols
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = Fraction(-rows[r][free], rows[r][c])
        basis.append(v)
    return basis


def solve_in_image(M: SparseMatrixQ, b: Sequence):
    """x with M x = b exactly, or NOT_IN_IMAGE (None) if b is outside the column space."""
    if len(b) != M.nrows:
        raise UsageError(f"right-hand side has length {len(b)}, matrix has {M.nrows} rows")
    dense = M.dense()
    rows = []
    for row, bi in zip(dense, b):
        full = list(row) + [Fraction(bi)]
        den = 1
        for v in full:
            den = lcm(den, v.denominator)
        rows.append([int(v * den) for v in full])
    pivots = _echelon(rows, M.ncols + 1)
    if pivots and pivots[-1] == M.ncols:
        return NOT_IN_IMAGE
    x = [Fraction(0)] * M.ncols
    for r, c in enumerate(pivots):
        x[c] = Fraction(rows[r][M.ncols], rows[r][c])
    return x
