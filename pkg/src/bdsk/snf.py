"""Exact integer matrices and Smith normal form.

All arithmetic uses Python integers, so there is no overflow.  The
reduction picks the smallest nonzero absolute value as pivot (ties broken
row-major), which makes the transforms ``U`` and ``V`` deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.entries
        )
        return IntegerMatrix(self.rows, other.cols, out)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def determinant(m: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    rank: int
    invariant_factors: tuple[int, ...]


def smith_normal_form(m: IntegerMatrix) -> SmithDecomposition:
    """Return ``U, D, V`` with ``D = U @ m @ V`` diagonal and ``d1 | d2 | ...``."""
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    rank = t
    return SmithDecomposition(
        IntegerMatrix.from_rows(u, rows),
        IntegerMatrix.from_rows(a, cols),
        IntegerMatrix.from_rows(v, cols),
        rank,
        tuple(a[i][i] for i in range(rank)),
    )


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by independent vectors.

    Used to present kernel bases canonically: the result spans the same
    lattice, is in echelon form with positive pivots, and entries above
    each pivot are reduced into ``[0, pivot)``.
    """
    rows = [list(r) for r in vectors]
    if not rows:
        return []
    width = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < width:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len([r for r in rows if r[col]]) > 1:
            live = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            p = live[0]
            for r in live[1:]:
                q = r[col] // p[col]
                for k in range(width):
                    r[k] -= q * p[k]
        p = next(r for r in rows if r[col])
        rows.remove(p)
        if p[col] < 0:
            p = [-x for x in p]
        for r in out:
            q = r[col] // p[col]
            if q:
                for k in range(width):
                    r[k] -= q * p[k]
        out.append(p)
        col += 1
    if any(any(r) for r in rows):
        raise ValueError("vectors are linearly dependent")
    return [tuple(r) for r in out]
