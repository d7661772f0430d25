"""Dense Gaussian elimination over ℚ."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not len(rows[0]):
        return 0
    return len(row_echelon(rows)[1])


def transpose(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def column_rank(cols: Sequence[Sequence[Fraction]]) -> int:
    """Rank of the matrix whose columns are given."""
    cols = [c for c in cols if len(c)]
    if not cols:
        return 0
    return rank(cols)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of {v : rows · v = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = row_echelon(rows)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        out.append(v)
    return out


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of rows · v = rhs, or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, piv = row_echelon(aug)
    if ncols in piv:
        return None
    v = [Fraction(0)] * ncols
    for r, p in enumerate(piv):
        v[p] = red[r][ncols]
    return v
