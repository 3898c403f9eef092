"""Exact linear algebra: dense inverses and sparse fraction-free nullspaces."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from .exactq import GenericityError


def mat_inverse(a) -> list[list[Fraction]]:
    """Inverse of a dense square matrix by Gauss-Jordan over the rationals."""
    n = len(a)
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if work[i][col]), None)
        if pivot is None:
            raise GenericityError(f"singular matrix (column {col})")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                f = work[i][col]
                row = work[col]
                work[i] = [x - f * y for x, y in zip(work[i], row)]
    return [row[n:] for row in work]


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    out = {k: int(v * den) for k, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def echelon(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, dict[int, int]]:
    """Reduce sparse rows to echelon form without fractions.

    Each row is a mapping ``column -> coefficient``. Rows are scaled to
    primitive integer vectors; elimination uses ``r <- a*r - b*s`` followed by
    content removal, so no rational arithmetic occurs. Returns the pivot rows
    keyed by pivot column.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _integer_row(raw)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                if row[col] < 0:
                    row = {k: -v for k, v in row.items()}
                pivots[col] = row
                break
            a, b = piv[col], row[col]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new)
    return pivots


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}`` over the rationals.

    Basis vectors are returned in reduced form: each has a 1 at one free
    column and 0 at the other free columns.
    """
    pivots = echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    order = sorted(pivots, reverse=True)
    basis = []
    for f in free:
        x = {f: Fraction(1)}
        for col in order:
            row = pivots[col]
            s = sum((v * x[k] for k, v in row.items() if k != col and k in x), Fraction(0))
            if s:
                x[col] = -s / row[col]
        basis.append([x.get(c, Fraction(0)) for c in range(ncols)])
    return basis


def rank(rows: Iterable[Mapping[int, Fraction]]) -> int:
    return len(echelon(rows))


def dense_rows(matrix) -> list[dict[int, Fraction]]:
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]
