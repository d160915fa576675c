"""Small exact linear algebra over Fraction (or eps-series) entries."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import Scalar

Matrix = list[list[Scalar]]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) if isinstance(x, (int, str)) else x for x in row]
            for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    assert all(len(r) == k for r in a), "shape mismatch"
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s: Scalar = 0
            for t in range(k):
                s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def matvec(a: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    return [sum((a[i][t] * v[t] for t in range(len(v))), start=Fraction(0))
            for i in range(len(a))]


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError on singular input."""
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = 1 / aug[col][col] if not hasattr(aug[col][col], "inverse") \
            else aug[col][col].inverse()
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: Scalar, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]
