"""Exact linear algebra over Q.

``solve`` uses fraction-free (Bareiss) elimination on an integer-scaled
copy of the augmented matrix and back-substitutes with Fractions.
``rref_transform`` is plain Gauss-Jordan and also returns the row
transform, so callers can push a right-hand side of any ring type through
the same row operations.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[list[int]]:
    rows = []
    for row, rhs in zip(A, b):
        vals = [Fraction(v) for v in row] + [Fraction(rhs)]
        den = lcm(*(v.denominator for v in vals)) if vals else 1
        rows.append([int(v * den) for v in vals])
    return rows


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int | None = None) -> list[Fraction] | None:
    """Particular solution of ``A x = b`` or ``None`` when inconsistent.

    Pivots are taken left to right; free variables are set to zero, so
    the column order decides which unknowns are preferred.
    """
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [Fraction(0)] * n
    M = _integer_rows(A, b)
    m = len(M)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, m):
            mic = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, n + 1):
                num = piv * row_i[j] - mic * row_r[j]
                # Bareiss: exact by Sylvester's identity
                row_i[j] = num // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n]:
            return None
    x = [Fraction(0)] * n
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        s = Fraction(M[i][n])
        for j in range(c + 1, n):
            if M[i][j]:
                s -= M[i][j] * x[j]
        x[c] = s / M[i][c]
    return x


def rref_transform(A: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[list[Fraction]], list[int]]:
    """Reduced row echelon form ``R = T A`` with transform ``T``.

    Returns ``(R, T, pivot_columns)``; rows of ``R`` past ``len(pivots)``
    are zero.
    """
    m = len(A)
    R = [[Fraction(v) for v in row] for row in A]
    T = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        T[r], T[p] = T[p], T[r]
        inv = 1 / R[r][c]
        R[r] = [v * inv for v in R[r]]
        T[r] = [v * inv for v in T[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, T, pivots
