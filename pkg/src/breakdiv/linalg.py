"""Exact rational matrix routines (determinant, solve, inverse)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from collections.abc import Sequence


Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def _check_square(m: Sequence[Sequence]) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination on an integer matrix."""
    n = _check_square(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix.

    Rows are scaled to integers, the integer determinant is computed
    fraction-free, and the scale is divided back out.  The empty matrix
    has determinant 1.
    """
    n = _check_square(m)
    if n == 0:
        return Fraction(1)
    rows = as_matrix(m)
    scale = Fraction(1)
    ints = []
    for row in rows:
        d = lcm(*(x.denominator for x in row))
        ints.append([int(x * d) for x in row])
        scale *= d
    return Fraction(bareiss_det(ints)) / scale


def solve(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``m x = b`` for nonsingular square ``m`` by Gauss-Jordan."""
    n = _check_square(m)
    a = [row + [Fraction(rhs)] for row, rhs in zip(as_matrix(m), b)]
    if len(a) != n:
        raise ValueError("right-hand side has wrong length")
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = _check_square(m)
    cols = [solve(m, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def rank(rows: Sequence[Sequence]) -> int:
    """Row rank over the rationals."""
    a = as_matrix(rows)
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r
