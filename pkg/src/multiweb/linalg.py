"""Small exact linear algebra over the rationals.

Matrices are immutable tuples of tuples of ``Fraction``.  Everything here is
sized for the matrices this package actually meets (a few dozen rows at most),
so plain Gaussian elimination with exact pivoting is both fast enough and
free of rounding questions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Mat = tuple[tuple[Fraction, ...], ...]
Vec = tuple[Fraction, ...]


class SingularMatrixError(ValueError):
    pass


def mat(rows: Iterable[Iterable]) -> Mat:
    """Normalize nested iterables of numbers to a Fraction matrix."""
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(x) for x in entries)


def shape(a: Mat) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def identity(n: int) -> Mat:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    zero = Fraction(0)
    return tuple(tuple(zero for _ in range(c)) for _ in range(r))


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Mat, s) -> Mat:
    s = Fraction(s)
    return tuple(tuple(s * x for x in row) for row in a)


def mat_mul(a: Mat, b: Mat) -> Mat:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Mat, v: Sequence) -> Vec:
    v = vec(v)
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def submatrix(a: Mat, rows: Sequence[int], cols: Sequence[int]) -> Mat:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def det(a: Mat) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of non-square matrix")
    rows = [list(r) for r in a]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        pv = rows[col][col]
        result *= pv
        for r in range(col + 1, n):
            f = rows[r][col] / pv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return sign * result


def minor_det(a: Mat, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    return det(submatrix(a, rows, cols))


def solve(a: Mat, b: Sequence) -> Vec:
    """Solve a x = b exactly; raises SingularMatrixError if a is singular."""
    n, m = shape(a)
    if n != m:
        raise ValueError("solve requires a square system")
    aug = [list(row) + [Fraction(x)] for row, x in zip(a, vec(b))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularMatrixError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def inverse(a: Mat) -> Mat:
    n, m = shape(a)
    if n != m:
        raise ValueError("inverse of non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularMatrixError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(aug[r][n:]) for r in range(n))


def adjugate(a: Mat) -> Mat:
    """Classical adjugate (works for singular matrices too)."""
    n, m = shape(a)
    if n != m:
        raise ValueError("adjugate of non-square matrix")
    if n == 0:
        return ()
    if n == 1:
        return ((Fraction(1),),)
    if n == 2:
        (p, q), (r, s) = a
        return ((s, -q), (-r, p))
    cof = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            cof[i][j] = (-1) ** (i + j) * det(submatrix(a, rows, cols))
    return transpose(tuple(tuple(row) for row in cof))


def rank(a: Mat) -> int:
    n, m = shape(a)
    rows = [list(r) for r in a]
    rk = 0
    for col in range(m):
        pivot = next((r for r in range(rk, n) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        pv = rows[rk][col]
        for r in range(rk + 1, n):
            if rows[r][col]:
                f = rows[r][col] / pv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
        if rk == n:
            break
    return rk


def maximal_minors(a: Mat) -> dict[tuple[int, ...], Fraction]:
    """All k x k minors of a k x n matrix, keyed by 1-based column subsets."""
    k, n = shape(a)
    if k > n:
        raise ValueError("expected a wide matrix")
    out = {}
    for cols in combinations(range(n), k):
        out[tuple(c + 1 for c in cols)] = det(submatrix(a, range(k), cols))
    return out
