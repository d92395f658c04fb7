"""Small dense linear algebra over the rationals (row-vector convention)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def to_matrix(rows: Sequence[Sequence[int | Fraction]]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def vec_mat(v: Sequence[Fraction], a: Sequence[Sequence[Fraction]]) -> Vector:
    n = len(a[0]) if a else 0
    out = [Fraction(0)] * n
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(out)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(vec_mat(row, b) for row in a)


def mat_pow(a: Sequence[Sequence[Fraction]], k: int) -> Matrix:
    result = identity(len(a))
    base = to_matrix(a)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form without zero rows, plus pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def coordinates(basis: Matrix, pivots: Sequence[int], v: Sequence[Fraction]) -> Vector | None:
    """Coordinates of ``v`` in an RREF basis, or None if ``v`` is outside its span."""
    coords = tuple(Fraction(v[p]) for p in pivots)
    if vec_mat(coords, basis) != tuple(Fraction(x) for x in v):
        return None
    return coords


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def charpoly(a: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Coefficients of ``det(tI - A)``, highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    am = to_matrix(a)
    coeffs = [Fraction(1)]
    mk = identity(n)
    for k in range(1, n + 1):
        amk = mat_mul(am, mk)
        c = -sum((amk[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
        mk = tuple(
            tuple(amk[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
        )
    return tuple(coeffs)


def format_matrix(a: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[str(x) for x in row] for row in a]
