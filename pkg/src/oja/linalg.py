"""Exact linear algebra over the cyclotomic field and over the integers.

Gaussian elimination is generic in the coefficient field: it only needs
+, -, *, / and truthiness, so the same routine serves `CycScalar` matrices
(rank and solve steps inside the algebra computations) and `Fraction`
matrices (weight systems, exponent-matrix inverses).  The integer Smith
normal form is used to cross-check symmetry group orders.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, TypeVar

T = TypeVar("T")


def rref(matrix: list[list[T]]) -> tuple[list[list[T]], list[int]]:
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    mat = [list(row) for row in matrix]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if mat[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][c]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return mat, pivots


def rank(matrix: list[list[T]]) -> int:
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def solve_linear(matrix: list[list[T]], rhs: list[T], zero: T, one: T
                 ) -> tuple[list[T] | None, list[list[T]]]:
    """Solve A x = b exactly.

    Returns (particular solution or None, basis of the nullspace of A).
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    solution: list[T] | None
    if cols in pivots:
        solution = None  # inconsistent: pivot in the augmented column
    else:
        solution = [zero] * cols
        for r, c in enumerate(pivots):
            solution[c] = red[r][cols]
    null_basis: list[list[T]] = []
    red_a, pivots_a = rref(matrix) if rows else ([], [])
    free = [c for c in range(cols) if c not in pivots_a]
    for f in free:
        vec = [zero] * cols
        vec[f] = one
        for r, c in enumerate(pivots_a):
            vec[c] = zero - red_a[r][f]
        null_basis.append(vec)
    return solution, null_basis


def invert_rational(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix, or ValueError if singular."""
    n = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(n)]
           + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det_rational(matrix: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Determinant of a square rational matrix by fraction-free elimination."""
    n = len(matrix)
    mat = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if mat[i][c]), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            mat[c], mat[pivot_row] = mat[pivot_row], mat[c]
            det = -det
        det *= mat[c][c]
        inv = mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c]:
                factor = mat[i][c] / inv
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[c])]
    return det


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    Nonnegative invariant factors d_1 | d_2 | ... padded with zeros up to
    min(m, n).
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    t = 0
    while t < min(m, n):
        # locate a smallest-magnitude nonzero entry to pivot on
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        t += 1
    diag = [abs(a[i][i]) for i in range(min(m, n))]
    return diag
