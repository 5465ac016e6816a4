"""Small exact linear algebra over the scalar fields (fraction-free friendly).

Only the little that the package needs: Gaussian elimination for solving and
null spaces, determinants, and matrix inversion for the unimodular changes of
variables in the residue module.  Matrices are lists of lists of exact
scalars.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import inv, is_zero, normalize


def _row_echelon(rows, ncols):
    """In-place forward elimination; returns list of pivot column indices."""
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for k in range(r, len(rows)):
            if not is_zero(rows[k][c]):
                pivot = k
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = inv(rows[r][c])
        rows[r] = [normalize(x * pv) for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not is_zero(rows[k][c]):
                f = rows[k][c]
                rows[k] = [normalize(a - f * b) for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve(matrix, rhs):
    """Solve M x = rhs exactly.

    Returns (solution, free_count) where solution has zeros in the free
    columns, or raises ValueError when inconsistent.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots = _row_echelon(rows, n)
    for row in rows[len(pivots):]:
        if not is_zero(row[-1]):
            raise ValueError("inconsistent linear system")
    x = [0] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][-1]
    return x, n - len(pivots)


def null_space_dim(matrix):
    m = len(matrix)
    if m == 0:
        return 0
    n = len(matrix[0])
    rows = [list(row) for row in matrix]
    pivots = _row_echelon(rows, n)
    return n - len(pivots)


def det(matrix):
    n = len(matrix)
    rows = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        pivot = None
        for k in range(c, n):
            if rows[k][c] != 0:
                pivot = k
                break
        if pivot is None:
            return 0
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        d *= rows[c][c]
        pv = rows[c][c]
        for k in range(c + 1, n):
            if rows[k][c] != 0:
                f = rows[k][c] / pv
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[c])]
    return normalize(sign * d)


def invert_matrix(matrix):
    """Exact inverse of a nonsingular square matrix over Q."""
    n = len(matrix)
    rows = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    pivots = _row_echelon(rows, n)
    if len(pivots) != n:
        raise ValueError("singular matrix")
    return [[normalize(rows[i][n + j]) for j in range(n)] for i in range(n)]
