"""Tiny exact integer-matrix helpers (the matrices here are n x n with n <= 3 or so)."""

from __future__ import annotations

from itertools import permutations

IntMatrix = tuple[tuple[int, ...], ...]


def perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def det(rows) -> int:
    """Determinant by permutation expansion; exact, fine for small n."""
    rows = [tuple(r) for r in rows]
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    total = 0
    for perm in permutations(range(n)):
        prod = perm_sign(perm)
        for i in range(n):
            prod *= rows[i][perm[i]]
            if prod == 0:
                break
        total += prod
    return total


def det_cols(cols) -> int:
    """Determinant of the matrix whose columns are the given vectors."""
    cols = [tuple(c) for c in cols]
    n = len(cols)
    return det([tuple(cols[j][i] for j in range(n)) for i in range(n)])


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def matvec(a: IntMatrix, v) -> tuple[int, ...]:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_unipotent_upper(a: IntMatrix) -> bool:
    n = len(a)
    for i in range(n):
        if a[i][i] != 1:
            return False
        for j in range(i):
            if a[i][j] != 0:
                return False
    return True


def unipotent_inverse(a: IntMatrix) -> IntMatrix:
    """Integer inverse of an upper-triangular matrix with unit diagonal."""
    if not is_unipotent_upper(a):
        raise ValueError("matrix is not upper-triangular unipotent")
    n = len(a)
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # Back-substitution column by column: solve a @ x = e_j.
    for j in range(n):
        for i in range(n - 1, -1, -1):
            s = (1 if i == j else 0) - sum(a[i][k] * inv[k][j] for k in range(i + 1, n))
            inv[i][j] = s
    return tuple(tuple(row) for row in inv)
