"""Dense Gaussian elimination over a FieldSpec.

Matrices are lists of lists of encoded field elements. Pivoting always takes
the first nonzero entry in the column, so results are deterministic.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidParameters, SingularMatrix
from .field import VECTOR_TABLE_CAP, FieldSpec

Matrix = list[list[int]]


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in M]


def rref(f: FieldSpec, M: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = _copy(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = f.inv(A[r][c])
        A[r] = [f.mul(inv, x) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                factor = A[i][c]
                A[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rref_array(f: FieldSpec, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """rref with whole-row numpy updates; same pivoting rule as ``rref``."""
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        A[[r, piv]] = A[[piv, r]]
        A[r] = f.vmul(A[r], f.inv(int(A[r, c])))
        factor = A[:, c].copy()
        factor[r] = 0
        A = f.vsub(A, f.vmul(factor[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(f: FieldSpec, M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 0
    return len(rref(f, M)[1])


def det(f: FieldSpec, M: Sequence[Sequence[int]]) -> int:
    """Determinant by forward elimination."""
    A = _copy(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise InvalidParameters("determinant needs a square matrix")
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            result = f.neg(result)
        result = f.mul(result, A[c][c])
        inv = f.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                factor = f.mul(A[i][c], inv)
                A[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(A[i], A[c])]
    return result


def solve_linear(f: FieldSpec, M: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Return x with M x = b for square invertible M."""
    k = len(M)
    if any(len(row) != k for row in M) or len(b) != k:
        raise InvalidParameters("solve_linear needs a square system")
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    R, pivots = rref(f, aug)
    if pivots[:k] != list(range(k)):
        raise SingularMatrix(f"matrix has rank < {k}")
    x = [R[i][k] for i in range(k)]
    assert all(f.dot(row, x) == bi for row, bi in zip(M, b))
    return x


def inverse(f: FieldSpec, M: Sequence[Sequence[int]]) -> Matrix:
    k = len(M)
    aug = [list(row) + [int(i == j) for j in range(k)] for i, row in enumerate(M)]
    R, pivots = rref(f, aug)
    if pivots[:k] != list(range(k)):
        raise SingularMatrix(f"matrix has rank < {k}")
    return [row[k:] for row in R]


def matvec(f: FieldSpec, M: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [f.dot(row, v) for row in M]


def nullspace_vector(f: FieldSpec, M: Sequence[Sequence[int]], ncols: int) -> list[int] | None:
    """Kernel vector attached to the first free column of rref(M), or None.

    The free coordinate is set to 1 and the other free coordinates to 0.
    """
    if not M:
        return [1] + [0] * (ncols - 1) if ncols else None
    if f.q <= VECTOR_TABLE_CAP:
        R, pivots = rref_array(f, np.asarray(M, dtype=np.int64))
        R = R.tolist()
    else:
        R, pivots = rref(f, M)
    free = next((c for c in range(ncols) if c not in pivots), None)
    if free is None:
        return None
    v = [0] * ncols
    v[free] = 1
    for row, pc in zip(R, pivots):
        v[pc] = f.neg(row[free])
    return v
