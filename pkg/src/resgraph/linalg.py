"""Exact integer linear algebra.

Matrices are plain ``list[list[int]]`` (row major). Nothing in here touches
floating point; rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .errors import SingularMatrix

IntegerMatrix = List[List[int]]


def _check_square(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    The 0x0 matrix has determinant 1.

    >>> det([[-2]])
    -2
    >>> det([])
    1
    """
    n = _check_square(m)
    if n == 0:
        return 1
    if n == 1:
        return int(m[0][0])
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_principal_minors(m: Sequence[Sequence[int]]) -> List[int]:
    """Determinants of the leading k x k blocks, k = 1..n.

    Computed in one Bareiss pass without pivoting; stops (returning a
    shorter list ending in 0) as soon as a leading minor vanishes.
    """
    n = _check_square(m)
    a = [[int(x) for x in row] for row in m]
    minors: List[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def is_negative_definite(m: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion: leading minors alternate in sign, starting negative."""
    n = _check_square(m)
    minors = leading_principal_minors(m)
    if len(minors) < n:
        return False
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(minors))


def solve_exact(a: Sequence[Sequence[int]], b: Sequence[int]) -> List[Fraction]:
    """Solve ``a @ x = b`` exactly over the rationals.

    Forward elimination is fraction-free (Bareiss on the augmented matrix);
    only the back substitution touches :class:`Fraction`.

    Raises
    ------
    SingularMatrix
        If ``det(a) == 0``.
    """
    n = _check_square(a)
    if len(b) != n:
        raise ValueError("right-hand side has wrong length")
    if n == 0:
        return []
    aug = [[int(x) for x in row] + [int(bi)] for row, bi in zip(a, b)]
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for r in range(k + 1, n):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise SingularMatrix("matrix is singular")
        pivot = aug[k][k]
        row_k = aug[k]
        for i in range(k + 1, n):
            row_i = aug[i]
            aik = row_i[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x: List[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        row = aug[i]
        acc = Fraction(row[n])
        for j in range(i + 1, n):
            if row[j]:
                acc -= row[j] * x[j]
        x[i] = acc / row[i]
    return x


def submatrix(m: Sequence[Sequence[int]], indices: Sequence[int]) -> IntegerMatrix:
    """Principal submatrix on the given row/column indices (in that order)."""
    return [[m[i][j] for j in indices] for i in indices]


def identity(n: int) -> IntegerMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matvec(m: Sequence[Sequence[int]], x: Sequence) -> list:
    return [sum(mij * xj for mij, xj in zip(row, x)) for row in m]


def tree_det(diag: Mapping[str, int], adjacency: Mapping[str, Sequence[str]], root: str, blocked: Optional[str] = None) -> int:
    """Determinant of a tree-shaped symmetric matrix with unit off-diagonal entries.

    The matrix is indexed by the connected component of ``root`` in the tree
    ``adjacency`` with ``blocked`` removed; ``diag`` holds the diagonal.
    Eliminates leaves first, so no fill-in occurs and everything stays
    integral: ``D(u) = diag(u) * prod D(c) - sum_c D0(c) * prod_{c' != c} D(c')``
    where ``D0(c)`` is the determinant of the subtree of ``c`` with ``c``
    deleted.
    """
    order = []
    parent = {root: blocked}
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for x in adjacency[u]:
            if x != parent[u]:
                parent[x] = u
                stack.append(x)
    full: Dict[str, int] = {}
    reduced: Dict[str, int] = {}
    for u in reversed(order):
        prod = 1
        acc = 0
        for c in adjacency[u]:
            if c == parent[u]:
                continue
            dc = full[c]
            acc = acc * dc + reduced[c] * prod
            prod *= dc
        full[u] = diag[u] * prod - acc
        reduced[u] = prod
    return full[root]
