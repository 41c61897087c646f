"""From-scratch exact determinants, adjoints and inverses.

Laplace expansion and Bird's algorithm need only ring operations and work
on integer as well as rational entries.  LU decomposition and the inverse
work over the rationals; integer input is promoted first.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import combinations
from operator import mul

from .errors import SingularMatrix
from .numkernel import SquareMatrix, exact_div, is_field, to_field, to_rat

# Above this dimension the ring adjoint uses fraction-free elimination
# instead of Laplace cofactors.
LAPLACE_ADJOINT_MAX_DIM = 6


class DetAlgorithm(enum.Enum):
    LAPLACE = "laplace"
    BIRD = "bird"
    LU = "lu"


def _one_like(x):
    return to_rat(1) if is_field(x) else 1


@lru_cache(maxsize=None)
def _subsets(n: int, size: int):
    out = []
    for rows in combinations(range(n), size):
        mask = 0
        for r in rows:
            mask |= 1 << r
        out.append((mask, tuple((r, mask ^ (1 << r)) for r in rows)))
    return tuple(out)


def _laplace_minors(cs, n):
    """Determinants of every row subset of the n x m block with columns ``cs``.

    Returns a dict from row bitmask (with m bits set) to the determinant of
    the block restricted to those rows, expanding along the first column and
    reusing the minors of the remaining columns.
    """
    m = len(cs)
    last = cs[-1]
    prev = {1 << r: last[r] for r in range(n)}
    for k in range(m - 2, -1, -1):
        col = cs[k]
        cur = {}
        for mask, terms in _subsets(n, m - k):
            acc = 0
            neg = False
            for r, sub in terms:
                t = col[r] * prev[sub]
                acc = acc - t if neg else acc + t
                neg = not neg
            cur[mask] = acc
        prev = cur
    return prev


def det_laplace(A: SquareMatrix):
    """Determinant by cofactor expansion along the first column.

    Division free.  Minors of the trailing columns are shared between the
    expansions, so the cost is ``n * 2**(n-1)`` products rather than ``n!``.
    """
    cols = A.cols
    n = A.dim
    if n == 1:
        return cols[0][0]
    if n == 2:
        (a, b), (c, d) = cols
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = cols
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return _laplace_minors(cols, n)[(1 << n) - 1]


def det_bird(A: SquareMatrix):
    """Division-free determinant by Bird's iterated product scheme.

    With ``mu(X)`` the upper triangular part of ``X`` whose diagonal entry
    ``l`` is replaced by ``-(X[l+1][l+1] + ... + X[n-1][n-1])``, iterate
    ``X <- mu(X) A`` starting from ``X = A``.  After ``n - 1`` steps
    ``X[0][0] = (-1)**(n-1) det(A)``.
    """
    n = A.dim
    acols = A.cols
    if n == 1:
        return acols[0][0]
    X = A.rows
    for step in range(n - 1):
        diag = [0] * n
        total = 0
        for i in range(n - 1, 0, -1):
            total = total - X[i][i]
            diag[i - 1] = total
        mu_rows = [(diag[i],) + tuple(X[i][i + 1:]) for i in range(n)]
        if step == n - 2:
            x00 = sum(map(mul, mu_rows[0], acols[0]))
            return x00 if n % 2 else -x00
        X = [tuple(sum(map(mul, mu_rows[i], acols[j][i:])) for j in range(n))
             for i in range(n)]


def det_lu(A: SquareMatrix):
    """Determinant over the rationals by Gaussian elimination.

    The pivot is the first nonzero entry of the column; the result is the
    product of pivots with the permutation sign.  Returns 0 when no pivot
    exists.
    """
    n = A.dim
    M = [[to_field(x) for x in row] for row in A.rows]
    det = to_rat(1)
    for k in range(n):
        p = k
        while p < n and M[p][k] == 0:
            p += 1
        if p == n:
            return det - det
        if p != k:
            M[k], M[p] = M[p], M[k]
            det = -det
        rk = M[k]
        pivot = rk[k]
        det = det * pivot
        for r in range(k + 1, n):
            rr = M[r]
            f = rr[k] / pivot
            if f:
                for c in range(k + 1, n):
                    rr[c] = rr[c] - f * rk[c]
    return det


def det_bareiss(A: SquareMatrix):
    """Fraction-free elimination determinant, O(n^3) ring operations."""
    n = A.dim
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        p = k
        while p < n and M[p][k] == 0:
            p += 1
        if p == n:
            return M[0][0] - M[0][0]
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        rk = M[k]
        piv = rk[k]
        for i in range(k + 1, n):
            ri = M[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = exact_div(piv * ri[j] - f * rk[j], prev)
        prev = piv
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def inverse(A: SquareMatrix):
    """Return ``(A^-1, det(A))`` over the rationals.

    Raises :class:`SingularMatrix` when ``det(A) = 0``.
    """
    n = A.dim
    one, zero = to_rat(1), to_rat(0)
    M = [[to_field(x) for x in row]
         + [one if i == j else zero for j in range(n)]
         for i, row in enumerate(A.rows)]
    det = one
    for k in range(n):
        p = k
        while p < n and M[p][k] == 0:
            p += 1
        if p == n:
            raise SingularMatrix("matrix is singular")
        if p != k:
            M[k], M[p] = M[p], M[k]
            det = -det
        rk = M[k]
        pivot = rk[k]
        det = det * pivot
        rk = [x / pivot for x in rk]
        M[k] = rk
        for r in range(n):
            if r == k:
                continue
            rr = M[r]
            f = rr[k]
            if f:
                M[r] = [x - f * y for x, y in zip(rr, rk)]
    return SquareMatrix.from_rows([row[n:] for row in M]), det


def _cofactor_adjoint(A: SquareMatrix, det_fn=None):
    """Adjoint from cofactors; returns ``(adj, det)``.

    With ``det_fn=None`` the cofactors of each column come out of one shared
    Laplace expansion; otherwise every minor is evaluated with ``det_fn``.
    """
    n = A.dim
    cols = A.cols
    full = (1 << n) - 1
    adj_rows = []
    for c in range(n):
        others = cols[:c] + cols[c + 1:]
        if det_fn is None:
            minors = _laplace_minors(others, n)
            cof = [minors[full ^ (1 << r)] for r in range(n)]
        else:
            cof = [det_fn(SquareMatrix._trusted(tuple(col[:r] + col[r + 1:] for col in others)))
                   for r in range(n)]
        adj_rows.append([m if (r + c) % 2 == 0 else -m for r, m in enumerate(cof)])
    det = sum(map(mul, cols[0], adj_rows[0]))
    return SquareMatrix.from_rows(adj_rows), det


def _adjoint_bareiss(A: SquareMatrix):
    # fraction-free Gauss-Jordan on [A | I]; None when A is singular
    n = A.dim
    M = [list(row) + [1 if i == j else 0 for j in range(n)]
         for i, row in enumerate(A.rows)]
    sign = 1
    prev = 1
    for k in range(n):
        p = k
        while p < n and M[p][k] == 0:
            p += 1
        if p == n:
            return None
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        rk = M[k]
        piv = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = M[i]
            f = ri[k]
            M[i] = [exact_div(piv * x - f * y, prev) for x, y in zip(ri, rk)]
        prev = piv
    if sign > 0:
        return SquareMatrix.from_rows([row[n:] for row in M]), prev
    return SquareMatrix.from_rows([[-x for x in row[n:]] for row in M]), -prev


def adjoint(A: SquareMatrix):
    """Return ``(A^adj, det(A))`` with ``A @ A^adj == det(A) * I``.

    Ring input uses Laplace cofactors up to dimension 6 and fraction-free
    Gauss-Jordan elimination above; rational input uses the inverse scaled by
    the determinant.  Singular input falls back to explicit cofactors.
    """
    n = A.dim
    if n == 1:
        return SquareMatrix(((_one_like(A[0, 0]),),)), A[0, 0]
    if is_field(A[0, 0]) or any(is_field(x) for c in A.cols for x in c):
        try:
            inv, det = inverse(A)
        except SingularMatrix:
            if n <= LAPLACE_ADJOINT_MAX_DIM:
                return _cofactor_adjoint(A)
            return _cofactor_adjoint(A, det_fn=det_bird)
        return inv.scaled(det), det
    if n <= LAPLACE_ADJOINT_MAX_DIM:
        return _cofactor_adjoint(A)
    res = _adjoint_bareiss(A)
    if res is None:
        return _cofactor_adjoint(A, det_fn=det_bird)
    return res


def determinant(A: SquareMatrix, algorithm: DetAlgorithm | str = DetAlgorithm.LAPLACE):
    algorithm = DetAlgorithm(algorithm)
    if algorithm is DetAlgorithm.LAPLACE:
        return det_laplace(A)
    if algorithm is DetAlgorithm.BIRD:
        return det_bird(A)
    return det_lu(A)


def cofactor_columns(A: SquareMatrix):
    """Laplace cofactors of every column: ``out[j][r]`` is ``C_{r,j}``.

    ``sum(v[r] * out[j][r])`` is the determinant of ``A`` with column ``j``
    replaced by ``v``.
    """
    return [list(row) for row in _cofactor_adjoint(A)[0].rows]


__all__ = [
    "DetAlgorithm", "det_laplace", "det_bird", "det_lu", "det_bareiss",
    "adjoint", "inverse", "determinant", "cofactor_columns",
]
