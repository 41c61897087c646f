"""Determinants maintained under single-column replacement.

Two state types are provided.  :class:`DynInvState` keeps the inverse and
updates it with the Sherman-Morrison formula; it needs field scalars.
:class:`DynAdjState` keeps the adjoint ``A^adj = det(A) A^-1`` and updates
it with ring operations plus one exact division per entry, so it works on
plain integers.

Replacing column ``i`` of ``A`` by ``u`` gives ``A' = A + (u - A_i) e_i^T``.
Because ``A^adj A_i = det(A) e_i`` the correction vector
``A^adj (u - A_i)`` equals ``A^adj u - det(A) e_i``, and the new determinant
reduces to the dot product of row ``i`` of the adjoint with ``u`` (the
cofactor expansion of ``A'`` along column ``i``).  The inverse variant uses
the same identity with ``A^-1 A_i = e_i``.

States are immutable: an update returns a new state and leaves the old one
usable, which the hull code relies on when one cell seeds several others.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import mul
from typing import Sequence

from . import determinants
from .errors import DimensionMismatch, NonExactDivision, SingularMatrix, SingularUpdate
from .numkernel import SquareMatrix, is_field, to_field, unwrap


@dataclass(frozen=True)
class ColumnUpdate:
    """Replace column ``i`` by the vector ``u``."""

    i: int
    u: tuple

    def __init__(self, i: int, u: Sequence):
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "u", tuple(u))


def _check(dim: int, upd: ColumnUpdate) -> None:
    if not 0 <= upd.i < dim:
        raise DimensionMismatch(f"column index {upd.i} out of range for dimension {dim}")
    if len(upd.u) != dim:
        raise DimensionMismatch(f"update vector of length {len(upd.u)} for dimension {dim}")


@dataclass(frozen=True, eq=True)
class DynInvState:
    A: SquareMatrix
    inv: SquareMatrix
    det: object

    @classmethod
    def from_matrix(cls, A: SquareMatrix) -> "DynInvState":
        inv, det = determinants.inverse(A)
        A = A.map(to_field)
        return cls(A, inv, det)

    @property
    def dim(self) -> int:
        return self.A.dim

    def peek_det(self, upd: ColumnUpdate):
        """``det(A')`` without building the new state (2d operations)."""
        _check(self.A.dim, upd)
        return self._peek(upd.i, upd.u)

    def _peek(self, i: int, u: Sequence):
        # unchecked, for callers that build u themselves
        return self.det * sum(map(mul, [c[i] for c in self.inv.cols], u))

    def column_dets(self, v: Sequence) -> list:
        """``det`` of ``A`` with column ``j`` replaced by ``v``, for every ``j``."""
        det = self.det
        return [det * sum(map(mul, row, v)) for row in zip(*self.inv.cols)]

    def update(self, upd: ColumnUpdate) -> "DynInvState":
        _check(self.A.dim, upd)
        i, u = upd.i, upd.u
        inv_cols = self.inv.cols
        z = [sum(map(mul, row, u)) for row in zip(*inv_cols)]
        lam = z[i]
        if lam == 0:
            raise SingularUpdate(f"replacing column {i} makes the matrix singular")
        # z - e_i is A^-1 (u - A_i); lam is 1 + e_i^T A^-1 (u - A_i)
        z[i] = lam - 1
        new_cols = []
        for col in inv_cols:
            t = col[i] / lam
            new_cols.append(tuple([x - zr * t for x, zr in zip(col, z)]))
        return DynInvState(self.A.with_column(i, u),
                           SquareMatrix._trusted(tuple(new_cols)),
                           self.det * lam)

    def nbytes(self) -> int:
        return self.inv.nbytes() + 16


@dataclass(frozen=True, eq=True)
class DynAdjState:
    A: SquareMatrix
    adj: SquareMatrix
    det: object

    @classmethod
    def from_matrix(cls, A: SquareMatrix) -> "DynAdjState":
        adj, det = determinants.adjoint(A)
        if det == 0:
            raise SingularMatrix("matrix is singular")
        return cls(A, adj, det)

    @property
    def dim(self) -> int:
        return self.A.dim

    def peek_det(self, upd: ColumnUpdate):
        """``det(A')`` in d products and d-1 sums, no division."""
        _check(self.A.dim, upd)
        return self._peek(upd.i, upd.u)

    def _peek(self, i: int, u: Sequence):
        return sum(map(mul, [c[i] for c in self.adj.cols], u))

    def column_dets(self, v: Sequence) -> list:
        """``det`` of ``A`` with column ``j`` replaced by ``v``, for every ``j``."""
        return [sum(map(mul, row, v)) for row in zip(*self.adj.cols)]

    def update(self, upd: ColumnUpdate) -> "DynAdjState":
        _check(self.A.dim, upd)
        i, u = upd.i, upd.u
        adj_cols = self.adj.cols
        z = [sum(map(mul, row, u)) for row in zip(*adj_cols)]
        det_new = z[i]
        if det_new == 0:
            raise SingularUpdate(f"replacing column {i} makes the matrix singular")
        det = self.det
        # z becomes A^adj (u - A_i)
        z[i] = det_new - det
        new_cols = []
        if is_field(det):
            for col in adj_cols:
                s = col[i]
                new_cols.append(tuple([(x * det_new - zr * s) / det for x, zr in zip(col, z)]))
        else:
            for col in adj_cols:
                s = col[i]
                qr = [divmod(x * det_new - zr * s, det) for x, zr in zip(col, z)]
                for q, r in qr:
                    if r:
                        raise NonExactDivision(unwrap(q * det + r), unwrap(det))
                new_cols.append(tuple([q for q, _ in qr]))
        return DynAdjState(self.A.with_column(i, u),
                           SquareMatrix._trusted(tuple(new_cols)),
                           det_new)

    def nbytes(self) -> int:
        return self.adj.nbytes() + 16


def dyninv_init(A: SquareMatrix) -> DynInvState:
    return DynInvState.from_matrix(A)


def dyninv_peek_det(s: DynInvState, upd: ColumnUpdate):
    return s.peek_det(upd)


def dyninv_update(s: DynInvState, upd: ColumnUpdate) -> DynInvState:
    return s.update(upd)


def dynadj_init(A: SquareMatrix) -> DynAdjState:
    return DynAdjState.from_matrix(A)


def dynadj_peek_det(s: DynAdjState, upd: ColumnUpdate):
    return s.peek_det(upd)


def dynadj_update(s: DynAdjState, upd: ColumnUpdate) -> DynAdjState:
    return s.update(upd)
