"""Exact scalars, dense square matrices and operation counting.

Ring scalars are GMP integers (``gmpy2.mpz``) and field scalars GMP
rationals (``gmpy2.mpq``, always kept in lowest terms with a positive
denominator).  Python ``int`` and ``fractions.Fraction`` are accepted
everywhere as well.  Matrices store their entries column by column because
every update in this package replaces a whole column.

Operation counting is opt-in: wrap the inputs of a computation with
:func:`counted` and every arithmetic operation performed on them is tallied
in an :class:`OpCounter`.  Uninstrumented code never touches a counter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Iterable, Sequence

import gmpy2

from .errors import DimensionMismatch, DivisionByZero, NonExactDivision

ExactInt = type(gmpy2.mpz(0))
ExactRat = type(gmpy2.mpq(0))
_FIELD_TYPES = (ExactRat, Fraction)


def unwrap(x):
    return x.v if isinstance(x, Counted) else x


def is_field(x) -> bool:
    """True when ``x`` is a field scalar (possibly counted)."""
    return isinstance(unwrap(x), _FIELD_TYPES)


def to_int(x) -> ExactInt:
    if isinstance(x, _FIELD_TYPES):
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        x = x.numerator
    return gmpy2.mpz(x)


def to_rat(x) -> ExactRat:
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    return gmpy2.mpq(x)


def to_field(x):
    """Promote a ring scalar to a field scalar; field scalars pass through."""
    if isinstance(x, Counted):
        return x if isinstance(x.v, _FIELD_TYPES) else Counted(to_rat(x.v), x.ctr)
    return x if isinstance(x, _FIELD_TYPES) else to_rat(x)


def parse_scalar(text: str):
    """``"12"`` gives an integer, ``"3/4"`` a rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise DivisionByZero(text)
        return gmpy2.mpq(int(num), int(den))
    return gmpy2.mpz(int(text))


def format_scalar(x) -> str:
    """Inverse of :func:`parse_scalar`; rationals always carry a denominator."""
    x = unwrap(x)
    if is_field(x):
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def exact_div(a, b):
    """Divide ``a`` by ``b`` when the quotient is known to be exact.

    For integers the remainder is checked and :class:`NonExactDivision` is
    raised if it is not zero.  Field scalars divide normally.
    """
    if b == 0:
        raise DivisionByZero(f"exact_div({a}, 0)")
    if is_field(a) or is_field(b):
        return a / b
    q, r = divmod(a, b)
    if r:
        raise NonExactDivision(unwrap(a), unwrap(b))
    return q


def scalar_bytes(x) -> int:
    """Approximate storage of a scalar, counted in 64-bit limbs."""
    x = unwrap(x)
    if isinstance(x, _FIELD_TYPES):
        return scalar_bytes(x.numerator) + scalar_bytes(x.denominator)
    return 8 * max(1, (int(abs(x)).bit_length() + 63) // 64)


class SquareMatrix:
    """Immutable dense n x n matrix of exact scalars, stored by columns."""

    __slots__ = ("cols", "dim")

    def __init__(self, cols: Iterable[Sequence]):
        cols = tuple(tuple(c) for c in cols)
        n = len(cols)
        if n == 0:
            raise DimensionMismatch("matrix dimension must be positive")
        for c in cols:
            if len(c) != n:
                raise DimensionMismatch(f"column of length {len(c)} in a {n}x{n} matrix")
        self.cols = cols
        self.dim = n

    @classmethod
    def _trusted(cls, cols: tuple) -> "SquareMatrix":
        # cols is already a square tuple of tuples
        m = object.__new__(cls)
        m.cols = cols
        m.dim = len(cols)
        return m

    @classmethod
    def from_columns(cls, cols) -> "SquareMatrix":
        return cls(cols)

    @classmethod
    def from_rows(cls, rows) -> "SquareMatrix":
        rows = [tuple(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("rows do not form a square matrix")
        return cls._trusted(tuple(zip(*rows)))

    @classmethod
    def identity(cls, n: int, one=1) -> "SquareMatrix":
        zero = one - one
        return cls._trusted(tuple(
            tuple(one if r == c else zero for r in range(n)) for c in range(n)))

    @classmethod
    def diag(cls, values) -> "SquareMatrix":
        values = list(values)
        n = len(values)
        zero = values[0] - values[0]
        return cls._trusted(tuple(
            tuple(values[c] if r == c else zero for r in range(n)) for c in range(n)))

    @property
    def rows(self) -> tuple:
        return tuple(zip(*self.cols))

    def column(self, i: int) -> tuple:
        return self.cols[i]

    def row(self, i: int) -> tuple:
        return tuple(c[i] for c in self.cols)

    def __getitem__(self, rc):
        r, c = rc
        return self.cols[c][r]

    def with_column(self, i: int, u: Sequence) -> "SquareMatrix":
        u = tuple(u)
        if len(u) != self.dim:
            raise DimensionMismatch(f"column of length {len(u)} for dimension {self.dim}")
        cols = self.cols
        return SquareMatrix._trusted(cols[:i] + (u,) + cols[i + 1:])

    def map(self, f) -> "SquareMatrix":
        return SquareMatrix._trusted(tuple(tuple(map(f, c)) for c in self.cols))

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix._trusted(self.rows)

    def scaled(self, k) -> "SquareMatrix":
        return self.map(lambda x: x * k)

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if other.dim != self.dim:
            raise DimensionMismatch("matrix product of different dimensions")
        rows = self.rows
        return SquareMatrix._trusted(tuple(
            tuple(sum(map(mul, r, c)) for r in rows) for c in other.cols))

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.cols == other.cols

    def __hash__(self):
        return hash(self.cols)

    def __repr__(self):
        return f"SquareMatrix.from_rows({[list(r) for r in self.rows]!r})"

    def nbytes(self) -> int:
        return sum(scalar_bytes(x) for c in self.cols for x in c)


def mat_vec(A: SquareMatrix, v: Sequence) -> list:
    """Exact product ``A @ v``."""
    if len(v) != A.dim:
        raise DimensionMismatch(f"vector of length {len(v)} for dimension {A.dim}")
    return [sum(map(mul, row, v)) for row in zip(*A.cols)]


def row_times_vec(A: SquareMatrix, i: int, v: Sequence):
    """Dot product of row ``i`` of ``A`` with ``v`` (d products, d-1 sums)."""
    if len(v) != A.dim:
        raise DimensionMismatch(f"vector of length {len(v)} for dimension {A.dim}")
    if not 0 <= i < A.dim:
        raise IndexError(i)
    return sum(map(mul, [c[i] for c in A.cols], v))


# -- instrumentation ---------------------------------------------------------

@dataclass
class OpCounter:
    """Tally of scalar operations.

    ``adds`` covers additions, subtractions and negations.  ``fused`` counts
    additions that accumulate a product just computed (``acc + a*b``); such a
    multiply-add is one operation in :attr:`total`, the convention under which
    sum-of-products kernels are usually costed.  :attr:`raw` counts every
    primitive separately.
    """

    adds: int = 0
    muls: int = 0
    divs: int = 0
    fused: int = 0

    @property
    def raw(self) -> int:
        return self.adds + self.muls + self.divs

    @property
    def total(self) -> int:
        return self.raw - self.fused

    def reset(self) -> None:
        self.adds = self.muls = self.divs = self.fused = 0

    def snapshot(self) -> dict:
        return {"adds": self.adds, "muls": self.muls, "divs": self.divs,
                "fused": self.fused, "total": self.total}


class Counted:
    """Scalar proxy that reports each arithmetic operation to a counter.

    Adding the literal ``0`` (the start value of ``sum``) is not counted.
    """

    __slots__ = ("v", "ctr", "fresh")

    def __init__(self, v, ctr: OpCounter, fresh: bool = False):
        self.v = v
        self.ctr = ctr
        self.fresh = fresh

    def _add(self, other, sign):
        o = other.v if isinstance(other, Counted) else other
        ctr = self.ctr
        ctr.adds += 1
        if self.fresh or (isinstance(other, Counted) and other.fresh):
            if sign > 0:
                ctr.fused += 1
        return o

    def __add__(self, other):
        o = self._add(other, 1)
        return Counted(self.v + o, self.ctr)

    def __radd__(self, other):
        if type(other) is int and other == 0:
            return self
        o = self._add(other, 1)
        return Counted(o + self.v, self.ctr)

    def __sub__(self, other):
        o = self._add(other, -1)
        return Counted(self.v - o, self.ctr)

    def __rsub__(self, other):
        o = self._add(other, -1)
        return Counted(o - self.v, self.ctr)

    def __neg__(self):
        self.ctr.adds += 1
        return Counted(-self.v, self.ctr)

    def __mul__(self, other):
        o = other.v if isinstance(other, Counted) else other
        self.ctr.muls += 1
        return Counted(self.v * o, self.ctr, fresh=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other.v if isinstance(other, Counted) else other
        self.ctr.divs += 1
        return Counted(self.v / o, self.ctr)

    def __rtruediv__(self, other):
        self.ctr.divs += 1
        return Counted(other / self.v, self.ctr)

    def __divmod__(self, other):
        o = other.v if isinstance(other, Counted) else other
        self.ctr.divs += 1
        q, r = divmod(self.v, o)
        return Counted(q, self.ctr), Counted(r, self.ctr)

    def __floordiv__(self, other):
        o = other.v if isinstance(other, Counted) else other
        self.ctr.divs += 1
        return Counted(self.v // o, self.ctr)

    def __abs__(self):
        return Counted(abs(self.v), self.ctr)

    def __bool__(self):
        return bool(self.v)

    def __eq__(self, other):
        return self.v == unwrap(other)

    def __ne__(self, other):
        return self.v != unwrap(other)

    def __lt__(self, other):
        return self.v < unwrap(other)

    def __le__(self, other):
        return self.v <= unwrap(other)

    def __gt__(self, other):
        return self.v > unwrap(other)

    def __ge__(self, other):
        return self.v >= unwrap(other)

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"Counted({self.v!r})"


def counted(obj, ctr: OpCounter):
    """Wrap every scalar inside ``obj`` (scalar, sequence or matrix)."""
    if isinstance(obj, SquareMatrix):
        return SquareMatrix._trusted(tuple(
            tuple(Counted(x, ctr) for x in c) for c in obj.cols))
    if isinstance(obj, (tuple, list)):
        return type(obj)(counted(x, ctr) for x in obj)
    if isinstance(obj, Counted):
        return Counted(obj.v, ctr)
    return Counted(obj, ctr)


def uncounted(obj):
    """Inverse of :func:`counted`."""
    if isinstance(obj, SquareMatrix):
        return SquareMatrix._trusted(tuple(tuple(map(unwrap, c)) for c in obj.cols))
    if isinstance(obj, (tuple, list)):
        return type(obj)(uncounted(x) for x in obj)
    return unwrap(obj)
