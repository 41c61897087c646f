import math
import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from dynhull.errors import DimensionMismatch, DivisionByZero, NonExactDivision
from dynhull.numkernel import (OpCounter, SquareMatrix, counted, exact_div, format_scalar,
                               is_field, mat_vec, parse_scalar, row_times_vec, scalar_bytes,
                               to_field, to_int, uncounted)

from conftest import random_int_matrix

ints = st.integers(min_value=-(2 ** 200), max_value=2 ** 200)
nonzero = ints.filter(bool)


def test_exact_div_examples():
    assert exact_div(6, 3) == 2
    assert exact_div(0, 5) == 0
    with pytest.raises(NonExactDivision):
        exact_div(7, 2)
    with pytest.raises(DivisionByZero):
        exact_div(4, 0)


def test_exact_div_mpz():
    assert exact_div(gmpy2.mpz(-12), gmpy2.mpz(4)) == -3
    with pytest.raises(NonExactDivision) as e:
        exact_div(gmpy2.mpz(7), gmpy2.mpz(2))
    assert e.value.dividend == 7 and e.value.divisor == 2


@given(ints, nonzero)
def test_exact_div_roundtrip(q, b):
    a = gmpy2.mpz(q) * b
    assert exact_div(a, gmpy2.mpz(b)) * b == a


@given(st.integers(-10 ** 30, 10 ** 30), st.integers(1, 10 ** 30),
       st.integers(-10 ** 30, 10 ** 30), st.integers(1, 10 ** 30))
def test_rational_normalization(n1, d1, n2, d2):
    x, y = gmpy2.mpq(n1, d1), gmpy2.mpq(n2, d2)
    for r in (x + y, x - y, x * y, -x) + ((x / y,) if y else ()):
        assert r.denominator > 0
        assert math.gcd(int(r.numerator), int(r.denominator)) == 1


def test_matrix_construction():
    A = SquareMatrix.from_rows([[1, 2], [3, 4]])
    assert A.column(0) == (1, 3)
    assert A.row(1) == (3, 4)
    assert A[0, 1] == 2
    assert A.with_column(1, (5, 6)).rows == ((1, 5), (3, 6))
    assert A.rows == ((1, 2), (3, 4))
    with pytest.raises(DimensionMismatch):
        SquareMatrix([(1, 2), (3,)])
    with pytest.raises(DimensionMismatch):
        A.with_column(0, (1, 2, 3))


def test_matrix_is_immutable_under_with_column():
    A = SquareMatrix.identity(3)
    B = A.with_column(0, (2, 0, 0))
    assert A == SquareMatrix.identity(3)
    assert B[0, 0] == 2


def test_mat_vec_examples():
    I3 = SquareMatrix.identity(3)
    assert mat_vec(I3, (1, 2, 3)) == [1, 2, 3]
    assert mat_vec(SquareMatrix.diag([2, 2, 2]), (1, 2, 3)) == [2, 4, 6]
    with pytest.raises(DimensionMismatch):
        mat_vec(I3, (1, 2))


def test_mat_vec_against_naive_loop(rng):
    for _ in range(20):
        A = random_int_matrix(rng, 4, -99, 99)
        v = [rng.randint(-99, 99) for _ in range(4)]
        naive = []
        for r in range(4):
            acc = 0
            for c in range(4):
                acc += A[r, c] * v[c]
            naive.append(acc)
        assert mat_vec(A, v) == naive


def test_row_times_vec_examples(rng):
    assert row_times_vec(SquareMatrix.identity(3), 0, (5, 6, 7)) == 5
    ones = SquareMatrix.from_rows([[1] * 3] * 3)
    assert row_times_vec(ones, 1, (1, 1, 1)) == 3
    A = random_int_matrix(rng, 5)
    v = [rng.randint(-9, 9) for _ in range(5)]
    assert row_times_vec(A, 2, v) == mat_vec(A, v)[2]
    with pytest.raises(DimensionMismatch):
        row_times_vec(A, 0, v[:3])


@given(st.integers(1, 8), st.integers(0, 2 ** 32))
def test_row_times_vec_agrees_with_mat_vec(n, seed):
    r = random.Random(seed)
    A = random_int_matrix(r, n, -1000, 1000)
    v = [r.randint(-1000, 1000) for _ in range(n)]
    i = r.randrange(n)
    assert row_times_vec(A, i, v) == mat_vec(A, v)[i]


@pytest.mark.parametrize("d", range(1, 12))
def test_row_times_vec_op_count(d, rng):
    A = random_int_matrix(rng, d)
    ctr = OpCounter()
    row_times_vec(counted(A, ctr), d - 1, counted([rng.randint(-9, 9) for _ in range(d)], ctr))
    assert ctr.muls == d
    assert ctr.adds == d - 1
    assert ctr.divs == 0


def test_op_counter_reset_and_fused():
    ctr = OpCounter()
    a, b, c = counted([2, 3, 4], ctr)
    r = a * b + c
    assert uncounted(r) == 10
    assert (ctr.muls, ctr.adds, ctr.fused, ctr.total, ctr.raw) == (1, 1, 1, 1, 2)
    _ = a - b * c
    assert ctr.fused == 1 and ctr.adds == 2
    before = ctr.snapshot()
    _ = a / b
    assert ctr.divs == 1 and ctr.total == before["total"] + 1
    ctr.reset()
    assert ctr.snapshot() == {"adds": 0, "muls": 0, "divs": 0, "fused": 0, "total": 0}


def test_scalar_helpers():
    assert is_field(gmpy2.mpq(1, 2)) and is_field(Fraction(1, 2))
    assert not is_field(gmpy2.mpz(3)) and not is_field(3)
    assert to_field(3) == gmpy2.mpq(3) and is_field(to_field(3))
    assert to_int(gmpy2.mpq(6, 3)) == 2
    with pytest.raises(ValueError):
        to_int(gmpy2.mpq(1, 2))
    assert parse_scalar("12") == 12 and not is_field(parse_scalar("12"))
    assert parse_scalar("3/-6") == gmpy2.mpq(-1, 2)
    assert format_scalar(gmpy2.mpq(4, 2)) == "2/1"
    assert format_scalar(gmpy2.mpz(-7)) == "-7"
    with pytest.raises(DivisionByZero):
        parse_scalar("1/0")
    assert scalar_bytes(1) == 8 and scalar_bytes(2 ** 64) == 16
    assert scalar_bytes(gmpy2.mpq(1, 3)) == 16


@given(st.integers(-10 ** 40, 10 ** 40), st.integers(1, 10 ** 40))
def test_scalar_text_roundtrip(n, d):
    for x in (gmpy2.mpz(n), gmpy2.mpq(n, d)):
        y = parse_scalar(format_scalar(x))
        assert y == x and is_field(y) == is_field(x)
