import random
from itertools import permutations

import gmpy2
import pytest
from hypothesis import given, strategies as st

from dynhull.determinants import (DetAlgorithm, adjoint, cofactor_columns, det_bareiss, det_bird,
                                  det_laplace, det_lu, determinant, inverse)
from dynhull.errors import SingularMatrix
from dynhull.numkernel import OpCounter, SquareMatrix, counted, is_field, to_rat

from conftest import random_int_matrix, random_rat_matrix


def det_permutations(A: SquareMatrix):
    """Leibniz formula, the brute-force oracle."""
    n = A.dim
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for r in range(n):
            term = term * A[r, perm[r]]
        total += term
    return total


EXAMPLE = SquareMatrix.from_rows([[0, 1, 1], [1, 2, 0], [1, 1, 1]])


def test_laplace_examples():
    assert det_laplace(SquareMatrix.identity(4)) == 1
    assert det_laplace(SquareMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det_permutations(EXAMPLE) == -2
    assert det_laplace(EXAMPLE) == -2


def test_bird_examples(rng):
    assert det_bird(SquareMatrix.identity(5)) == 1
    A = random_int_matrix(rng, 5)
    A = A.with_column(3, A.column(1))
    assert det_bird(A) == 0
    B = random_int_matrix(rng, 6, -999, 999)
    assert det_bird(B) == det_laplace(B)


def test_lu_examples(rng):
    assert det_lu(SquareMatrix.identity(3)) == 1
    assert det_lu(SquareMatrix.diag([2, 3, 5])) == 30
    A = random_rat_matrix(rng, 7)
    assert det_lu(A) == det_laplace(A)
    assert det_lu(SquareMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert is_field(det_lu(SquareMatrix.identity(2)))


@pytest.mark.parametrize("n", range(1, 7))
def test_against_leibniz(n, rng):
    for _ in range(10):
        A = random_int_matrix(rng, n)
        ref = det_permutations(A)
        assert det_laplace(A) == det_bird(A) == det_lu(A) == det_bareiss(A) == ref


@pytest.mark.parametrize("n", range(1, 9))
def test_cross_algorithm_agreement(n):
    r = random.Random(n)
    for _ in range(1000):
        A = random_int_matrix(r, n, -99, 99)
        v = det_laplace(A)
        assert det_bird(A) == v
        assert det_lu(A) == to_rat(v)


def test_zero_heavy_matrices(rng):
    # first-nonzero pivoting must cope with zero leading entries
    for n in range(2, 8):
        for _ in range(20):
            A = SquareMatrix([[gmpy2.mpz(rng.choice([0, 0, 0, 1, -1, 2])) for _ in range(n)]
                              for _ in range(n)])
            v = det_laplace(A)
            assert det_bird(A) == det_lu(A) == det_bareiss(A) == v


@pytest.mark.parametrize("fn", [det_laplace, det_bird])
@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_division_free(fn, n, rng):
    ctr = OpCounter()
    fn(counted(random_int_matrix(rng, n), ctr))
    assert ctr.divs == 0
    assert ctr.muls > 0


@given(st.integers(1, 7), st.integers(-20, 20), st.integers(0, 2 ** 32))
def test_multilinearity(n, k, seed):
    r = random.Random(seed)
    A = random_int_matrix(r, n)
    j = r.randrange(n)
    B = A.with_column(j, [k * x for x in A.column(j)])
    for fn in (det_laplace, det_bird, det_lu, det_bareiss):
        assert fn(B) == k * fn(A)


def test_adjoint_examples(rng):
    adj, det = adjoint(SquareMatrix.identity(3))
    assert adj == SquareMatrix.identity(3) and det == 1
    adj, det = adjoint(SquareMatrix([[gmpy2.mpz(7)]]))
    assert adj.rows == ((1,),) and det == 7
    A = random_int_matrix(rng, 5)
    adj, det = adjoint(A)
    assert A @ adj == SquareMatrix.diag([det] * 5)


@pytest.mark.parametrize("n", range(2, 11))
def test_adjoint_identity_all_paths(n, rng):
    for _ in range(3):
        A = random_int_matrix(rng, n)
        adj, det = adjoint(A)
        ref = det_laplace(A) if n <= 8 else det_bareiss(A)
        assert det == ref
        assert A @ adj == SquareMatrix.diag([det] * n)
        Q = random_rat_matrix(rng, n)
        adjq, detq = adjoint(Q)
        assert Q @ adjq == SquareMatrix.diag([detq] * n)


@pytest.mark.parametrize("n", [2, 4, 7, 9])
def test_adjoint_of_singular_matrix(n, rng):
    A = random_int_matrix(rng, n)
    A = A.with_column(0, [x + y for x, y in zip(A.column(1), A.column(2 % n))])
    if n == 2:
        A = A.with_column(0, [2 * x for x in A.column(1)])
    adj, det = adjoint(A)
    assert det == 0
    assert A @ adj == SquareMatrix.diag([0] * n)
    assert adj == adjoint(A.map(to_rat))[0]


def test_inverse_examples(rng):
    inv, det = inverse(SquareMatrix.identity(4))
    assert inv == SquareMatrix.identity(4) and det == 1
    inv, det = inverse(SquareMatrix.diag([2, 4]))
    assert inv == SquareMatrix.diag([gmpy2.mpq(1, 2), gmpy2.mpq(1, 4)]) and det == 8
    A = random_int_matrix(rng, 6)
    inv, det = inverse(A)
    assert A @ inv == SquareMatrix.identity(6)
    with pytest.raises(SingularMatrix):
        inverse(SquareMatrix.from_rows([[1, 2], [2, 4]]))


@pytest.mark.parametrize("n", range(1, 9))
def test_adjoint_equals_det_times_inverse(n, rng):
    for _ in range(3):
        A = random_rat_matrix(rng, n)
        inv, det = inverse(A)
        adj, det2 = adjoint(A)
        assert det == det2
        assert adj == inv.scaled(det)


def test_determinant_dispatch(rng):
    A = random_int_matrix(rng, 5)
    v = det_laplace(A)
    for alg in DetAlgorithm:
        assert determinant(A, alg) == v
    assert determinant(A, "bird") == v
    with pytest.raises(ValueError):
        determinant(A, "cramer")


def test_cofactor_columns(rng):
    A = random_int_matrix(rng, 5)
    cof = cofactor_columns(A)
    v = [rng.randint(-9, 9) for _ in range(5)]
    for j in range(5):
        assert sum(x * c for x, c in zip(v, cof[j])) == det_laplace(A.with_column(j, v))
