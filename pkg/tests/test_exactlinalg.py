import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from absorption import exactlinalg as la
from absorption.errors import ModulusMismatch, NoSolution
from absorption.exactlinalg import FieldElem, Matrix, TruncPoly, kernel_basis, rank, solve_right

PRIMES = [2, 3, 5, 7, 13, 101, 10007]


def matrices(max_side=6):
    @st.composite
    def build(draw):
        p = draw(st.sampled_from(PRIMES))
        m = draw(st.integers(0, max_side))
        n = draw(st.integers(0, max_side))
        vals = draw(st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n))
        return Matrix(np.array(vals, dtype=np.int64).reshape(m, n), p)
    return build()


def test_rank_examples():
    assert rank(Matrix.identity(2, 5)) == 2
    assert rank(Matrix.zeros(3, 4, 7)) == 0
    assert rank(Matrix([[1, 2], [2, 4]], 7)) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(2, 5)).cols == 0
    assert kernel_basis(Matrix.zeros(2, 2, 5)).cols == 2
    k = kernel_basis(Matrix([[1, 1]], 3))
    assert k.cols == 1
    assert (Matrix([[1, 1]], 3) @ k) == Matrix.zeros(1, 1, 3)
    # the only line is spanned by (1, 2)
    assert la.rank_mod(np.hstack([k.entries, [[1], [2]]]), 3) == 1


def test_solve_examples():
    b = Matrix([[3, 1], [4, 1]], 5)
    assert solve_right(Matrix.identity(2, 5), b) == b
    with pytest.raises(NoSolution):
        solve_right(Matrix.zeros(2, 2, 5), b)
    assert solve_right(Matrix([[2]], 5), Matrix([[3]], 5)) == Matrix([[4]], 5)


def test_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatch):
        Matrix.from_elems([[FieldElem(1, 5), FieldElem(1, 7)]])
    with pytest.raises(ModulusMismatch):
        Matrix.identity(2, 5) @ Matrix.identity(2, 7)
    with pytest.raises(ModulusMismatch):
        FieldElem(1, 5) + FieldElem(1, 7)


def test_field_arithmetic():
    x = FieldElem(3, 7)
    assert x * x.inverse() == FieldElem(1, 7)
    assert x / 3 == FieldElem(1, 7)
    assert x ** 6 == FieldElem(1, 7)
    assert int(-x) == 4


def test_prime_helpers():
    assert [n for n in range(30) if la.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ZeroDivisionError):
        la.inv_mod(0, 7)


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).cols == m.cols
    assert rank(m) <= min(m.rows, m.cols)
    if m.cols:
        assert not (m.entries @ kernel_basis(m).entries % m.p).any()


@given(matrices(), st.integers(1, 3), st.randoms(use_true_random=False))
def test_solve_consistent(a, k, rnd):
    # b in the column space of a is always solvable and the solution is exact
    x = np.array([[rnd.randrange(a.p) for _ in range(k)] for _ in range(a.cols)], dtype=np.int64)
    b = Matrix(a.entries @ x.reshape(a.cols, k) % a.p if a.cols else np.zeros((a.rows, k)), a.p)
    if a.rows == 0:
        return
    sol = solve_right(a, b)
    assert a @ sol == b


@given(matrices(5))
def test_inverse_and_rref(m):
    r, piv = la.rref(m.entries, m.p)
    assert len(piv) == rank(m)
    if m.rows == m.cols and rank(m) == m.rows and m.rows:
        inv = la.inverse(m.entries, m.p)
        assert np.array_equal(m.entries @ inv % m.p, np.eye(m.rows, dtype=np.int64))


def naive_product(a, b, N, p):
    out = [0] * N
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < N:
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


@given(st.sampled_from(PRIMES), st.integers(1, 6), st.data())
def test_truncpoly_matches_naive_convolution(p, N, data):
    coeffs = st.lists(st.integers(0, p - 1), min_size=N, max_size=N)
    a, b = data.draw(coeffs), data.draw(coeffs)
    prod = TruncPoly(tuple(a), p) * TruncPoly(tuple(b), p)
    assert prod.coeffs == naive_product(a, b, N, p)
    # t -> 0 is a ring homomorphism
    assert prod.at_zero() == TruncPoly(tuple(a), p).at_zero() * TruncPoly(tuple(b), p).at_zero()


def test_truncpoly_truncates():
    t = TruncPoly.monomial(1, 2, 7)
    assert (t * t).is_zero()
    assert t.valuation() == 1
    assert TruncPoly.monomial(0, 2, 7).valuation() == 0
