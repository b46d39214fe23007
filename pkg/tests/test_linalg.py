from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from modpic.linalg import RationalMatrix, annihilator, in_span, kernel, rank, span_rank


def test_examples():
    I = RationalMatrix.identity(3)
    assert I.rank() == 3 and I.kernel() == []
    Z = RationalMatrix.zeros(2, 5)
    assert Z.rank() == 0 and len(Z.kernel()) == 5
    M = RationalMatrix([[1, 2], [2, 4]])
    assert M.rank() == 1
    (v,) = M.kernel()
    assert v in ([2, -1], [-2, 1])


def test_span_helpers():
    assert span_rank([[1, 0, 1], [2, 0, 2]], 3) == 1
    assert in_span([3, 0, 3], [[1, 0, 1]])
    assert not in_span([1, 1, 0], [[1, 0, 1]])
    ann = annihilator([[1, 1, 0]], 3)
    assert len(ann) == 2 and all(a[0] + a[1] == 0 for a in ann)


matrices = st.integers(1, 6).flatmap(lambda c: st.lists(
    st.lists(st.fractions(max_denominator=5).filter(lambda q: abs(q) < 20), min_size=c, max_size=c),
    min_size=1, max_size=6).map(lambda rows: RationalMatrix(rows, c)))


@settings(max_examples=300)
@given(matrices)
def test_rank_nullity_and_kernel(M):
    r, c = M.shape
    K = M.kernel()
    assert M.rank() + len(K) == c
    assert M.rank() == M.transpose().rank()
    for v in K:
        assert all(sum(M[i, j] * v[j] for j in range(c)) == 0 for i in range(r))
    if K:
        assert RationalMatrix(K, c).rank() == len(K)


@settings(max_examples=200)
@given(matrices, st.randoms())
def test_row_permutation_invariance(M, rnd):
    rows = [[M[i, j] for j in range(M.shape[1])] for i in range(M.shape[0])]
    rnd.shuffle(rows)
    P = RationalMatrix(rows, M.shape[1])
    assert P.echelon() == M.echelon()
    assert P.kernel() == M.kernel()


def test_echelon_integer_primitive():
    M = RationalMatrix([[Fraction(1, 2), Fraction(1, 3)], [1, 1]])
    rows, piv = M.echelon()
    assert piv == [0, 1] and rows == [[1, 0], [0, 1]]
    M = RationalMatrix([[Fraction(2, 3), Fraction(4, 3), 2]])
    assert M.echelon() == ([[1, 2, 3]], [0])


def test_matmul_and_stack():
    A = RationalMatrix([[1, 2], [3, 4]])
    assert A @ RationalMatrix.identity(2) == A
    assert (A @ A)[0, 0] == 7
    assert A.stack(A).shape == (4, 2)
    assert rank(A.stack(A)) == 2 and kernel(A) == []
