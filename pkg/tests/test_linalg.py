from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

from equivcat.errors import MalformedInputError
from equivcat.lincat import linalg
from equivcat.lincat.field import Field, is_prime

F5 = Field.prime(5)
F7 = Field.prime(7)
Q = Field.rationals()


def sympy_matrix(F, A, ncols):
    if F.p is None:
        dom = QQ
        rows = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in A]
    else:
        dom = GF(F.p)
        rows = [[dom(int(x)) for x in r] for r in A]
    return DomainMatrix(rows, (len(A), ncols), dom)


def matrices(p, max_rows=4, max_cols=4):
    if p is None:
        entry = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    else:
        entry = st.integers(0, p - 1)
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.mark.parametrize("n,expected", [(2, True), (4, False), (5, True), (9, False), (1, False), (97, True)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_field_rejects_composite():
    with pytest.raises(MalformedInputError, match="not prime"):
        Field.prime(4)


def test_field_format_and_parse():
    assert F5.format(F5(-1)) == "4"
    assert Q.format(Fraction(-1, 2)) == "-1/2"
    assert Q.parse("-1/2") == Fraction(-1, 2)
    assert F5.parse("1/2") == 3


@settings(max_examples=60, deadline=None)
@given(matrices(5))
def test_rank_matches_sympy_gf5(A):
    assert linalg.rank(F5, A) == sympy_matrix(F5, A, len(A[0])).rank()


@settings(max_examples=60, deadline=None)
@given(matrices(None))
def test_rank_matches_sympy_rationals(A):
    A = [[Fraction(x) for x in r] for r in A]
    assert linalg.rank(Q, A) == sympy_matrix(Q, A, len(A[0])).rank()


@settings(max_examples=60, deadline=None)
@given(matrices(7))
def test_nullspace_is_kernel_of_right_dimension(A):
    n = len(A[0])
    N = linalg.nullspace(F7, A, n)
    assert len(N) == n - linalg.rank(F7, A)
    for v in N:
        assert all(x == 0 for x in linalg.matvec(F7, A, v))
    if N:
        assert linalg.rank(F7, N) == len(N)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 3, 3), st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_solve_finds_a_solution_when_one_exists(A, x):
    n = len(A[0])
    x = x[:n]
    b = linalg.matvec(F5, A, x)
    y = linalg.solve(F5, A, b, n)
    assert y is not None
    assert linalg.matvec(F5, A, y) == b


@settings(max_examples=40, deadline=None)
@given(matrices(None, 3, 3))
def test_inverse_matches_sympy(A):
    A = [[Fraction(x) for x in r] for r in A]
    if len(A) != len(A[0]):
        return
    inv = linalg.inverse(Q, A)
    M = sympy_matrix(Q, A, len(A))
    if M.rank() < len(A):
        assert inv is None
    else:
        expected = M.inv().to_Matrix().tolist()
        assert [[Fraction(int(x.p), int(x.q)) for x in r] for r in expected] == inv


def test_subspace_coordinates():
    S = linalg.Subspace(F5, [[1, 0, 1], [0, 1, 1]], 3)
    assert S.dim == 2
    assert S.coords([2, 3, 0]) == [2, 3]
    assert S.coords([1, 0, 0]) is None
    assert S.vector([2, 3]) == [2, 3, 0]
