from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from agemo import linalg
from agemo.field import GF, QQ, FieldMismatchError, FpElement, parse_field, parse_rational
from agemo.linalg import Matrix, kernel_rows, rank_rows, rref_rows, sparse_kernel, sparse_rank

small = st.integers(-4, 4)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def as_q(rows):
    return [[Fraction(x) for x in r] for r in rows]


def sparse(rows):
    return [{j: x for j, x in enumerate(r) if x} for r in rows]


@pytest.fixture
def backend():
    old = linalg.BACKEND
    yield lambda name: setattr(linalg, "BACKEND", name)
    linalg.BACKEND = old


# ---------------------------------------------------------------------------
# fields

def test_prime_field_arithmetic():
    F = GF(7)
    a, b = F(3), F(5)
    assert a + b == F(1)
    assert a * b == F(1)
    assert a / b == F(3) * F(5).inverse()
    assert -a == F(4)
    assert F(Fraction(1, 2)) * 2 == F(1)
    assert GF(7) is F


def test_prime_field_rejects_bad_input():
    with pytest.raises(ValueError):
        GF(8)
    with pytest.raises(ZeroDivisionError):
        GF(5)(Fraction(1, 5))
    with pytest.raises(FieldMismatchError):
        GF(3)(FpElement(1, 5))
    with pytest.raises(FieldMismatchError):
        QQ(GF(3)(1))


def test_parse_field_and_rational():
    assert parse_field("Q") is QQ
    assert parse_field("GF(11)") is GF(11)
    assert parse_field("F5") is GF(5)
    assert parse_rational(" -3/4 ") == Fraction(-3, 4)
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_field("R")


def test_matrix_rejects_mixed_fields():
    with pytest.raises(FieldMismatchError):
        Matrix([[1]], QQ) @ Matrix([[1]], GF(3))
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])


def test_matrix_is_immutable():
    m = Matrix.identity(2)
    with pytest.raises(AttributeError):
        m.nrows = 3


# ---------------------------------------------------------------------------
# row reduction against sympy

@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_and_rref_match_sympy(rows):
    ncols = len(rows[0])
    red, piv = rref_rows(as_q(rows), ncols)
    s_red, s_piv = sympy.Matrix(rows).rref()
    assert list(piv) == list(s_piv)
    assert rank_rows(as_q(rows), ncols) == len(s_piv)
    for i, row in enumerate(red):
        assert [sympy.Rational(x.numerator, x.denominator) for x in row] == list(s_red.row(i))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_a_null_space_basis(rows):
    ncols = len(rows[0])
    vecs, free = kernel_rows(as_q(rows), ncols, Fraction(0), Fraction(1))
    assert len(vecs) == ncols - sympy.Matrix(rows).rank()
    for v in vecs:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    for k, v in enumerate(vecs):
        assert [v[f] for f in free] == [1 if j == k else 0 for j in range(len(free))]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_sparse_kernel_equals_dense_kernel(rows):
    ncols = len(rows[0])
    dense, _ = kernel_rows(as_q(rows), ncols, Fraction(0), Fraction(1))
    got = sparse_kernel(sparse(as_q(rows)), ncols, QQ)
    got = [[v.get(j, 0) for j in range(ncols)] for v in got]
    assert sorted(map(tuple, got)) == sorted(map(tuple, dense))


@settings(max_examples=40, deadline=None)
@given(matrices(8, 8))
def test_flint_and_python_backends_agree(rows):
    ncols = len(rows[0])
    q = as_q(rows)
    old = linalg.BACKEND
    try:
        linalg.BACKEND = "python"
        ref = (rref_rows(q, ncols), sparse_rank(sparse(q), ncols, QQ),
               sparse_kernel(sparse(q), ncols, QQ))
        linalg.BACKEND = "flint"
        got = (rref_rows(q, ncols), sparse_rank(sparse(q), ncols, QQ),
               sparse_kernel(sparse(q), ncols, QQ))
    finally:
        linalg.BACKEND = old
    assert got[0] == ref[0]
    assert got[1] == ref[1]
    assert sorted(sorted(v.items()) for v in got[2]) == sorted(sorted(v.items()) for v in ref[2])


def test_flint_backend_over_prime_field(backend):
    F = GF(5)
    rows = [[F(x) for x in r] for r in ([1, 2, 3], [2, 4, 2], [0, 0, 0])]
    backend("python")
    ref = rref_rows(rows, 3)
    backend("flint")
    assert rref_rows(rows, 3) == ref
    assert sparse_rank(sparse(rows), 3, F) == 2
    # [2, 4, 1] is twice [1, 2, 3] mod 5
    assert sparse_rank(sparse([rows[0], [F(2), F(4), F(1)]]), 3, F) == 1


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_solve_finds_a_preimage(a_rows, x_rows):
    A = Matrix(a_rows)
    if A.ncols != len(x_rows):
        x_rows = [[1] * len(x_rows[0]) for _ in range(A.ncols)]
    X = Matrix(x_rows)
    B = A @ X
    Y = A.solve(B)
    assert Y is not None and A @ Y == B


def test_solve_reports_inconsistency():
    A = Matrix([[1, 0], [0, 0]])
    assert A.solve(Matrix([[0], [1]])) is None


def test_matrix_algebra():
    A = Matrix([[1, 2], [3, 4]])
    assert A.T == Matrix([[1, 3], [2, 4]])
    assert A + A == A.scale(2)
    assert (A - A).is_zero()
    assert A @ Matrix.identity(2) == A
    assert A.is_invertible() and not Matrix([[1, 2], [2, 4]]).is_invertible()
    assert A.kernel().shape == (2, 0)
    assert Matrix.from_columns([[1, 3], [2, 4]], 2) == A
