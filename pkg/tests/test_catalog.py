from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from agemo.catalog import (
    INFINITY,
    CatalogError,
    alpha_label,
    make_lambda,
    make_left_ideal_m,
    make_M,
    make_M_direct,
    make_M_i,
    make_M_prime,
    make_quotient_by_U,
    make_right_ideal_m,
    make_U,
    name_module,
    parse_alpha,
)
from agemo.config import SWEEP_ALPHAS
from agemo.field import GF
from agemo.homological import cosyzygy, is_left_approximation, syzygy
from agemo.linalg import Matrix
from agemo.modules import Module, dual, is_isomorphic, simple_module

alphas = st.sampled_from([0, 1, -1, 2, -2, 3, 5, 4, 8, Fraction(1, 2), Fraction(-3, 7)])


def iso(a, b):
    return is_isomorphic(a, b).status == "isomorphic"


def conjugate(M: Module) -> Module:
    P = Matrix([[1, 1, 0], [0, 1, 2], [1, 0, 1]], M.field)
    Pinv = P.solve(Matrix.identity(3, M.field))
    return Module(M.algebra, M.side, [Pinv @ a @ P for a in M.actions])


@pytest.mark.parametrize("al", SWEEP_ALPHAS)
def test_direct_and_compiled_constructions_agree(al):
    assert make_M(al).actions == make_M_direct(al).actions


def test_action_of_x_on_M():
    M = make_M(2)
    a = M.ring
    assert M.act(a.element(x=1)).column(0) == [0, 2, 0]
    assert M.act(a.element(y=1)).column(0) == [0, 1, 0]
    assert M.act(a.element(z=1)).column(0) == [0, 0, 1]
    assert not any(make_M(0).act(a.element(x=1)).column(0))


def test_M_prime_at_infinity():
    M = make_M_prime(INFINITY)
    a = M.ring
    assert M.dim == 2
    assert M.act(a.element(x=1)).column(0) == [0, 1]
    assert not any(M.act(a.element(y=1)).column(0))


@pytest.mark.parametrize("al", SWEEP_ALPHAS)
def test_ideal_sweep(al):
    al = Fraction(al)
    L, u = make_left_ideal_m(al)
    R, up = make_right_ideal_m(al)
    assert R.dim == 3
    assert L.dim == (2 if al == 1 else 3)
    assert iso(make_M(al), make_quotient_by_U(al))
    assert is_left_approximation(u)
    if al != 1:
        assert make_U(al)[0].dim == 3
        assert iso(make_M(2 * al), L)
    # right side: Omega(m_{q a}) = m_a, (Lambda m_a)* = m_a Lambda, M(q a)* = m_a Lambda
    assert iso(syzygy(make_right_ideal_m(2 * al)[0]), R)
    assert iso(dual(L), R)
    assert iso(dual(make_M(2 * al)), R)
    assert is_left_approximation(up) == (al not in (1, 2))


def test_sweep_is_pairwise_non_isomorphic():
    mods = [make_M(al) for al in SWEEP_ALPHAS]
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            assert not iso(mods[i], mods[j])


def test_left_ideal_m3_is_M6():
    assert iso(make_left_ideal_m(3)[0], make_M(6))


def test_lambda_m1_and_M_q_have_the_same_dual():
    assert not iso(make_left_ideal_m(1)[0], make_M(2))
    assert iso(dual(make_left_ideal_m(1)[0]), dual(make_M(2)))


def test_alpha_labels():
    assert alpha_label(Fraction(2), Fraction(2)) == "q"
    assert alpha_label(Fraction(8), Fraction(2)) == "q^3"
    assert alpha_label(Fraction(1, 4), Fraction(2)) == "q^-2"
    assert alpha_label(Fraction(3), Fraction(2)) == "3"
    assert alpha_label(Fraction(-1), Fraction(-1)) == "-1"
    assert make_M(Fraction(1, 2)).name == "M(q^-1)"
    assert make_right_ideal_m(4)[0].name == "m(q^2)Λ"


def test_parse_alpha():
    assert parse_alpha("inf") == parse_alpha("∞") == INFINITY
    assert parse_alpha("-3/5") == Fraction(-3, 5)
    with pytest.raises(ValueError):
        parse_alpha("x")


def test_zero_q_is_rejected():
    with pytest.raises(CatalogError):
        make_lambda(0)
    with pytest.raises(CatalogError):
        make_M_i(3, 1)


@settings(max_examples=25, deadline=None)
@given(alphas)
def test_namer_recovers_M_after_change_of_basis(al):
    M = make_M(al)
    assert name_module(conjugate(M)) == M.name


@settings(max_examples=15, deadline=None)
@given(alphas)
def test_namer_on_right_ideals_and_duals(al):
    R = make_right_ideal_m(al)[0]
    assert name_module(R) == R.name
    assert name_module(dual(make_M(2 * Fraction(al)))) == R.name


def test_namer_on_other_algebras():
    for al in (0, 1, 2, INFINITY):
        M = make_M_prime(al)
        assert name_module(M) == M.name
    for v, al in ((1, 2), (2, 3), (1, 0)):
        M = make_M_i(v, al)
        assert name_module(conjugate(M)) == M.name
    assert name_module(make_left_ideal_m(1)[0]) == "Λm(1)"


def test_namer_declines_unknown_modules():
    assert name_module(simple_module(make_lambda(2))) is None
    assert name_module(cosyzygy(make_right_ideal_m(2)[0])) is None


def test_namer_over_a_prime_field():
    F = GF(7)
    M = make_M(3, 2, F)
    assert name_module(conjugate(M)) == "M(3)"
