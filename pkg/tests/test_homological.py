from fractions import Fraction

import pytest

from agemo.catalog import make_lambda, make_left_ideal_m, make_M, make_right_ideal_m
from agemo.homological import (
    certify_gp,
    cosyzygy,
    ext_profile,
    first_nonvanishing_ext,
    g_status,
    is_left_approximation,
    is_projective,
    minimal_left_approximation,
    omega_period,
    projective_cover,
    syzygy,
    syzygy_power,
    torsionfree_depth,
    tr_negative_via_cosyzygies,
    tr_profile,
    transpose,
)
from agemo.modules import LEFT, RIGHT, dual, is_isomorphic, regular_module, simple_module
from agemo.verify import corpus


def iso(a, b):
    return is_isomorphic(a, b).status == "isomorphic"


@pytest.fixture(scope="module")
def mods():
    return {M.name: M for M in corpus(2)}


# values computed by the resolution engine and confirmed by the two module routes
EXT_UP_TO_3 = {
    "M(0)": [0, 0, 0], "M(1)": [2, 5, 9], "M(q)": [0, 0, 0], "M(3)": [0, 0, 0],
    "M(q^-1)": [0, 2, 5], "M(q^-2)": [0, 0, 2], "k": [3, 6, 12], "Λm(1)": [2, 3, 6],
    "M(q)**": [5, 9, 18], "M'(0)": [0, 0, 0], "M1(q)": [0, 0, 0], "m(q)Λ": [1, 0, 0],
    "m(q^2)Λ": [1, 1, 0], "M(q)*": [0, 0, 0], "℧(m(q)Λ)": [0, 1, 0], "k_Λ": [3, 6, 12],
}


@pytest.mark.parametrize("name", sorted(EXT_UP_TO_3))
def test_ext_resolution_route(mods, name):
    assert ext_profile(mods[name], 3).dims == EXT_UP_TO_3[name]


@pytest.mark.parametrize("name", ["M(1)", "M(q^-1)", "M(q^-2)", "Λm(1)", "m(q)Λ", "m(q^2)Λ",
                                  "℧(m(q)Λ)", "M1(q)", "M'(0)", "M(q)*"])
def test_ext_three_routes_agree(mods, name):
    M = mods[name]
    ref = ext_profile(M, 3, "resolution").dims
    assert ext_profile(M, 3, "summands").dims == ref
    assert ext_profile(M, 3, "modules").dims == ref


def test_ext_of_the_simple_two_routes():
    k = simple_module(make_lambda(2))
    assert ext_profile(k, 2, "modules").dims == ext_profile(k, 2).dims == [3, 6]


def test_ext_shifts_along_syzygies():
    # Ext^(i+1)(M, A) = Ext^i(Omega M, A)
    for al in (1, Fraction(1, 2), Fraction(1, 4)):
        M = make_M(al)
        assert ext_profile(M, 5).dims[1:] == ext_profile(syzygy(M), 4).dims


def test_projective_cover_and_syzygy():
    M = make_M(3)
    cov = projective_cover(M)
    assert len(cov.vertices) == 1
    assert syzygy(M).dim == 3
    assert iso(syzygy(M), make_M(6))
    assert is_projective(regular_module(make_lambda(2)))
    assert not is_projective(M)


def test_syzygies_move_along_powers_of_q():
    # Omega M(a) = M(q a) away from the special values
    for al in (3, 5, -1):
        assert iso(syzygy(make_M(al)), make_M(2 * al))
    assert iso(syzygy_power(make_M(3), 3), make_M(24))


def test_cosyzygy_inverts_syzygy():
    M = make_M(6)
    assert iso(cosyzygy(M), make_M(3))
    assert iso(syzygy(cosyzygy(M)), M)
    # M(q) is not torsionless, so the round trip does not come back
    assert not iso(syzygy(cosyzygy(make_M(2))), make_M(2))


def test_transpose_is_an_involution_up_to_projectives():
    for al in (0, 3, 2):
        M = make_M(al)
        T = transpose(M)
        assert T.side == RIGHT
        assert iso(transpose(T), M)


def test_minimal_approximation_is_an_approximation():
    for al in (0, 1, 2, 3):
        M = make_M(al)
        ap = minimal_left_approximation(M)
        assert is_left_approximation(ap.map)
    _, u = make_left_ideal_m(3)
    assert is_left_approximation(u)
    # u'_1 and u'_q fail, every other right inclusion is an approximation
    assert not is_left_approximation(make_right_ideal_m(1)[1])
    assert not is_left_approximation(make_right_ideal_m(2)[1])
    assert is_left_approximation(make_right_ideal_m(3)[1])


def test_first_nonvanishing_ext():
    assert first_nonvanishing_ext(make_M(1), 5) == 1
    assert first_nonvanishing_ext(make_M(Fraction(1, 4)), 5) == 3
    assert first_nonvanishing_ext(make_M(3), 5) is None


def test_tr_profile_two_routes():
    for s in range(1, 5):
        M = make_M(Fraction(1, 2 ** (s - 1)))
        prof = tr_profile(M, 6)
        assert prof.negative == tr_negative_via_cosyzygies(M, 6)
        assert prof.satisfied() == [i for i in range(-6, 7) if i and i < s]


def test_torsionfree_depth():
    assert torsionfree_depth(make_M(2), 4) == 0
    assert torsionfree_depth(make_M(3), 4) is None


def test_omega_period_at_root_of_unity():
    assert omega_period(make_M(3, -1), 6) == 2
    assert omega_period(make_M(0), 4) == 1
    assert omega_period(make_M(3), 6) is None


def test_certify_gp():
    assert certify_gp(make_M(3, -1), 10).status == "GP-exact"
    assert certify_gp(make_M(0), 10).as_dict() == {"status": "GP-exact", "period": 1, "witness": "",
                                                   "horizon": 10}
    v = certify_gp(make_M(2), 10)
    assert v.status == "not-GP" and "K M" in v.witness
    assert certify_gp(make_M(1), 10).status == "not-GP"
    assert certify_gp(make_M(3), 10).status == "GP-up-to-horizon"
    assert certify_gp(regular_module(make_lambda(2)), 3).status == "GP-exact"


def test_g_status_table():
    st = g_status(make_M(2), 10)
    assert (st.g1.holds, st.g2.holds, st.g3.holds) == (True, True, False)
    assert str(st.g1) == "yes (10)" and str(st.g3) == "no"
    st = g_status(make_M(8), 10)
    assert (st.g1.holds, st.g2.holds, st.g3.holds) == (True, False, True)
    assert str(st.g2) == "no (i=1)"
    st = g_status(make_M(1), 10)
    assert (st.g1.holds, st.g2.holds, st.g3.holds) == (False, True, True)
    assert st.g1.witness == 1


def test_dual_of_M_q_and_double_dual():
    M = make_M(2)
    assert iso(dual(M), make_right_ideal_m(1)[0])
    assert iso(dual(dual(M)), syzygy(make_M(1)))


def test_right_side_semi_gp():
    R = make_right_ideal_m(1)[0]
    assert R.side == RIGHT
    assert ext_profile(R, 8).vanishes()
    assert ext_profile(make_right_ideal_m(2)[0], 2).first_nonzero() == 1


def test_left_side_module_sides():
    assert make_M(2).side == LEFT
    assert transpose(make_right_ideal_m(3)[0]).side == LEFT
