from fractions import Fraction

import pytest

from agemo import linalg
from agemo.catalog import make_lambda, make_M, make_M_i, make_right_ideal_m
from agemo.field import GF
from agemo.homological import ext_profile, syzygy
from agemo.modules import dual, simple_module, top
from agemo.resolution import FreeResolution, free_resolution


@pytest.mark.parametrize("make", [
    lambda: make_M(1), lambda: make_M(Fraction(1, 2)), lambda: simple_module(make_lambda(2)),
    lambda: make_right_ideal_m(4)[0], lambda: make_M_i(1, 2), lambda: make_M(3, 2, GF(7)),
])
def test_syzygy_dims_match_built_syzygies(make):
    M = make()
    res = FreeResolution(M)
    X = M
    for n in range(1, 4):
        X = syzygy(X)
        assert res.syzygy_dim(n) == X.dim


def test_ranks_equal_tops_of_built_syzygies():
    k = simple_module(make_lambda(2))
    res = FreeResolution(k)
    X, tops = k, []
    for _ in range(4):
        tops.append(top(X)[0].dim)
        X = syzygy(X)
    assert [res.rank(n) for n in range(4)] == tops == [1, 3, 7, 15]
    assert res.vertices(0) == [0]


def test_ext_dims_need_an_index_of_at_least_one():
    with pytest.raises(ValueError):
        FreeResolution(make_M(1)).ext_dim(0)


def test_resolution_is_cached_per_module():
    M = make_M(1)
    assert free_resolution(M) is free_resolution(M)


def test_long_horizon_stays_three_dimensional():
    # the syzygies of M(q) are M(q^2), M(q^3), ... and never grow
    res = free_resolution(make_M(2))
    assert {res.syzygy_dim(n) for n in range(1, 21)} == {3}
    assert res.ext_dims(20) == [0] * 20


def test_backends_give_the_same_ext_dims():
    old = linalg.BACKEND
    try:
        linalg.BACKEND = "python"
        ref = FreeResolution(dual(dual(make_M(2)))).ext_dims(5)
        linalg.BACKEND = "flint"
        got = FreeResolution(dual(dual(make_M(2)))).ext_dims(5)
    finally:
        linalg.BACKEND = old
    assert got == ref == [5, 9, 18, 36, 72]


def test_engine_agrees_with_module_route_over_a_prime_field():
    M = make_M(1, 2, GF(5))
    assert ext_profile(M, 3).dims == ext_profile(M, 3, "modules").dims == [2, 5, 9]
