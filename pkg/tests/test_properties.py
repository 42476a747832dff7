from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from agemo.catalog import make_M, make_M_prime, make_right_ideal_m
from agemo.homological import cosyzygy, ext_profile, syzygy, transpose
from agemo.modules import direct_sum, dual, is_isomorphic, is_reflexive, is_torsionless
from agemo.verify import module_properties

alphas = st.one_of(st.integers(-6, 9), st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9)))
qs = st.sampled_from([Fraction(2), Fraction(3), Fraction(-2), Fraction(1, 2)])


def iso(a, b):
    return is_isomorphic(a, b).status == "isomorphic"


def holds(props):
    return all(v is not False for v in props.values())


@settings(max_examples=20, deadline=None)
@given(alphas, qs)
def test_structural_identities_on_M(al, q):
    props = module_properties(make_M(al, q))
    assert holds(props), props


@settings(max_examples=12, deadline=None)
@given(alphas)
def test_structural_identities_on_right_ideals(al):
    props = module_properties(make_right_ideal_m(al)[0])
    assert holds(props), props


@settings(max_examples=8, deadline=None)
@given(st.one_of(alphas, st.just("inf")))
def test_structural_identities_over_the_quotient(al):
    assert holds(module_properties(make_M_prime(al)))


@settings(max_examples=20, deadline=None)
@given(alphas, qs)
def test_syzygy_multiplies_the_parameter_by_q(al, q):
    al = Fraction(al)
    assume(al != 1)
    assert iso(syzygy(make_M(al, q)), make_M(q * al, q))


@settings(max_examples=20, deadline=None)
@given(alphas, qs)
def test_cosyzygy_divides_by_q_away_from_q(al, q):
    al = Fraction(al)
    assume(al != q)
    M = make_M(al, q)
    assert is_torsionless(M)
    assert iso(cosyzygy(M), make_M(al / q, q))


@settings(max_examples=20, deadline=None)
@given(alphas, qs)
def test_reflexive_unless_q_or_q_squared(al, q):
    al = Fraction(al)
    assert is_reflexive(make_M(al, q)) == (al not in (q, q * q))


@settings(max_examples=15, deadline=None)
@given(alphas, qs)
def test_dual_of_M_is_a_right_ideal(al, q):
    al = Fraction(al)
    assert iso(dual(make_M(q * al, q)), make_right_ideal_m(al, q)[0])


@settings(max_examples=10, deadline=None)
@given(alphas, alphas)
def test_operations_commute_with_direct_sums(a, b):
    M, N = make_M(a), make_M(b)
    S, _, _ = direct_sum([M, N])
    assert ext_profile(S, 3).dims == [x + y for x, y in zip(ext_profile(M, 3).dims, ext_profile(N, 3).dims)]
    assert syzygy(S).dim == syzygy(M).dim + syzygy(N).dim
    assert transpose(S).dim == transpose(M).dim + transpose(N).dim
