from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from agemo.catalog import make_lambda, make_lambda_tilde, make_M, make_M_i, make_right_ideal_m
from agemo.field import GF
from agemo.linalg import Matrix
from agemo.modules import (
    LEFT,
    RIGHT,
    Module,
    ModuleError,
    ModuleMap,
    decompose,
    direct_sum,
    dual,
    eval_map,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    is_reflexive,
    is_torsionless,
    projective_indecomposables,
    quotient_module,
    regular_module,
    simple_module,
    submodule_generated,
    torsion_part,
    torsion_part_via_homs,
)

alphas = st.sampled_from([0, 1, -1, 2, -2, 3, 5, 4, Fraction(1, 2), 8])


def brute_hom_dim(M: Module, N: Module) -> int:
    """dim Hom(M, N) from one big sympy system F*A_M = A_N*F over the generators."""
    m, n = M.dim, N.dim
    F = sympy.Matrix(n, m, sympy.symbols(f"f0:{n * m}"))
    eqs = []
    for a, b in zip(M.actions, N.actions):
        A = sympy.Matrix(a.rows)
        B = sympy.Matrix(b.rows)
        eqs.extend(F * A - B * F)
    if not eqs:
        return n * m
    system = sympy.Matrix([[sympy.diff(e, s) for s in F] for e in eqs])
    return n * m - system.rank()


def change_basis(M: Module, P: Matrix) -> Module:
    Pinv = P.solve(Matrix.identity(P.nrows, P.field))
    return Module(M.algebra, M.side, [Pinv @ a @ P for a in M.actions], name="conj")


@settings(max_examples=25, deadline=None)
@given(alphas, alphas)
def test_hom_dim_matches_brute_force(a, b):
    M, N = make_M(a), make_M(b)
    assert hom_dim(M, N) == brute_hom_dim(M, N)


def test_hom_dim_into_regular_and_dual():
    A = regular_module(make_lambda(2))
    for al in (0, 1, 2, 3):
        M = make_M(al)
        assert hom_dim(M, A) == brute_hom_dim(M, A) == dual(M).dim
        assert dual(M).side == RIGHT


def test_hom_basis_elements_are_homomorphisms():
    M, N = make_M(2), make_M(2)
    for f in hom_basis(M, N):
        assert f.is_homomorphism()


@settings(max_examples=20, deadline=None)
@given(alphas, st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_isomorphism_survives_change_of_basis(al, entries):
    P = Matrix([entries[0:3], entries[3:6], entries[6:9]])
    if not P.is_invertible():
        P = P + Matrix.identity(3).scale(7)
        if not P.is_invertible():
            return
    M = make_M(al)
    v = is_isomorphic(M, change_basis(M, P))
    assert v.status == "isomorphic"
    assert v.witness is not None and v.witness.is_isomorphism()


def test_catalog_modules_are_pairwise_non_isomorphic():
    mods = [make_M(al) for al in (0, 1, -1, 2, -2, 3, 5)]
    for i, M in enumerate(mods):
        for N in mods[i + 1:]:
            assert is_isomorphic(M, N).status == "not-isomorphic"


def test_indecomposable_and_decompose():
    M = make_M(3)
    assert is_indecomposable(M).status == "indecomposable"
    S, _, _ = direct_sum([make_M(3), make_M(5)])
    assert is_indecomposable(S).status == "decomposes"
    parts = decompose(S)
    assert sorted(p.dim for p in parts) == [3, 3]
    assert any(is_isomorphic(p, make_M(3)).status == "isomorphic" for p in parts)
    assert any(is_isomorphic(p, make_M(5)).status == "isomorphic" for p in parts)


def test_torsion_two_routes_agree():
    for al in (0, 1, 2, 4, 3):
        M = make_M(al)
        assert torsion_part(M).ncols == torsion_part_via_homs(M).ncols
    # only M(q) carries torsion
    assert torsion_part(make_M(2)).ncols == 1
    assert torsion_part(make_M(3)).ncols == 0


def test_torsionless_and_reflexive():
    assert not is_torsionless(make_M(2)) and not is_reflexive(make_M(2))
    assert is_torsionless(make_M(3)) and is_reflexive(make_M(3))
    assert not is_reflexive(make_M(4))
    phi = eval_map(make_M(3))
    assert phi.is_isomorphism()


def test_regular_module_is_projective_and_reflexive():
    A = regular_module(make_lambda(2))
    assert is_reflexive(A)
    assert dual(A).dim == 6


def test_simple_and_projectives_over_two_vertices():
    a = make_lambda_tilde(2)
    proj = projective_indecomposables(a)
    assert proj.dims() == [6, 6]
    assert simple_module(a, 1).dimension_vector() == (0, 1)
    assert make_M_i(1, 2).dimension_vector() == (1, 2)
    assert make_M_i(2, 3).dimension_vector() == (2, 1)


def test_submodule_and_quotient():
    a = make_lambda(2)
    A = regular_module(a)
    S, inc = submodule_generated(A, [a.element(z=1)])
    assert S.dim == 2  # z and zx
    Q, proj = quotient_module(A, inc.matrix.columns())
    assert Q.dim == 4
    assert (proj @ inc).matrix.is_zero()


def test_right_modules_use_the_opposite_action():
    R, inc = make_right_ideal_m(2)
    assert R.side == RIGHT and R.dim == 3
    assert inc.is_homomorphism()


def test_bad_modules_are_rejected():
    a = make_lambda(2)
    bad = [Matrix.identity(1)] + [Matrix.identity(1)] * (a.dim - 1)
    with pytest.raises(ModuleError):
        Module(a, LEFT, bad)
    with pytest.raises(ModuleError):
        Module(a, "middle", [Matrix.identity(1)] * a.dim)
    M = make_M(2)
    with pytest.raises(ModuleError):
        ModuleMap(M, M, Matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))


def test_prime_field_modules():
    F = GF(7)
    M, N = make_M(3, 2, F), make_M(3, 2, F)
    assert M.field is F
    assert is_isomorphic(M, N).status == "isomorphic"
    assert is_isomorphic(M, make_M(5, 2, F)).status == "not-isomorphic"
    assert torsion_part(make_M(2, 2, F)).ncols == 1
