import itertools
from fractions import Fraction

import pytest
import sympy

from agemo.catalog import make_lambda, make_lambda_dprime, make_lambda_prime, make_lambda_tilde, quiver_source
from agemo.field import GF
from agemo.quiver import (
    DimensionBlowupError,
    NonComposableError,
    QuiverSyntaxError,
    UnboundParameterError,
    UnknownArrowError,
    compile_quiver,
    parse_quiver,
    path_normal_form,
)


def quotient_dim(vertices, arrows, relations, max_len):
    """Dimension of a path algebra modulo homogeneous relations, by brute force.

    ``arrows`` maps a label to (source, target); a relation is a list of
    (coefficient, word) with words in application order. Paths longer than
    ``max_len`` must all lie in the ideal for the answer to be exact.
    """
    def target(v, word):
        for a in word:
            if arrows[a][0] != v:
                return None
            v = arrows[a][1]
        return v

    paths = [(v, ()) for v in vertices]
    for n in range(1, max_len + 1):
        for w in itertools.product(sorted(arrows), repeat=n):
            src = arrows[w[0]][0]
            if target(src, w) is not None:
                paths.append((src, w))
    index = {p: i for i, p in enumerate(paths)}
    rows = []
    for rel in relations:
        src = arrows[rel[0][1][0]][0]
        tgt = target(src, rel[0][1])
        for before in paths:
            if target(before[0], before[1]) != src:
                continue
            for after in paths:
                if after[0] != tgt:
                    continue
                row = [0] * len(paths)
                inside = True
                for c, w in rel:
                    p = (before[0], before[1] + w + after[1])
                    if p not in index:
                        inside = False
                        break
                    row[index[p]] += c
                if inside:
                    rows.append(row)
    rank = sympy.Matrix(rows).rank() if rows else 0
    return len(paths) - rank


def lambda_relations(q):
    # words in application order: x*y (apply y first) is ("y", "x")
    return [[(1, ("x", "x"))], [(1, ("y", "y"))], [(1, ("z", "z"))], [(1, ("z", "y"))],
            [(1, ("y", "x")), (q, ("x", "y"))], [(1, ("z", "x")), (-1, ("x", "z"))],
            [(1, ("y", "z")), (-1, ("x", "z"))]]


def test_lambda_dimension_matches_brute_force():
    arrows = {"x": ("1", "1"), "y": ("1", "1"), "z": ("1", "1")}
    for q in (2, 3, -1):
        assert quotient_dim(["1"], arrows, lambda_relations(q), 3) == 6 == make_lambda(q).dim


def test_lambda_tilde_dimension_matches_brute_force():
    arrows = {f"{a}1": ("1", "2") for a in "xyz"}
    arrows.update({f"{a}2": ("2", "1") for a in "xyz"})
    rels = []
    for s, t in (("1", "2"), ("2", "1")):
        for rel in lambda_relations(2):
            # first arrow leaves s, second leaves t
            rels.append([(c, (w[0] + s, w[1] + t)) for c, w in rel])
    assert quotient_dim(["1", "2"], arrows, rels, 3) == 12
    assert make_lambda_tilde(2).dim == 12


def test_builtin_bases():
    assert make_lambda(2).labels == ("e", "x", "y", "z", "yx", "zx")
    assert make_lambda_prime(2).labels == ("e", "x", "y", "yx")
    assert make_lambda_dprime().labels == ("e", "x", "y")
    assert make_lambda_tilde(2).labels == ("e1", "e2", "x1", "y1", "z1", "x2", "y2", "z2",
                                           "y2*x1", "z2*x1", "y1*x2", "z1*x2")


def test_parameter_binding_changes_the_products():
    a, _ = compile_quiver(quiver_source("lambda"), {"q": 3})
    x, y = a.element(x=1), a.element(y=1)
    assert a.multiply(x, y) == [Fraction(-3) * c for c in a.element(yx=1)]


def test_field_override():
    a, _ = compile_quiver(quiver_source("lambda").replace("field Q", "field GF(5)"))
    assert a.field is GF(5)
    assert a.dim == 6 and a.is_valid()


def test_normal_form_reduces_relations():
    a, pb = compile_quiver(quiver_source("lambda"))
    # x*z = z*x, so the path z then x reduces to the basis element zx
    assert path_normal_form(pb, ("1", ("z", "x"))) == a.element(zx=1)
    assert not any(path_normal_form(pb, ("1", ("x", "x"))))
    assert not any(path_normal_form(pb, ("1", ("x", "y", "z"))))


def test_parse_keeps_declarations():
    pres = parse_quiver(quiver_source("lambda_tilde"))
    assert tuple(pres.vertices) == ("1", "2")
    assert len(pres.arrows) == 6 and len(pres.relations) == 14


@pytest.mark.parametrize("text, error, line, col", [
    ("quiver Q\nvertex 1\narrow x 1 -> 1\n", QuiverSyntaxError, 3, 6),
    ("quiver Q\nvertex 1\narrow x: 1 -> 1\nrelation x*w\n", UnknownArrowError, 4, 12),
    ("quiver Q\nvertex 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2\nrelation b*a\n", NonComposableError, 5, 10),
    ("quiver Q\nvertex 1\narrow x: 1 -> 1\nparam t\nrelation x*x + t x*x*x\n", UnboundParameterError, 5, 16),
])
def test_errors_carry_positions(text, error, line, col):
    with pytest.raises(error) as info:
        compile_quiver(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert f"line {line}, col {col}" in str(info.value)


def test_infinite_quotient_is_reported():
    text = "quiver Q\nvertex 1\narrow x: 1 -> 1\narrow y: 1 -> 1\nrelation x*y\n"
    with pytest.raises(DimensionBlowupError):
        compile_quiver(text)
