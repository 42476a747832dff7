"""Named algebras and modules of the q-deformed exterior algebra family.

Every algebra is compiled from a bundled quiver file; ``lambda_table`` builds
the same six-dimensional algebra from hand-written products so the two can be
compared. Constructors accept the deformation parameter ``q`` and an optional
field and cache the compiled algebra, so modules built with the same ``q``
share one algebra object (required by the module code).
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from importlib import resources
from typing import Optional, Union

from .algebra import Algebra
from .field import QQ, Field, parse_rational
from .linalg import Matrix, rank_rows
from .modules import (
    LEFT,
    RIGHT,
    Module,
    module_from_arrows,
    quotient_module,
    regular_module,
    submodule_from_subspace,
    submodule_generated,
)
from .quiver import build_path_algebra, parse_quiver

INFINITY = "inf"

_FILES = {
    "lambda": "lambda.quiver",
    "lambda_prime": "lambda_prime.quiver",
    "lambda_dprime": "lambda_dprime.quiver",
    "lambda_tilde": "lambda_tilde.quiver",
}
_ALGEBRAS: dict = {}


class CatalogError(ValueError):
    pass


def quiver_source(kind: str) -> str:
    """Text of a bundled quiver file (``lambda``, ``lambda_prime``, ...)."""
    if kind not in _FILES:
        raise CatalogError(f"no bundled quiver {kind!r}")
    return resources.files("agemo").joinpath("data").joinpath(_FILES[kind]).read_text()


def _scalar(x, fld: Field):
    if isinstance(x, str):
        x = parse_rational(x)
    return fld(x)


def _compiled(kind: str, q, fld: Field) -> Algebra:
    if q is not None:
        q = Fraction(q) if not isinstance(q, str) else parse_rational(q)
        if q == 0 or fld(q) == 0:
            raise CatalogError("q must be non-zero")
    key = (kind, q, fld.name)
    if key not in _ALGEBRAS:
        pres = parse_quiver(quiver_source(kind), {"q": q} if q is not None else None)
        pres = dataclasses.replace(pres, field=fld)
        alg, _ = build_path_algebra(pres)
        alg.name = f"{pres.name}(q={q})" if q is not None else pres.name
        alg._cache["catalog"] = (kind, q)
        _ALGEBRAS[key] = alg
    return _ALGEBRAS[key]


def make_lambda(q=2, field: Field = QQ) -> Algebra:
    """The local algebra with loops x, y, z (dimension 6)."""
    return _compiled("lambda", q, field)


def make_lambda_prime(q=2, field: Field = QQ) -> Algebra:
    """Quotient of ``make_lambda(q)`` by the ideal generated by z (dimension 4)."""
    return _compiled("lambda_prime", q, field)


def make_lambda_dprime(field: Field = QQ) -> Algebra:
    """Two loops with radical square zero (dimension 3)."""
    return _compiled("lambda_dprime", None, field)


def make_lambda_tilde(q=2, field: Field = QQ) -> Algebra:
    """Two-vertex version of ``make_lambda``: arrows x,y,z in both directions."""
    return _compiled("lambda_tilde", q, field)


def catalog_kind(a: Algebra):
    """``(kind, q)`` for catalog algebras, ``None`` otherwise."""
    return a._cache.get("catalog")


def lambda_table(q=2, field: Field = QQ) -> Algebra:
    """``make_lambda(q)`` written out by hand on the basis e, x, y, z, yx, zx."""
    q = _scalar(q, field)
    if not q:
        raise CatalogError("q must be non-zero")
    labels = ["e", "x", "y", "z", "yx", "zx"]
    n = len(labels)
    idx = {lab: k for k, lab in enumerate(labels)}

    def vec(**c):
        v = [field.zero] * n
        for lab, val in c.items():
            v[idx[lab]] = field(val)
        return v

    # products of two loops; a*b applies b first
    loops = {
        ("x", "x"): vec(), ("x", "y"): vec(yx=-q), ("x", "z"): vec(zx=1),
        ("y", "x"): vec(yx=1), ("y", "y"): vec(), ("y", "z"): vec(),
        ("z", "x"): vec(zx=1), ("z", "y"): vec(zx=1), ("z", "z"): vec(),
    }
    mul = [[vec() for _ in range(n)] for _ in range(n)]
    for j, lab in enumerate(labels):
        mul[0][j] = vec(**{lab: 1})
        mul[j][0] = vec(**{lab: 1})
    for (a, b), v in loops.items():
        mul[idx[a]][idx[b]] = v
    radical = [vec(**{lab: 1}) for lab in labels[1:]]
    return Algebra(field, labels, mul, vec(e=1), [vec(e=1)], radical, name=f"LambdaTable(q={q})")


# ---------------------------------------------------------------------------
# elements

def m_alpha(a: Algebra, alpha):
    """Coordinates of ``x - alpha*y``."""
    return a.element(x=1, y=-_scalar(alpha, a.field))


# ---------------------------------------------------------------------------
# modules over make_lambda(q)

def alpha_label(alpha, q) -> str:
    """``0``, ``1``, ``q``, ``q^k`` for powers of q (when q is not +-1), else the number."""
    if alpha == INFINITY:
        return "inf"
    if alpha == 0:
        return "0"
    if alpha == 1:
        return "1"
    if q is not None and q != 1 and q != -1:
        for k in list(range(1, 65)) + list(range(-1, -65, -1)):
            if q ** k == alpha:
                return "q" if k == 1 else f"q^{k}"
    return str(alpha)


def make_M(alpha, q=2, field: Field = QQ) -> Module:
    """Three-dimensional module with ``xv = alpha v'``, ``yv = v'``, ``zv = v''``."""
    a = make_lambda(q, field)
    al = _scalar(alpha, field)
    z, o = field.zero, field.one
    images = {
        "x": [[z, z, z], [al, z, z], [z, z, z]],
        "y": [[z, z, z], [o, z, z], [z, z, z]],
        "z": [[z, z, z], [z, z, z], [o, z, z]],
    }
    return module_from_arrows(a, 3, images, name=f"M({alpha_label(al, catalog_kind(a)[1])})")


def make_M_direct(alpha, q=2, field: Field = QQ) -> Module:
    """``make_M`` from explicit matrices for all six basis elements."""
    a = make_lambda(q, field)
    al = _scalar(alpha, field)
    z, o = field.zero, field.one

    def unit(r, c, val=o):
        rows = [[z] * 3 for _ in range(3)]
        rows[r][c] = val
        return Matrix.raw(rows, 3, field)

    zero = Matrix.zeros(3, 3, field)
    acts = {"e": Matrix.identity(3, field), "x": unit(1, 0, al), "y": unit(1, 0), "z": unit(2, 0),
            "yx": zero, "zx": zero}
    return Module(a, LEFT, [acts[lab] for lab in a.labels],
                  name=f"M({alpha_label(al, catalog_kind(a)[1])})")


def make_left_ideal_m(alpha, q=2, field: Field = QQ):
    """``(Lambda m_alpha, inclusion into Lambda)``; the inclusion is ``u_alpha``."""
    a = make_lambda(q, field)
    S, inc = submodule_generated(regular_module(a, LEFT), [m_alpha(a, alpha)])
    S.name = f"Λm({alpha_label(_scalar(alpha, field), catalog_kind(a)[1])})"
    return S, inc


def make_right_ideal_m(alpha, q=2, field: Field = QQ):
    """``(m_alpha Lambda, inclusion into Lambda)``; the inclusion is ``u'_alpha``."""
    a = make_lambda(q, field)
    S, inc = submodule_generated(regular_module(a, RIGHT), [m_alpha(a, alpha)])
    S.name = f"m({alpha_label(_scalar(alpha, field), catalog_kind(a)[1])})Λ"
    return S, inc


def make_U(alpha, q=2, field: Field = QQ):
    """Two-sided ideal generated by ``m_alpha`` as a left module, with its inclusion."""
    a = make_lambda(q, field)
    vecs = [m_alpha(a, alpha), a.element(yx=1), a.element(zx=1)]
    S, inc = submodule_from_subspace(regular_module(a, LEFT), vecs)
    S.name = f"U({alpha_label(_scalar(alpha, field), catalog_kind(a)[1])})"
    return S, inc


def make_quotient_by_U(alpha, q=2, field: Field = QQ) -> Module:
    """``Lambda / U_alpha``."""
    U, inc = make_U(alpha, q, field)
    Q, _ = quotient_module(inc.codomain, inc.matrix.columns())
    return Q


# ---------------------------------------------------------------------------
# the quotient and the two-vertex version

def make_M_prime(alpha, q=2, field: Field = QQ) -> Module:
    """Two-dimensional module: ``xv = alpha v'``, ``yv = v'``; ``inf`` gives ``xv = v'``, ``yv = 0``."""
    a = make_lambda_prime(q, field)
    z, o = field.zero, field.one
    if alpha == INFINITY or alpha == "∞":
        xs, ys, lab = o, z, "inf"
    else:
        xs, ys = _scalar(alpha, field), o
        lab = alpha_label(xs, catalog_kind(a)[1])
    images = {"x": [[z, z], [xs, z]], "y": [[z, z], [ys, z]]}
    return module_from_arrows(a, 2, images, name=f"M'({lab})")


def make_M_i(vertex: int, alpha, q=2, field: Field = QQ) -> Module:
    """Three-dimensional module with simple top at ``vertex`` (1 or 2)."""
    if vertex not in (1, 2):
        raise CatalogError("vertex must be 1 or 2")
    a = make_lambda_tilde(q, field)
    al = _scalar(alpha, field)
    z, o = field.zero, field.one
    if vertex == 1:
        # basis v | v', v''
        images = {"x1": [[z, z, z], [al, z, z], [z, z, z]],
                  "y1": [[z, z, z], [o, z, z], [z, z, z]],
                  "z1": [[z, z, z], [z, z, z], [o, z, z]]}
    else:
        # basis v', v'' | v (vertex blocks come in vertex order)
        images = {"x2": [[z, z, al], [z, z, z], [z, z, z]],
                  "y2": [[z, z, o], [z, z, z], [z, z, z]],
                  "z2": [[z, z, z], [z, z, o], [z, z, z]]}
    vd = {"1": 1, "2": 2} if vertex == 1 else {"1": 2, "2": 1}
    lab = alpha_label(al, catalog_kind(a)[1])
    return module_from_arrows(a, 3, images, vertex_dims=vd, name=f"M{vertex}({lab})")


# ---------------------------------------------------------------------------
# naming walked modules

def _top_generator(X: Module):
    """A vector outside ``rad X`` lying at one vertex (``e v = v`` for a primitive ``e``)."""
    ring = X.ring
    fld = X.field
    rad = []
    for r in ring.radical_basis().rows:
        rad.extend(X.act(r).columns())
    rk = rank_rows(rad, X.dim) if rad else 0
    idem = [X.act(e) for e in ring.idempotents]
    for j in range(X.dim):
        b = [fld.one if k == j else fld.zero for k in range(X.dim)]
        for E in idem:
            v = E.apply(b)
            if any(v) and (rank_rows(rad + [v], X.dim) if rad else 1) > rk:
                return v
    return None


def _ratio(u, w):
    """``c`` with ``u = c*w`` (``w`` non-zero), else ``None``."""
    c = None
    for a, b in zip(u, w):
        if b:
            c = a / b
            break
    if c is None:
        return None
    if any(a != c * b for a, b in zip(u, w)):
        return None
    return c


def _generator_ratio(X: Module, xlab: str, ylab: str):
    v = _top_generator(X)
    if v is None:
        return None
    ring = X.ring
    xv = X.act(ring.element(**{xlab: 1})).apply(v)
    yv = X.act(ring.element(**{ylab: 1})).apply(v)
    if not any(yv):
        return INFINITY if any(xv) else None
    return _ratio(xv, yv)


def _verified(X: Module, candidate: Optional[Module]) -> Optional[str]:
    from .modules import is_isomorphic

    if candidate is None or candidate.dim != X.dim:
        return None
    return candidate.name if is_isomorphic(X, candidate).status == "isomorphic" else None


def _vertex_of_top(X: Module) -> Optional[int]:
    v = _top_generator(X)
    if v is None:
        return None
    for i, e in enumerate(X.ring.idempotents):
        if any(X.act(e).apply(v)):
            return i + 1
    return None


def name_module(X: Module) -> Optional[str]:
    """Catalog label of ``X`` if it is isomorphic to a named module, else ``None``.

    The parameter is read off a top generator and the guess is confirmed by
    an isomorphism test, so a returned label is always correct.
    """
    info = catalog_kind(X.algebra)
    if info is None or X.dim == 0:
        return None
    kind, q = info
    fld = X.field
    args = {"q": q, "field": fld} if q is not None else {}
    try:
        if kind == "lambda" and X.side == LEFT and X.dim == 3:
            c = _generator_ratio(X, "x", "y")
            if c is not None and c != INFINITY:
                return _verified(X, make_M(c, **args))
        if kind == "lambda" and X.side == RIGHT and X.dim == 3:
            # on the generator of m_alpha Lambda: g.x = (alpha/q) g.y
            c = _generator_ratio(X, "x", "y")
            if c is not None and c != INFINITY:
                return _verified(X, make_right_ideal_m(c * q, **args)[0])
        if kind == "lambda" and X.side == LEFT and X.dim == 2:
            c = _generator_ratio(X, "x", "y")
            if c is not None and c != INFINITY:
                return _verified(X, make_left_ideal_m(c / q, **args)[0])
        if kind == "lambda_prime" and X.side == LEFT and X.dim == 2:
            c = _generator_ratio(X, "x", "y")
            if c is not None:
                return _verified(X, make_M_prime(c, **args))
        if kind == "lambda_tilde" and X.side == LEFT and X.dim == 3:
            i = _vertex_of_top(X)
            if i is not None:
                c = _generator_ratio(X, f"x{i}", f"y{i}")
                if c is not None and c != INFINITY:
                    return _verified(X, make_M_i(i, c, **args))
    except (CatalogError, ZeroDivisionError):
        return None
    return None


def parse_alpha(text: str) -> Union[Fraction, str]:
    t = text.strip()
    if t in ("inf", "infinity", "∞"):
        return INFINITY
    return parse_rational(t)
