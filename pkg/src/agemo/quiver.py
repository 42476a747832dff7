"""Quivers with relations: a small text grammar and a path-algebra compiler.

Source lines (``#`` starts a comment)::

    quiver NAME
    field Q                 # or F7, GF(7), ...
    param q = 2             # or just ``param q`` and bind it at compile time
    vertex 1 2
    arrow x: 1 -> 2
    relation x*y + q y*x

A product ``a*b`` means "first apply b, then a", so ``(a*b)v = a(bv)``.
Internally a path is stored in application order: ``a*b`` becomes ``(b, a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra
from .field import QQ, Field, parse_field, parse_rational
from .linalg import SparseEchelon, reduce_against, rref_rows


class QuiverError(ValueError):
    """Any problem with a quiver source; carries a 1-based position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


class QuiverSyntaxError(QuiverError):
    pass


class UnknownArrowError(QuiverError):
    pass


class NonComposableError(QuiverError):
    pass


class UnboundParameterError(QuiverError):
    pass


class DimensionBlowupError(QuiverError):
    """The quotient did not become finite-dimensional within the length bound."""


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Relation:
    # terms: (coefficient factors, written arrow labels); evaluated at build time
    terms: Tuple
    line: int
    col: int
    text: str


@dataclass
class QuiverPresentation:
    name: str
    field: Field
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Relation, ...]
    params: Dict[str, Optional[Fraction]] = dc_field(default_factory=dict)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")
_IDENT = re.compile(r"[A-Za-z0-9_']+$")


def _tokens(text: str, offset: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("num", m.group(1), offset + m.start(1)))
        elif m.group(2) is not None:
            out.append(("id", m.group(2), offset + m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), offset + m.start(3)))
        pos = m.end()
    return out


class _ExprParser:
    """Recursive-descent parser for one relation expression."""

    def __init__(self, toks, line, arrows, params):
        self.toks = toks
        self.i = 0
        self.line = line
        self.arrows = arrows
        self.params = params

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg, tok=None, cls=QuiverSyntaxError):
        col = tok[2] + 1 if tok else (self.toks[-1][2] + 2 if self.toks else 1)
        raise cls(msg, self.line, col)

    def parse(self):
        terms = []
        sign = 1
        t = self.peek()
        if t and t[0] == "op" and t[1] in "+-":
            sign = -1 if t[1] == "-" else 1
            self.take()
        terms.append(self.term(sign))
        while self.peek() is not None:
            t = self.take()
            if t[0] != "op" or t[1] not in "+-":
                self.error(f"expected '+' or '-', got {t[1]!r}", t)
            terms.append(self.term(-1 if t[1] == "-" else 1))
        return terms

    def term(self, sign):
        start = self.peek()
        if start is None:
            self.error("expected a term")
        coeff: list = [("num", Fraction(sign))]
        path: list = []
        self.factor(coeff, path, divide=False)
        while True:
            t = self.peek()
            if t is None or (t[0] == "op" and t[1] in "+-"):
                break
            if t[0] == "op" and t[1] == "*":
                self.take()
                self.factor(coeff, path, divide=False)
            elif t[0] == "op" and t[1] == "/":
                self.take()
                self.factor(coeff, path, divide=True)
            elif t[0] in ("num", "id"):
                self.factor(coeff, path, divide=False)
            else:
                self.error(f"unexpected {t[1]!r}", t)
        if not path:
            self.error("term has no path", start)
        return (tuple(coeff), tuple(path), start)

    def exponent(self):
        t = self.peek()
        if t is None or t[0] != "op" or t[1] != "^":
            return 1
        self.take()
        neg = False
        t = self.take()
        if t is not None and t[0] == "op" and t[1] == "-":
            neg = True
            t = self.take()
        if t is None or t[0] != "num":
            self.error("expected an integer exponent", t)
        return -int(t[1]) if neg else int(t[1])

    def factor(self, coeff, path, divide):
        t = self.take()
        if t is None:
            self.error("expected a factor")
        if t[0] == "num":
            e = self.exponent()
            v = Fraction(int(t[1])) ** e
            if divide:
                if v == 0:
                    self.error("division by zero", t)
                v = 1 / v
            coeff.append(("num", v))
        elif t[0] == "id":
            name = t[1]
            e = self.exponent()
            if name in self.params:
                coeff.append(("param", name, -e if divide else e, t))
            elif name in self.arrows:
                if divide:
                    self.error(f"cannot divide by arrow {name!r}", t)
                if e < 1:
                    self.error("arrow exponent must be positive", t)
                path.extend([(name, t)] * e)
            else:
                self.error(f"unknown arrow {name!r}", t, UnknownArrowError)
        else:
            self.error(f"unexpected {t[1]!r}", t)


def parse_quiver(text: str, params: Optional[Dict[str, object]] = None) -> QuiverPresentation:
    """Parse quiver source. ``params`` overrides or binds parameter values."""
    name = "Q"
    fld: Field = QQ
    vertices: List[str] = []
    arrows: List[Arrow] = []
    pvals: Dict[str, Optional[Fraction]] = {}
    pending = []  # (line, col, expr_text, expr_offset)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        head = stripped.split(None, 1)[0]
        col0 = line.index(head)
        rest_off = col0 + len(head)
        rest = line[rest_off:]
        if head == "quiver":
            if not rest.strip():
                raise QuiverSyntaxError("quiver needs a name", lineno, col0 + 1)
            name = rest.strip()
        elif head == "field":
            try:
                fld = parse_field(rest)
            except ValueError as exc:
                raise QuiverSyntaxError(str(exc), lineno, rest_off + 2) from None
        elif head == "param":
            m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:=\s*(\S+)\s*)?", rest)
            if not m:
                raise QuiverSyntaxError("expected 'param NAME [= RATIONAL]'", lineno, rest_off + 1)
            val = None
            if m.group(2) is not None:
                try:
                    val = parse_rational(m.group(2))
                except ValueError:
                    raise QuiverSyntaxError(f"bad rational {m.group(2)!r}", lineno,
                                            rest_off + m.start(2) + 1) from None
            pvals[m.group(1)] = val
        elif head == "vertex":
            labels = rest.split()
            if not labels:
                raise QuiverSyntaxError("vertex needs at least one label", lineno, col0 + 1)
            for lab in labels:
                if not _IDENT.match(lab):
                    raise QuiverSyntaxError(f"bad vertex label {lab!r}", lineno, line.index(lab, rest_off) + 1)
                if lab in vertices:
                    raise QuiverSyntaxError(f"duplicate vertex {lab!r}", lineno, line.index(lab, rest_off) + 1)
                vertices.append(lab)
        elif head == "arrow":
            m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(\S+)\s*->\s*(\S+)\s*", rest)
            if not m:
                raise QuiverSyntaxError("expected 'arrow LABEL: SRC -> TGT'", lineno, rest_off + 1)
            lab, s, t = m.groups()
            if any(a.label == lab for a in arrows):
                raise QuiverSyntaxError(f"duplicate arrow {lab!r}", lineno, rest_off + m.start(1) + 1)
            for v, g in ((s, 2), (t, 3)):
                if v not in vertices:
                    raise QuiverSyntaxError(f"unknown vertex {v!r}", lineno, rest_off + m.start(g) + 1)
            arrows.append(Arrow(lab, s, t))
        elif head == "relation":
            if not rest.strip():
                raise QuiverSyntaxError("empty relation", lineno, col0 + 1)
            pending.append((lineno, col0 + 1, rest, rest_off))
        else:
            raise QuiverSyntaxError(f"unknown directive {head!r}", lineno, col0 + 1)
    if not vertices:
        raise QuiverSyntaxError("no vertices declared", 1, 1)
    for k, v in (params or {}).items():
        pvals[k] = Fraction(v) if v is not None else None
    amap = {a.label: a for a in arrows}
    relations = []
    for lineno, col, expr, off in pending:
        toks = _tokens(expr, off)
        terms = _ExprParser(toks, lineno, amap, pvals).parse()
        for coeff, path, tok in terms:
            _check_path(path, amap, lineno)
        src = None
        for coeff, path, tok in terms:
            st = (_path_source(path, amap), _path_target(path, amap))
            if src is None:
                src = st
            elif st != src:
                raise NonComposableError("terms of a relation have different endpoints",
                                         lineno, tok[2] + 1)
        relations.append(Relation(tuple(terms), lineno, col, expr.strip()))
    return QuiverPresentation(name, fld, tuple(vertices), tuple(arrows), tuple(relations), pvals)


def _check_path(path, amap, lineno):
    # written order a*b*c; application order is c, b, a
    for (left, tok), (right, _) in zip(path, path[1:]):
        if amap[right].target != amap[left].source:
            raise NonComposableError(f"{left}*{right} is not composable", lineno, tok[2] + 1)


def _path_source(path, amap):
    return amap[path[-1][0]].source


def _path_target(path, amap):
    return amap[path[0][0]].target


# ---------------------------------------------------------------------------
# compilation

Path = Tuple[str, Tuple[str, ...]]  # (source vertex, arrows in application order)


@dataclass
class PathBasis:
    """Surviving path monomials and the data needed to reduce any path."""

    presentation: QuiverPresentation
    paths: Tuple[Path, ...]
    nilpotency: int  # every path of this length is zero
    _columns: Dict[Path, int]
    _ideal: list
    _pivots: list
    _basis_cols: Tuple[int, ...]

    def index(self, path: Path) -> int:
        return self.paths.index(path)

    def normal_form(self, path) -> list:
        """Coordinates of a path; ``path`` is ``(vertex, arrows)`` or source text like ``x*y``."""
        pres = self.presentation
        fld = pres.field
        if isinstance(path, str):
            path = _text_path(pres, path)
        v, arrows = path
        amap = {a.label: a for a in pres.arrows}
        cur = v
        for a in arrows:
            if a not in amap:
                raise UnknownArrowError(f"unknown arrow {a!r}")
            if amap[a].source != cur:
                raise NonComposableError(f"path {arrows} is not composable")
            cur = amap[a].target
        out = [fld.zero] * len(self.paths)
        if len(arrows) >= self.nilpotency:
            return out
        col = self._columns[(v, tuple(arrows))]
        vec = [fld.zero] * len(self._columns)
        vec[col] = fld.one
        vec = reduce_against(vec, self._ideal, self._pivots)
        for k, c in enumerate(self._basis_cols):
            out[k] = vec[c]
        return out


def _text_path(pres: QuiverPresentation, text: str) -> Path:
    text = text.strip()
    if text.startswith("e") and text[1:] in pres.vertices or (text == "e" and len(pres.vertices) == 1):
        return (text[1:] or pres.vertices[0], ())
    labels = [t for t in re.split(r"[\s*]+", text) if t]
    amap = {a.label: a for a in pres.arrows}
    for lab in labels:
        if lab not in amap:
            raise UnknownArrowError(f"unknown arrow {lab!r}")
    app = tuple(reversed(labels))
    return (amap[app[0]].source, app)


def _target(path: Path, amap) -> str:
    v, arrows = path
    return amap[arrows[-1]].target if arrows else v


def _order_key(path: Path, vidx, aidx):
    v, arrows = path
    return (len(arrows), vidx[v] if not arrows else -1, tuple(aidx[a] for a in arrows))


def path_label(pres: QuiverPresentation, path: Path) -> str:
    v, arrows = path
    if not arrows:
        return "e" if len(pres.vertices) == 1 else "e" + v
    written = list(reversed(arrows))
    sep = "" if all(len(a.label) == 1 for a in pres.arrows) else "*"
    return sep.join(written)


def _coefficients(pres: QuiverPresentation, rel: Relation):
    out = []
    for coeff, path, tok in rel.terms:
        c = Fraction(1)
        for f in coeff:
            if f[0] == "num":
                c *= f[1]
            else:
                _, name, e, ptok = f
                val = pres.params.get(name)
                if val is None:
                    raise UnboundParameterError(f"parameter {name!r} has no value", rel.line, ptok[2] + 1)
                if val == 0 and e < 0:
                    raise QuiverSyntaxError(f"parameter {name!r} is zero but has a negative power",
                                            rel.line, ptok[2] + 1)
                c *= val ** e
        app = tuple(lab for lab, _ in reversed(path))
        out.append((pres.field(c), app))
    return out


def build_path_algebra(pres: QuiverPresentation, bound: int = 12, max_paths: int = 20000):
    """Compile a presentation to ``(Algebra, PathBasis)``.

    The ideal is spanned inside truncated path spaces of growing length until
    some length ``k`` has every path in the ideal; the quotient basis is then
    the set of standard monomials with respect to (length, arrow order).
    """
    fld = pres.field
    amap = {a.label: a for a in pres.arrows}
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    aidx = {a.label: i for i, a in enumerate(pres.arrows)}
    rels = []
    for rel in pres.relations:
        terms = [(c, (amap[p[0]].source, p)) for c, p in _coefficients(pres, rel)]
        terms = [(c, p) for c, p in terms if c]
        if terms:
            rels.append(terms)

    by_len: List[List[Path]] = [[(v, ()) for v in pres.vertices]]

    def extend_to(n):
        while len(by_len) <= n:
            nxt = []
            for p in by_len[-1]:
                t = _target(p, amap)
                for a in pres.arrows:
                    if a.source == t:
                        nxt.append((p[0], p[1] + (a.label,)))
            by_len.append(nxt)
            if sum(len(x) for x in by_len) > max_paths:
                raise DimensionBlowupError(f"more than {max_paths} paths up to length {len(by_len) - 1}")

    def paths_from(v, n):
        return [p for p in by_len[n] if p[0] == v]

    def paths_to(v, n):
        return [p for p in by_len[n] if _target(p, amap) == v]

    def generators(limit_len, min_len_ok):
        """All u*r*w (application order: w, r, u) with some term of length <= limit."""
        gens = []
        for terms in rels:
            rlens = [len(p[1]) for _, p in terms]
            lo = min(rlens) if min_len_ok else max(rlens)
            src = terms[0][1][0]
            tgt = _target(terms[0][1], amap)
            for lw in range(0, limit_len - lo + 1):
                for w in paths_to(src, lw):
                    for lu in range(0, limit_len - lo - lw + 1):
                        for u in paths_from(tgt, lu):
                            g = []
                            for c, p in terms:
                                g.append((c, (w[0], w[1] + p[1] + u[1])))
                            gens.append(g)
        return gens

    def column_index(limit):
        paths = [p for n in range(limit + 1) for p in by_len[n]]
        paths.sort(key=lambda p: _order_key(p, vidx, aidx), reverse=True)
        return paths, {p: i for i, p in enumerate(paths)}

    def span_ideal(limit, truncate):
        paths, cols = column_index(limit)
        rows = []
        for g in generators(limit, truncate):
            row = [fld.zero] * len(paths)
            for c, p in g:
                if p in cols:
                    row[cols[p]] = row[cols[p]] + c
                elif not truncate:
                    break
            else:
                if any(row):
                    rows.append(row)
        red, piv = rref_rows(rows, len(paths)) if rows else ([], [])
        return paths, cols, red, piv

    def sparse_ideal(limit):
        """Echelon basis of the untruncated ideal up to ``limit`` as sparse rows."""
        _, cols = column_index(limit)
        ech = SparseEchelon()
        for g in generators(limit, False):
            row = {}
            for c, p in g:
                if p not in cols:
                    break
                k = cols[p]
                y = row.get(k, fld.zero) + c
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)
            else:
                if row:
                    ech.add(row)
        return cols, ech

    nil = None
    for ell in range(1, bound + 1):
        extend_to(ell)
        cols, ech = sparse_ideal(ell)
        for k in range(1, ell + 1):
            if all(not ech.reduce({cols[p]: fld.one})[0] for p in by_len[k]):
                nil = k
                break
        if nil is not None:
            break
    if nil is None:
        raise DimensionBlowupError(f"no stabilization up to path length {bound}")

    paths, cols, red, piv = span_ideal(nil - 1, truncate=True)
    pset = set(piv)
    basis_cols = [c for c in range(len(paths)) if c not in pset]
    basis_cols.sort(key=lambda c: _order_key(paths[c], vidx, aidx))
    basis = tuple(paths[c] for c in basis_cols)
    pb = PathBasis(pres, basis, nil, cols, red, piv, tuple(basis_cols))

    n = len(basis)
    mul = []
    for bi in basis:
        row = []
        for bj in basis:
            # bi * bj: apply bj first, then bi
            if _target(bj, amap) != bi[0]:
                row.append([fld.zero] * n)
            else:
                row.append(pb.normal_form((bj[0], bj[1] + bi[1])))
        mul.append(row)
    unit = [fld.zero] * n
    idem = []
    for v in pres.vertices:
        e = [fld.zero] * n
        e[basis.index((v, ()))] = fld.one
        unit[basis.index((v, ()))] = fld.one
        idem.append(e)
    radical = [[fld.one if k == i else fld.zero for k in range(n)]
               for i, p in enumerate(basis) if p[1]]
    labels = [path_label(pres, p) for p in basis]
    alg = Algebra(fld, labels, mul, unit, idem, radical, name=pres.name, paths=basis)
    return alg, pb


def compile_quiver(text: str, params: Optional[Dict[str, object]] = None, bound: int = 12):
    return build_path_algebra(parse_quiver(text, params), bound=bound)


def path_normal_form(basis: PathBasis, path) -> list:
    return basis.normal_form(path)
