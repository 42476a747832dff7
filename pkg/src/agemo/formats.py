"""Plain-text algebra tables.

::

    algebra NAME
    field Q
    basis e x y
    unit 1 0 0
    mul x y = 0 0 1        # omitted products are zero
    idempotent 1 0 0       # one line per idempotent, or: idempotents e
    radical 0 1 0          # one line per vector, or: radical x y

``mul`` accepts basis labels or 0-based indices. Serialization is canonical,
so equal tables give identical bytes.
"""

from __future__ import annotations

from .algebra import Algebra
from .field import parse_field, parse_rational


class TableFormatError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _coords(a: Algebra, v) -> str:
    return " ".join(str(x) for x in v)


def serialize_algebra(a: Algebra) -> str:
    lines = [f"algebra {a.name}", f"field {a.field.name}", "basis " + " ".join(a.labels),
             "unit " + _coords(a, a.unit)]
    for i in range(a.dim):
        for j in range(a.dim):
            v = a.mul[i][j]
            if any(v):
                lines.append(f"mul {a.labels[i]} {a.labels[j]} = {_coords(a, v)}")
    for e in a.idempotents:
        lines.append("idempotent " + _coords(a, e))
    if a.radical_supplied:
        for r in a.radical_basis().rows:
            lines.append("radical " + _coords(a, r))
        if a.radical_basis().nrows == 0:
            lines.append("radical")
    return "\n".join(lines) + "\n"


def parse_algebra_table(text: str) -> Algebra:
    name = "A"
    fld = None
    labels = None
    unit = None
    prods = {}
    idem = []
    idem_labels = None
    radical = None
    rad_labels = None

    def vec(tokens, lineno):
        if labels is None:
            raise TableFormatError("basis must come first", lineno)
        if len(tokens) != len(labels):
            raise TableFormatError(f"expected {len(labels)} coordinates, got {len(tokens)}", lineno)
        try:
            return [fld(parse_rational(t)) for t in tokens]
        except (ValueError, ZeroDivisionError) as exc:
            raise TableFormatError(str(exc), lineno) from None

    def index(tok, lineno):
        if tok in labels:
            return labels.index(tok)
        if tok.isdigit() and int(tok) < len(labels):
            return int(tok)
        raise TableFormatError(f"unknown basis element {tok!r}", lineno)

    def is_coords(tokens):
        if len(tokens) != len(labels):
            return False
        try:
            for t in tokens:
                parse_rational(t)
        except ValueError:
            return False
        return True

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head, rest = toks[0], toks[1:]
        if head == "algebra":
            name = " ".join(rest) or name
        elif head == "field":
            try:
                fld = parse_field(" ".join(rest))
            except ValueError as exc:
                raise TableFormatError(str(exc), lineno) from None
        elif head == "basis":
            if fld is None:
                raise TableFormatError("field must come before basis", lineno)
            labels = rest
        elif head == "unit":
            unit = vec(rest, lineno)
        elif head == "mul":
            if labels is None:
                raise TableFormatError("basis must come first", lineno)
            if len(rest) < 3 or rest[2] != "=":
                raise TableFormatError("expected 'mul I J = COORDS'", lineno)
            prods[(index(rest[0], lineno), index(rest[1], lineno))] = vec(rest[3:], lineno)
        elif head == "idempotent":
            idem.append(vec(rest, lineno))
        elif head == "idempotents":
            if labels is None:
                raise TableFormatError("basis must come first", lineno)
            if is_coords(rest):
                idem.append(vec(rest, lineno))
            else:
                idem_labels = [index(t, lineno) for t in rest]
        elif head == "radical":
            if labels is None:
                raise TableFormatError("basis must come first", lineno)
            radical = radical or []
            if rest and is_coords(rest):
                radical.append(vec(rest, lineno))
            else:
                rad_labels = (rad_labels or []) + [index(t, lineno) for t in rest]
        else:
            raise TableFormatError(f"unknown directive {head!r}", lineno)
    if labels is None:
        raise TableFormatError("missing basis")
    n = len(labels)
    z = fld.zero
    if unit is None:
        raise TableFormatError("missing unit")

    def basis_vec(i):
        return [fld.one if k == i else z for k in range(n)]

    if idem_labels is not None:
        idem.extend(basis_vec(i) for i in idem_labels)
    if rad_labels is not None:
        radical.extend(basis_vec(i) for i in rad_labels)
    mul = [[prods.get((i, j), [z] * n) for j in range(n)] for i in range(n)]
    return Algebra(fld, labels, mul, unit, idem or [unit], radical, name=name)
