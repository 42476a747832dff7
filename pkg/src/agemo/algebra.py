"""Finite-dimensional algebras given by structure constants."""

from __future__ import annotations

from typing import Optional, Sequence

from .field import Field
from .linalg import (
    Matrix,
    kernel_rows,
    rank_rows,
    reduce_against,
    rref_rows,
    span_rows,
)


class AlgebraError(ValueError):
    pass


class SmallCharacteristicError(AlgebraError):
    """Trace-form radical requested where the characteristic is too small."""


class RadicalError(AlgebraError):
    """The trace-form kernel is not a nilpotent ideal, so the input is bad."""


class Algebra:
    """An associative unital algebra with a fixed basis.

    ``mul[i][j]`` is the coordinate vector of ``basis[i] * basis[j]``.
    ``idempotents`` is a complete list of primitive orthogonal idempotents and
    ``radical`` (optional) a list of coordinate vectors spanning the Jacobson
    radical. When ``radical`` is ``None`` it is computed from the trace form.
    """

    def __init__(
        self,
        field: Field,
        labels: Sequence[str],
        mul,
        unit: Sequence,
        idempotents: Sequence[Sequence],
        radical: Optional[Sequence[Sequence]] = None,
        name: str = "A",
        paths=None,
    ):
        n = len(labels)
        if len(set(labels)) != n:
            raise AlgebraError("basis labels must be distinct")
        if len(mul) != n or any(len(row) != n for row in mul):
            raise AlgebraError("multiplication table must be n x n")
        self.field = field
        self.name = name
        self.labels = tuple(labels)
        self.dim = n
        self.mul = tuple(tuple(tuple(field(c) for c in mul[i][j]) for j in range(n)) for i in range(n))
        for i in range(n):
            for j in range(n):
                if len(self.mul[i][j]) != n:
                    raise AlgebraError(f"product {labels[i]}*{labels[j]} has wrong length")
        self.unit = tuple(field(c) for c in unit)
        self.idempotents = tuple(tuple(field(c) for c in e) for e in idempotents)
        self.radical_supplied = radical is not None
        self._radical = None if radical is None else tuple(tuple(field(c) for c in r) for r in radical)
        # paths[i] is the path monomial behind basis element i (quiver algebras only)
        self.paths = paths
        self._op: Optional[Algebra] = None
        self._cache: dict = {}

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, field={self.field})"

    # elements ------------------------------------------------------------

    def basis_vector(self, i: int):
        z, o = self.field.zero, self.field.one
        return [o if k == i else z for k in range(self.dim)]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def element(self, **coeffs):
        """Coordinates of a linear combination given by label keywords."""
        v = [self.field.zero] * self.dim
        for lab, c in coeffs.items():
            v[self.index(lab)] = self.field(c)
        return v

    def multiply(self, a: Sequence, b: Sequence):
        n = self.dim
        out = [self.field.zero] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                c = a[i] * b[j]
                for k, x in enumerate(self.mul[i][j]):
                    if x:
                        out[k] = out[k] + c * x
        return out

    def left_mult(self, a: Sequence) -> Matrix:
        """Matrix of ``v -> a*v`` (columns are images of basis vectors)."""
        cols = [self.multiply(a, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim, self.field)

    def right_mult(self, a: Sequence) -> Matrix:
        """Matrix of ``v -> v*a``."""
        cols = [self.multiply(self.basis_vector(j), a) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim, self.field)

    def left_regular_actions(self):
        """``L(b_i)`` for every basis element, cached."""
        if "L" not in self._cache:
            n = self.dim
            z = self.field.zero
            acts = []
            for i in range(n):
                rows = [[z] * n for _ in range(n)]
                for j in range(n):
                    for k, x in enumerate(self.mul[i][j]):
                        rows[k][j] = x
                acts.append(Matrix.raw(rows, n, self.field))
            self._cache["L"] = tuple(acts)
        return self._cache["L"]

    def right_regular_actions(self):
        """``R(b_i)`` for every basis element, cached."""
        if "R" not in self._cache:
            self._cache["R"] = self.opposite().left_regular_actions()
        return self._cache["R"]

    def combine(self, mats: Sequence[Matrix], a: Sequence) -> Matrix:
        """``sum_i a_i * mats[i]``."""
        size = mats[0].nrows
        ncols = mats[0].ncols
        z = self.field.zero
        rows = [[z] * ncols for _ in range(size)]
        for c, m in zip(a, mats):
            if not c:
                continue
            for r, mr in zip(rows, m.rows):
                for j, x in enumerate(mr):
                    if x:
                        r[j] = r[j] + c * x
        return Matrix.raw(rows, ncols, self.field)

    # structure -----------------------------------------------------------

    def opposite(self) -> "Algebra":
        """The opposite algebra; ``a.opposite().opposite() is a``."""
        if self._op is None:
            n = self.dim
            mul = [[self.mul[j][i] for j in range(n)] for i in range(n)]
            op = Algebra(self.field, self.labels, mul, self.unit, self.idempotents,
                         self._radical, name=self.name + "^op", paths=self.paths)
            op.radical_supplied = self.radical_supplied
            op._op = self
            self._op = op
        return self._op

    def trace_form(self) -> Matrix:
        """Gram matrix of ``(a, b) -> trace(L(a*b))`` on the basis."""
        n = self.dim
        z = self.field.zero
        tr = []
        for l in range(n):
            t = z
            for k in range(n):
                t = t + self.mul[l][k][k]
            tr.append(t)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                s = z
                for l, x in enumerate(self.mul[i][j]):
                    if x and tr[l]:
                        s = s + x * tr[l]
                row.append(s)
            rows.append(row)
        return Matrix.raw(rows, n, self.field)

    def radical_basis(self) -> Matrix:
        """Basis of the Jacobson radical, one vector per row.

        The supplied radical is returned when present. Otherwise the kernel of
        the trace form is computed (valid in characteristic 0 or ``p > dim``)
        and checked to be a nilpotent two-sided ideal.
        """
        if self._radical is not None:
            rows = [list(r) for r in self._radical]
            return Matrix.raw(rows, self.dim, self.field) if rows else Matrix.zeros(0, self.dim, self.field)
        if "rad" not in self._cache:
            p = self.field.characteristic
            if p and p <= self.dim:
                raise SmallCharacteristicError(
                    f"trace-form radical needs characteristic 0 or > {self.dim}; supply the radical")
            vecs, _ = kernel_rows(self.trace_form().rows, self.dim, self.field.zero, self.field.one)
            red, _ = span_rows(vecs, self.dim)
            problems = self._ideal_problems(red)
            if problems:
                raise RadicalError("; ".join(problems))
            self._cache["rad"] = red
        red = self._cache["rad"]
        return Matrix.raw(red, self.dim, self.field) if red else Matrix.zeros(0, self.dim, self.field)

    def _ideal_problems(self, rad_rows) -> list:
        problems = []
        n = self.dim
        red, piv = span_rows(rad_rows, n)
        for r in red:
            for j in range(n):
                b = self.basis_vector(j)
                for prod in (self.multiply(r, b), self.multiply(b, r)):
                    if any(reduce_against(prod, red, piv)):
                        problems.append("radical is not a two-sided ideal")
                        break
                if problems:
                    break
            if problems:
                break
        power = red
        for _ in range(n + 1):
            if not power:
                break
            prods = [self.multiply(a, b) for a in power for b in red]
            power, _ = span_rows(prods, n) if prods else ([], [])
        if power:
            problems.append("radical is not nilpotent")
        return problems

    def radical_power_dims(self) -> list:
        """Dimensions of rad^1, rad^2, ... until zero."""
        red = [list(r) for r in self.radical_basis().rows]
        dims = []
        power = red
        while power:
            dims.append(len(power))
            prods = [self.multiply(a, b) for a in power for b in red]
            power, _ = span_rows(prods, self.dim) if prods else ([], [])
            if len(dims) > self.dim:
                break
        return dims

    def validate(self) -> list:
        """List of violated invariants; empty iff the algebra is valid."""
        report = []
        n = self.dim
        field = self.field
        L = self.left_regular_actions()
        # (b_i b_j) b_k == b_i (b_j b_k)
        for i in range(n):
            for j in range(n):
                lhs_left = self.mul[i][j]
                for k in range(n):
                    lhs = [field.zero] * n
                    for l, c in enumerate(lhs_left):
                        if c:
                            for t, x in enumerate(self.mul[l][k]):
                                if x:
                                    lhs[t] = lhs[t] + c * x
                    rhs = L[i].apply(self.mul[j][k])
                    if lhs != rhs:
                        report.append(
                            f"associativity fails at ({self.labels[i]},{self.labels[j]},{self.labels[k]})")
        u = list(self.unit)
        for i in range(n):
            b = self.basis_vector(i)
            if self.multiply(u, b) != b or self.multiply(b, u) != b:
                report.append(f"unit is not two-sided on {self.labels[i]}")
                break
        idem = [list(e) for e in self.idempotents]
        if not idem:
            report.append("no idempotents supplied")
        total = [field.zero] * n
        for a, e in enumerate(idem):
            total = [x + y for x, y in zip(total, e)]
            if self.multiply(e, e) != e:
                report.append(f"idempotent #{a} is not idempotent")
            for b_, f in enumerate(idem):
                if a != b_ and any(self.multiply(e, f)):
                    report.append(f"idempotents #{a} and #{b_} are not orthogonal")
        if idem and total != u:
            report.append("idempotents do not sum to the unit")
        try:
            rad = [list(r) for r in self.radical_basis().rows]
        except AlgebraError as exc:
            report.append(f"radical: {exc}")
            return report
        if self.radical_supplied:
            report.extend(self._ideal_problems(rad))
        quotient_dim = n - rank_rows(rad, n) if rad else n
        if idem and quotient_dim != len(idem):
            report.append(
                f"not split basic: dim A/rad = {quotient_dim} but {len(idem)} idempotents")
        if not self._quotient_semisimple(rad):
            report.append("A/rad fails the trace-form semisimplicity test")
        return report

    def _quotient_semisimple(self, rad) -> bool:
        n = self.dim
        red, piv = rref_rows(rad, n) if rad else ([], [])
        pset = set(piv)
        comp = [c for c in range(n) if c not in pset]
        m = len(comp)
        if m == 0:
            return True
        p = self.field.characteristic
        if p and p <= m:
            return True  # test not applicable; radical came from input
        # structure constants of the quotient on the complement basis
        consts = []
        for a in comp:
            row = []
            for b in comp:
                prod = reduce_against(self.mul[a][b], red, piv)
                row.append([prod[c] for c in comp])
            consts.append(row)
        tr = []
        for l in range(m):
            t = self.field.zero
            for k in range(m):
                t = t + consts[l][k][k]
            tr.append(t)
        gram = []
        for i in range(m):
            gram.append([sum((x * tr[l] for l, x in enumerate(consts[i][j]) if x), self.field.zero)
                         for j in range(m)])
        return rank_rows(gram, m) == m

    def is_valid(self) -> bool:
        return not self.validate()

    def table_bytes(self) -> bytes:
        """Canonical byte form of the table (used for hashing and golden tests)."""
        from .formats import serialize_algebra

        return serialize_algebra(self).encode()


def validate_algebra(a: Algebra) -> list:
    return a.validate()


def opposite(a: Algebra) -> Algebra:
    return a.opposite()


def radical_basis(a: Algebra) -> Matrix:
    return a.radical_basis()
