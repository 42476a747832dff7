"""Dense exact linear algebra.

Two layers live here. The row-list functions (``rref_rows``,
``kernel_rows`` ...) work on plain lists of field elements and are what the
module code calls in its inner loops. :class:`Matrix` wraps them behind an
immutable value type with field checking.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .field import QQ, Field, FieldMismatchError, FpElement, field_of

try:
    import flint
except ImportError:  # pragma: no cover
    flint = None

# Matrices with at least this many entries go to FLINT when it is installed.
# Set ``BACKEND = "python"`` to force the reference implementation.
FAST_THRESHOLD = 6000
BACKEND = "auto"


def _scalar_kind(rows):
    for r in rows:
        for x in r:
            if isinstance(x, FpElement):
                return x.p
            if x:
                return 0
    return None


def _flint_rref(m, ncols, p):
    mat = _flint_matrix(m, ncols, p)
    if p:
        zero = FpElement(0, p)

        def conv(x):
            return FpElement(int(x), p)
    else:
        zero = Fraction(0)

        def conv(x):
            return Fraction(int(x.p), int(x.q))
    red, rk = mat.rref()
    out, pivots = [], []
    rows = red.tolist()
    for i in range(rk):
        row = rows[i]
        conv_row = [conv(x) if x else zero for x in row]
        for c, x in enumerate(conv_row):
            if x:
                pivots.append(c)
                break
        out.append(conv_row)
    return out, pivots


def _use_flint(m, ncols):
    if flint is None or BACKEND == "python":
        return False
    return BACKEND == "flint" or len(m) * ncols >= FAST_THRESHOLD


# ---------------------------------------------------------------------------
# row-list kernels

def rref_rows(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form of ``rows``; returns ``(nonzero_rows, pivots)``.

    The input is not modified. Large inputs are handed to FLINT; the result
    is identical since rref is canonical.
    """
    m = [list(r) for r in rows]
    if m and ncols and _use_flint(m, ncols):
        p = _scalar_kind(m)
        if p is None:
            return [], []
        return _flint_rref(m, ncols, p)
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            m[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = m[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _flint_matrix(m, ncols, p):
    if p:
        return flint.nmod_mat(len(m), ncols, [x.v if isinstance(x, FpElement) else int(x) % p
                                              for r in m for x in r], p)
    fq = flint.fmpq
    ent = []
    for r in m:
        for x in r:
            if not x:
                ent.append(0)
            elif isinstance(x, Fraction):
                ent.append(fq(x.numerator, x.denominator))
            else:
                ent.append(x)
    return flint.fmpq_mat(len(m), ncols, ent)


def rank_rows(rows: Sequence[Sequence], ncols: int) -> int:
    if rows and ncols and _use_flint(rows, ncols):
        p = _scalar_kind(rows)
        return 0 if p is None else _flint_matrix(rows, ncols, p).rank()
    return len(rref_rows(rows, ncols)[1])


def pivot_columns(rows: Sequence[Sequence], ncols: int):
    """Pivot columns of the rref of ``rows`` without materializing the rref."""
    if rows and ncols and _use_flint(rows, ncols):
        p = _scalar_kind(rows)
        if p is None:
            return []
        red, rk = _flint_matrix(rows, ncols, p).rref()
        out = []
        c = 0
        for i in range(rk):
            while not red[i, c]:
                c += 1
            out.append(c)
        return out
    return rref_rows(rows, ncols)[1]


def kernel_rows(rows: Sequence[Sequence], ncols: int, zero, one):
    """Basis of the null space ``{v : rows . v = 0}``.

    Returns ``(vectors, free)``. Vector ``k`` has a one at ``free[k]`` and
    zeros at the other free positions, so the coordinates of any null vector
    are its entries at ``free``.
    """
    red, pivots = rref_rows(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis, free


# ---------------------------------------------------------------------------
# sparse rows: each row is a dict ``{column: nonzero value}``

def _sparse_flint(rows, ncols, field):
    p = field.characteristic
    if p:
        mat = flint.nmod_mat(len(rows), ncols, p)
        for i, r in enumerate(rows):
            for j, x in r.items():
                mat[i, j] = x.v
    else:
        fq = flint.fmpq
        mat = flint.fmpq_mat(len(rows), ncols)
        for i, r in enumerate(rows):
            for j, x in r.items():
                mat[i, j] = fq(x.numerator, x.denominator)
    return mat


def _from_flint(field):
    p = field.characteristic
    if p:
        return lambda x: FpElement(int(x), p)
    return lambda x: Fraction(int(x.p), int(x.q))


def _densify(rows, ncols, zero):
    out = []
    for r in rows:
        row = [zero] * ncols
        for j, x in r.items():
            row[j] = x
        out.append(row)
    return out


class SparseEchelon:
    """Incremental row echelon basis of sparse vectors.

    Each stored vector has its smallest key as pivot, so reducing a vector
    only ever raises its smallest key. With ``track=True`` every stored
    vector remembers which inputs it combines, which yields null vectors.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.track = track

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict, combo: Optional[dict] = None):
        v = dict(v)
        rows = self.rows
        while v:
            k = min(v)
            if k not in rows:
                break
            b, bc = rows[k]
            f = v[k]
            for j, x in b.items():
                y = v.get(j)
                y = -f * x if y is None else y - f * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
            if combo is not None:
                for j, x in bc.items():
                    y = combo.get(j)
                    y = -f * x if y is None else y - f * x
                    if y:
                        combo[j] = y
                    else:
                        combo.pop(j, None)
        return v, combo

    def add(self, v: dict, label=None, one=None) -> Optional[dict]:
        """Insert ``v``; returns ``None`` if it was new, else the dependency found.

        The dependency is a dict over labels with coefficient one at ``label``.
        """
        combo = {label: one} if self.track else None
        r, combo = self.reduce(v, combo)
        if not r:
            return combo if self.track else {}
        k = min(r)
        inv = 1 / r[k]
        r = {j: x * inv for j, x in r.items()}
        if self.track:
            combo = {j: x * inv for j, x in combo.items()}
        self.rows[k] = (r, combo)
        return None


def _columns_of(rows, ncols):
    cols = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, x in r.items():
            cols[j][i] = x
    return cols


def _sparse_big(rows, ncols):
    if flint is None or BACKEND == "python":
        return False
    if BACKEND == "flint":
        return True
    if len(rows) * ncols < FAST_THRESHOLD:
        return False
    nnz = sum(len(r) for r in rows)
    # very sparse systems stay in Python, where elimination keeps them sparse
    return nnz > 8 * (len(rows) + ncols)


def _flint_pivots(red, rk):
    out = []
    c = 0
    for i in range(rk):
        while not red[i, c]:
            c += 1
        out.append(c)
    return out


def sparse_rank(rows, ncols: int, field) -> int:
    rows = [r for r in rows if r]
    if not rows or not ncols:
        return 0
    if _sparse_big(rows, ncols):
        return _sparse_flint(rows, ncols, field).rank()
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return len(ech)


def independent_indices(vectors, ncols: int, field):
    """Indices of the vectors that are independent of the ones before them."""
    if not vectors:
        return []
    if _sparse_big(vectors, ncols):
        return sparse_pivots(_columns_of(vectors, ncols), len(vectors), field)
    ech = SparseEchelon()
    return [k for k, v in enumerate(vectors) if v and ech.add(v) is None]


def sparse_pivots(rows, ncols: int, field):
    """Pivot columns of the rref of sparse ``rows``."""
    rows = [r for r in rows if r]
    if not rows or not ncols:
        return []
    if _sparse_big(rows, ncols):
        red, rk = _sparse_flint(rows, ncols, field).rref()
        return _flint_pivots(red, rk)
    ech = SparseEchelon()
    return [k for k, c in enumerate(_columns_of(rows, ncols)) if c and ech.add(c) is None]


def sparse_kernel(rows, ncols: int, field):
    """Null space of sparse ``rows`` as sparse vectors, one per free column.

    Same normalization as :func:`kernel_rows`.
    """
    one = field.one
    rows = [r for r in rows if r]
    if not rows:
        return [{f: one} for f in range(ncols)]
    if _sparse_big(rows, ncols):
        red, rk = _sparse_flint(rows, ncols, field).rref()
        pivots = _flint_pivots(red, rk)
        conv = _from_flint(field)
        pivset = set(pivots)
        free = [c for c in range(ncols) if c not in pivset]
        out = [{f: one} for f in free]
        table = red.tolist()
        for i in range(rk):
            row = table[i]
            p = pivots[i]
            for v, f in zip(out, free):
                x = row[f]
                if x:
                    v[p] = -conv(x)
        return out
    ech = SparseEchelon(track=True)
    out = []
    for k, c in enumerate(_columns_of(rows, ncols)):
        dep = ech.add(c, k, one)
        if dep is not None:
            out.append(dep)
    return out


def span_rows(vectors: Sequence[Sequence], ncols: int):
    """Canonical basis of the span of ``vectors`` (rref rows) and its pivots.

    Basis vector ``k`` has a one at ``pivots[k]`` and zeros at the other
    pivots, so coordinates of any vector in the span are read off at the pivots.
    """
    return rref_rows(vectors, ncols)


def reduce_against(v: Sequence, basis: Sequence[Sequence], pivots: Sequence[int]):
    """``v`` minus its projection onto an rref ``basis`` along the pivots."""
    out = list(v)
    for row, p in zip(basis, pivots):
        f = out[p]
        if f:
            for j, x in enumerate(row):
                if x:
                    out[j] = out[j] - f * x
    return out


def matmul_rows(a: Sequence[Sequence], b: Sequence[Sequence], zero):
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [zero] * ncols
        for k in range(inner):
            f = row[k]
            if f:
                bk = b[k]
                for j in range(ncols):
                    x = bk[j]
                    if x:
                        acc[j] = acc[j] + f * x
        out.append(acc)
    return out


def matvec_rows(a: Sequence[Sequence], v: Sequence, zero):
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose_rows(a: Sequence[Sequence], ncols: Optional[int] = None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def solve_rows(a: Sequence[Sequence], ncols: int, rhs: Sequence, zero):
    """One solution ``x`` of ``a x = rhs`` or ``None`` when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(a, rhs)]
    red, pivots = rref_rows(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [zero] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


# ---------------------------------------------------------------------------
# Matrix value type

class Matrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, rows, field: Optional[Field] = None, ncols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        if field is None:
            field = QQ
            for r in rows:
                for x in r:
                    if not isinstance(x, int):
                        field = field_of(x)
                        break
                else:
                    continue
                break
        conv = []
        for r in rows:
            out = []
            for x in r:
                if isinstance(x, int) and not isinstance(x, bool):
                    out.append(field(x))
                elif field.contains(x):
                    out.append(x)
                else:
                    raise FieldMismatchError(f"entry {x!r} is not in {field}")
            conv.append(tuple(out))
        self._set(len(rows), ncols, tuple(conv), field)

    def _set(self, nrows, ncols, rows, field):
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def raw(cls, rows, ncols: int, field: Field) -> "Matrix":
        """Trusted constructor: no conversion or field checks."""
        m = object.__new__(cls)
        m._set(len(rows), ncols, tuple(tuple(r) for r in rows), field)
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        z = field.zero
        return cls.raw([[z] * ncols for _ in range(nrows)], ncols, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls.raw([[o if i == j else z for j in range(n)] for i in range(n)], n, field)

    @classmethod
    def from_columns(cls, cols, nrows: int, field: Field = QQ) -> "Matrix":
        cols = list(cols)
        if not cols:
            return cls.zeros(nrows, 0, field)
        return cls([list(r) for r in zip(*cols)], field, len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int):
        return [r[j] for r in self.rows]

    def columns(self):
        return [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix.raw(transpose_rows(self.rows, self.ncols), self.nrows, self.field)

    def _check(self, other: "Matrix"):
        if other.field is not self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix.raw(matmul_rows(self.rows, other.rows, self.field.zero), other.ncols, self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix.raw([[x + y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)],
                          self.ncols, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix.raw([[-x for x in r] for r in self.rows], self.ncols, self.field)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix.raw([[c * x for x in r] for r in self.rows], self.ncols, self.field)

    def apply(self, v: Sequence):
        return matvec_rows(self.rows, v, self.field.zero)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def flat(self):
        return [x for r in self.rows for x in r]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols} over {self.field}]({body})"

    # linear algebra -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form and the strictly increasing pivot columns."""
        red, piv = rref_rows(self.rows, self.ncols)
        z = self.field.zero
        red = red + [[z] * self.ncols for _ in range(self.nrows - len(red))]
        return Matrix.raw(red, self.ncols, self.field), piv

    def rank(self) -> int:
        return rank_rows(self.rows, self.ncols)

    def kernel(self) -> "Matrix":
        """Matrix whose columns form a basis of the null space."""
        vecs, _ = kernel_rows(self.rows, self.ncols, self.field.zero, self.field.one)
        if not vecs:
            return Matrix.zeros(self.ncols, 0, self.field)
        return Matrix.raw(transpose_rows(vecs), len(vecs), self.field)

    def solve(self, rhs: "Matrix") -> Optional["Matrix"]:
        """A matrix ``X`` with ``self @ X == rhs``, or ``None`` when inconsistent."""
        self._check(rhs)
        if rhs.nrows != self.nrows:
            raise ValueError("shape mismatch")
        cols = []
        for b in rhs.columns():
            x = solve_rows(self.rows, self.ncols, b, self.field.zero)
            if x is None:
                return None
            cols.append(x)
        if not cols:
            return Matrix.zeros(self.ncols, 0, self.field)
        return Matrix.raw(transpose_rows(cols), len(cols), self.field)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def rref(m: Matrix):
    return m.rref()


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel()


def solve(m: Matrix, rhs: Matrix) -> Optional[Matrix]:
    return m.solve(rhs)
