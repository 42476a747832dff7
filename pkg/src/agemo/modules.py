"""Sided modules given by action matrices, and the linear algebra around them.

A right ``A``-module is stored with the same matrices as the left
``A^op``-module it is; ``Module.ring`` is the algebra acting on the left in
that sense, and every algorithm here only ever talks to ``ring``.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import Algebra
from .config import DEFAULT_ISO_ATTEMPTS, DEFAULT_SEED
from .linalg import (
    Matrix,
    kernel_rows,
    matmul_rows,
    matvec_rows,
    rank_rows,
    reduce_against,
    rref_rows,
    sparse_kernel,
)

LEFT = "left"
RIGHT = "right"


class ModuleError(ValueError):
    pass


def _flip(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


class Module:
    """A finite-dimensional module.

    ``actions[i]`` is the matrix of the basis element ``b_i`` of ``algebra``
    acting on column vectors. For right modules ``v.b_i`` is written
    ``actions[i] @ v``, so ``act(a*b) = act(b) @ act(a)``.
    """

    def __init__(self, algebra: Algebra, side: str, actions: Sequence[Matrix], name: Optional[str] = None,
                 check: bool = True):
        if side not in (LEFT, RIGHT):
            raise ModuleError(f"side must be 'left' or 'right', not {side!r}")
        if len(actions) != algebra.dim:
            raise ModuleError("need one action matrix per algebra basis element")
        self.algebra = algebra
        self.side = side
        self.actions = tuple(actions)
        self.dim = actions[0].nrows if actions else 0
        self.field = algebra.field
        self.name = name
        self._cache: dict = {}
        if check:
            problems = self.validate()
            if problems:
                raise ModuleError("; ".join(problems))

    @property
    def ring(self) -> Algebra:
        return self.algebra if self.side == LEFT else self.algebra.opposite()

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<{self.side} module{label} dim={self.dim} over {self.algebra.name}>"

    def act(self, a: Sequence) -> Matrix:
        if self.dim == 0:
            return Matrix.zeros(0, 0, self.field)
        return self.ring.combine(self.actions, a)

    def validate(self) -> list:
        problems = []
        d = self.dim
        for k, m in enumerate(self.actions):
            if m.shape != (d, d):
                return [f"action {k} has shape {m.shape}, expected {(d, d)}"]
            if m.field is not self.field:
                return [f"action {k} is over {m.field}, algebra over {self.field}"]
        if d == 0:
            return problems
        ring = self.ring
        if self.act(ring.unit) != Matrix.identity(d, self.field):
            problems.append("unit does not act as the identity")
        for i in range(ring.dim):
            for j in range(ring.dim):
                lhs = self.actions[i] @ self.actions[j]
                rhs = self.act(ring.mul[i][j])
                if lhs != rhs:
                    problems.append(
                        f"action is not multiplicative at ({ring.labels[i]},{ring.labels[j]})")
                    return problems
        return problems

    def key(self) -> bytes:
        """Canonical bytes of the action matrices (basis dependent)."""
        parts = [self.side, str(self.dim)]
        for m in self.actions:
            parts.append(",".join(str(x) for x in m.flat()))
        return "|".join(parts).encode()

    def digest(self) -> str:
        return hashlib.sha256(self.key()).hexdigest()[:8]

    def renamed(self, name: str) -> "Module":
        m = Module(self.algebra, self.side, self.actions, name, check=False)
        m._cache = self._cache
        return m

    def dimension_vector(self) -> Tuple[int, ...]:
        return tuple(self.act(e).rank() if self.dim else 0 for e in self.ring.idempotents)


class ModuleMap:
    """A homomorphism; ``matrix`` has shape ``(codomain.dim, domain.dim)``."""

    def __init__(self, domain: Module, codomain: Module, matrix: Matrix, check: bool = True):
        if domain.ring is not codomain.ring or domain.side != codomain.side:
            raise ModuleError("maps need modules of the same side over the same algebra")
        if matrix.shape != (codomain.dim, domain.dim):
            raise ModuleError(f"matrix shape {matrix.shape} != {(codomain.dim, domain.dim)}")
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        if check and not self.is_homomorphism():
            raise ModuleError("matrix does not intertwine the actions")

    def is_homomorphism(self) -> bool:
        if self.domain.dim == 0 or self.codomain.dim == 0:
            return True
        f = self.matrix
        return all(f @ a == b @ f for a, b in zip(self.domain.actions, self.codomain.actions))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.domain, self.codomain, _mm(self.matrix, other.matrix, other.domain.dim), check=False)

    def rank(self) -> int:
        return self.matrix.rank()

    def is_injective(self) -> bool:
        return self.rank() == self.domain.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.codomain.dim

    def is_isomorphism(self) -> bool:
        return self.domain.dim == self.codomain.dim and self.is_injective()

    def __repr__(self):
        return f"<map {self.domain!r} -> {self.codomain!r}>"


def _mm(a: Matrix, b: Matrix, ncols: int) -> Matrix:
    if a.nrows == 0 or b.ncols == 0 or a.ncols == 0:
        return Matrix.zeros(a.nrows, ncols, a.field)
    return a @ b


def _cols_matrix(cols, nrows, field) -> Matrix:
    if not cols:
        return Matrix.zeros(nrows, 0, field)
    return Matrix.raw([list(r) for r in zip(*cols)], len(cols), field) if nrows else Matrix.zeros(0, len(cols), field)


# ---------------------------------------------------------------------------
# basic modules

def regular_module(a: Algebra, side: str = LEFT) -> Module:
    """``A`` acting on itself from the given side."""
    key = ("regular", side)
    if key not in a._cache:
        ring = a if side == LEFT else a.opposite()
        m = Module(a, side, ring.left_regular_actions(), name="A" if side == LEFT else "A_A", check=False)
        a._cache[key] = m
    return a._cache[key]


def zero_module(a: Algebra, side: str = LEFT) -> Module:
    return Module(a, side, [Matrix.zeros(0, 0, a.field)] * a.dim, name="0", check=False)


def simple_module(a: Algebra, vertex: int = 0, side: str = LEFT) -> Module:
    """The simple top of the projective at idempotent ``vertex`` (basic algebras)."""
    ring = a if side == LEFT else a.opposite()
    e = ring.idempotents[vertex]
    acts = []
    for i in range(a.dim):
        b = ring.basis_vector(i)
        # b acts on the simple through its e-e corner modulo the radical
        c = ring.multiply(ring.multiply(e, b), e)
        coeff = _idempotent_coefficient(ring, c, e)
        acts.append(Matrix.raw([[coeff]], 1, a.field))
    return Module(a, side, acts, name=f"S{vertex}" if len(ring.idempotents) > 1 else "k")


def _idempotent_coefficient(ring: Algebra, c, e):
    rad = [list(r) for r in ring.radical_basis().rows]
    red, piv = rref_rows(rad, ring.dim) if rad else ([], [])
    rc = reduce_against(c, red, piv)
    re_ = reduce_against(list(e), red, piv)
    for x, y in zip(rc, re_):
        if y:
            return x / y
    return ring.field.zero


def module_from_arrows(a: Algebra, dim: int, images: dict, vertex_dims: Optional[dict] = None,
                       name: Optional[str] = None) -> Module:
    """Left module over a compiled quiver algebra from its arrow matrices.

    ``images`` maps arrow labels to ``dim x dim`` row lists. For several
    vertices ``vertex_dims`` gives the consecutive block sizes per vertex.
    """
    if a.paths is None:
        raise ModuleError("algebra was not compiled from a quiver")
    fld = a.field
    verts = []
    for v, arrows in a.paths:
        if not arrows and v not in verts:
            verts.append(v)
    blocks = {}
    off = 0
    for v in verts:
        size = dim if len(verts) == 1 else (vertex_dims or {}).get(v, 0)
        blocks[v] = (off, off + size)
        off += size
    if off != dim:
        raise ModuleError("vertex block sizes do not add up to the dimension")
    z = fld.zero
    E = {}
    for v, (lo, hi) in blocks.items():
        E[v] = Matrix.raw([[fld.one if r == c and lo <= r < hi else z for c in range(dim)]
                           for r in range(dim)], dim, fld)
    arrows = {lab: Matrix(rows, fld, dim) for lab, rows in images.items()}
    acts = []
    for v, path in a.paths:
        m = E[v]
        for lab in path:
            if lab not in arrows:
                arrows[lab] = Matrix.zeros(dim, dim, fld)
            m = arrows[lab] @ m
        acts.append(m)
    return Module(a, LEFT, acts, name=name)


# ---------------------------------------------------------------------------
# hom spaces

def _hom_kernel(M: Module, N: Module):
    """Kernel vectors (flattened n x m matrices) of the intertwining system."""
    if M.ring is not N.ring or M.side != N.side:
        raise ModuleError("Hom needs modules of the same side over the same algebra")
    cached = M._cache.get(("hom", id(N)))
    if cached is not None and cached[0] is N:
        return cached[1], cached[2]
    m, n = M.dim, N.dim
    fld = M.field
    z = fld.zero
    nv = n * m
    if nv == 0:
        return [], []
    # one sparse equation per entry of A_i F - F B_i (F is n x m, flattened by rows)
    rows: list = []
    for A, B in zip(M.actions, N.actions):
        A, B = A.rows, B.rows
        for r in range(n):
            Br = B[r]
            for c in range(m):
                row: dict = {}
                for k in range(m):
                    x = A[k][c]
                    if x:
                        row[r * m + k] = row.get(r * m + k, z) + x
                for k in range(n):
                    x = Br[k]
                    if x:
                        row[k * m + c] = row.get(k * m + c, z) - x
                row = {j: x for j, x in row.items() if x}
                if row:
                    rows.append(row)
    kern = sparse_kernel(rows, nv, fld)
    kern.sort(key=max)
    free = [max(v) for v in kern]
    vecs = []
    for v in kern:
        dense = [z] * nv
        for j, x in v.items():
            dense[j] = x
        vecs.append(dense)
    M._cache[("hom", id(N))] = (N, vecs, free)
    return vecs, free


def _unflatten(v, n, m, fld) -> Matrix:
    return Matrix.raw([list(v[r * m:(r + 1) * m]) for r in range(n)], m, fld)


def hom_basis(M: Module, N: Module) -> List[ModuleMap]:
    """rref-canonical basis of ``Hom(M, N)``."""
    vecs, _ = _hom_kernel(M, N)
    return [ModuleMap(M, N, _unflatten(v, N.dim, M.dim, M.field), check=False) for v in vecs]


def hom_dim(M: Module, N: Module) -> int:
    return len(_hom_kernel(M, N)[0])


def hom_coordinates(M: Module, N: Module, f: Matrix):
    """Coordinates of a homomorphism in :func:`hom_basis`."""
    _, free = _hom_kernel(M, N)
    flat = f.flat()
    return [flat[p] for p in free]


def end_algebra_basis(M: Module) -> List[Matrix]:
    return [h.matrix for h in hom_basis(M, M)]


# ---------------------------------------------------------------------------
# duality

def dual(M: Module) -> Module:
    """``Hom(M, A)`` with the induced action on the opposite side."""
    if "dual" in M._cache:
        return M._cache["dual"]
    ring = M.ring
    R = regular_module(M.algebra, M.side)
    vecs, free = _hom_kernel(M, R)
    d = len(vecs)
    fld = M.field
    n, m = R.dim, M.dim
    acts = []
    right = ring.right_regular_actions()
    for i in range(ring.dim):
        cols = []
        Ri = right[i].rows
        for v in vecs:
            F = [v[r * m:(r + 1) * m] for r in range(n)]
            G = matmul_rows(Ri, F, fld.zero)
            flat = [x for row in G for x in row]
            cols.append([flat[p] for p in free])
        acts.append(_cols_matrix(cols, d, fld) if d else Matrix.zeros(0, 0, fld))
    name = f"{M.name}*" if M.name else None
    D = Module(M.algebra, _flip(M.side), acts, name=name, check=False)
    M._cache["dual"] = D
    return D


def dual_map(f: ModuleMap) -> ModuleMap:
    """``f* : Y* -> X*``, ``g -> g o f``."""
    X, Y = f.domain, f.codomain
    R = regular_module(X.algebra, X.side)
    vy, _ = _hom_kernel(Y, R)
    _, fx = _hom_kernel(X, R)
    fld = X.field
    n = R.dim
    cols = []
    for v in vy:
        G = [v[r * Y.dim:(r + 1) * Y.dim] for r in range(n)]
        H = matmul_rows(G, f.matrix.rows, fld.zero) if Y.dim else [[fld.zero] * X.dim for _ in range(n)]
        flat = [x for row in H for x in row]
        cols.append([flat[p] for p in fx])
    DX, DY = dual(X), dual(Y)
    return ModuleMap(DY, DX, _cols_matrix(cols, DX.dim, fld), check=False)


def eval_map(M: Module) -> ModuleMap:
    """The evaluation ``phi_M : M -> M**``, ``phi(m)(f) = f(m)``."""
    if "eval" in M._cache:
        return M._cache["eval"]
    D = dual(M)
    DD = dual(D)
    R = regular_module(M.algebra, M.side)
    vecs, _ = _hom_kernel(M, R)
    Rop = regular_module(D.algebra, D.side)
    _, free2 = _hom_kernel(D, Rop)
    fld = M.field
    n, m = R.dim, M.dim
    cols = []
    for j in range(m):
        # column k of phi(m_j) is f_k(m_j) = column j of F_k
        img = [[v[r * m + j] for v in vecs] for r in range(n)]
        flat = [x for row in img for x in row]
        cols.append([flat[p] for p in free2])
    phi = ModuleMap(M, DD, _cols_matrix(cols, DD.dim, fld), check=False)
    M._cache["eval"] = phi
    return phi


def torsion_part(M: Module) -> Matrix:
    """Basis (columns) of ``K M``, the kernel of the evaluation map."""
    return eval_map(M).matrix.kernel()


def torsion_part_via_homs(M: Module) -> Matrix:
    """``K M`` as the common kernel of all maps ``M -> A`` (second route)."""
    R = regular_module(M.algebra, M.side)
    rows = []
    for h in hom_basis(M, R):
        rows.extend(h.matrix.rows)
    if not rows:
        return Matrix.identity(M.dim, M.field)
    return Matrix.raw(rows, M.dim, M.field).kernel()


def is_torsionless(M: Module) -> bool:
    return eval_map(M).is_injective()


def is_reflexive(M: Module) -> bool:
    return eval_map(M).is_isomorphism()


# ---------------------------------------------------------------------------
# sub and quotient constructions

def _restrict(M: Module, basis_rows, coords_at) -> Module:
    """Submodule spanned by ``basis_rows``; coordinates read at ``coords_at``."""
    fld = M.field
    k = len(basis_rows)
    acts = []
    for A in M.actions:
        cols = []
        for v in basis_rows:
            w = matvec_rows(A.rows, v, fld.zero)
            cols.append([w[p] for p in coords_at])
        acts.append(_cols_matrix(cols, k, fld) if k else Matrix.zeros(0, 0, fld))
    return Module(M.algebra, M.side, acts, check=False)


def kernel_module(f: ModuleMap):
    """``(Ker f, inclusion)``."""
    M = f.domain
    fld = M.field
    if M.dim == 0:
        K = zero_module(M.algebra, M.side)
        return K, ModuleMap(K, M, Matrix.zeros(0, 0, fld), check=False)
    vecs, free = kernel_rows(f.matrix.rows, M.dim, fld.zero, fld.one)
    K = _restrict(M, vecs, free)
    return K, ModuleMap(K, M, _cols_matrix(vecs, M.dim, fld), check=False)


def _subspace(M: Module, vectors):
    vectors = [list(v) for v in vectors]
    for v in vectors:
        if len(v) != M.dim:
            raise ModuleError("vector is not in the carrier")
    red, piv = rref_rows(vectors, M.dim) if vectors else ([], [])
    return red, piv


def submodule_from_subspace(M: Module, vectors, check: bool = True):
    """Submodule with the rref basis of ``span(vectors)``, which must be invariant."""
    red, piv = _subspace(M, vectors)
    if check:
        for A in M.actions:
            for v in red:
                if any(reduce_against(matvec_rows(A.rows, v, M.field.zero), red, piv)):
                    raise ModuleError("subspace is not a submodule")
    S = _restrict(M, red, piv)
    return S, ModuleMap(S, M, _cols_matrix(red, M.dim, M.field), check=False)


def submodule_generated(M: Module, vectors):
    """``(A.vectors, inclusion)``."""
    red, piv = _subspace(M, vectors)
    fld = M.field
    frontier = list(red)
    while frontier:
        new = []
        for v in frontier:
            for A in M.actions:
                w = matvec_rows(A.rows, v, fld.zero)
                r = reduce_against(w, red, piv)
                if any(r):
                    red, piv = rref_rows(red + [r], M.dim)
                    new.append(r)
        frontier = new
    return submodule_from_subspace(M, red, check=False)


def image_module(f: ModuleMap):
    """``(Im f, inclusion)``."""
    cols = f.matrix.columns() if f.matrix.nrows else []
    return submodule_from_subspace(f.codomain, cols, check=False)


def quotient_module(M: Module, vectors):
    """``(M / span(vectors), projection)``; the span must be a submodule."""
    red, piv = _subspace(M, vectors)
    fld = M.field
    pset = set(piv)
    comp = [c for c in range(M.dim) if c not in pset]
    acts = []
    for A in M.actions:
        cols = []
        for c in comp:
            w = [row[c] for row in A.rows]
            w = reduce_against(w, red, piv)
            cols.append([w[p] for p in comp])
        acts.append(_cols_matrix(cols, len(comp), fld) if comp else Matrix.zeros(0, 0, fld))
    Q = Module(M.algebra, M.side, acts, check=False)
    proj_cols = []
    for j in range(M.dim):
        e = [fld.one if k == j else fld.zero for k in range(M.dim)]
        w = reduce_against(e, red, piv)
        proj_cols.append([w[p] for p in comp])
    return Q, ModuleMap(M, Q, _cols_matrix(proj_cols, len(comp), fld), check=False)


def cokernel_module(f: ModuleMap):
    """``(Coker f, projection)``."""
    cols = f.matrix.columns() if f.matrix.nrows else []
    return quotient_module(f.codomain, cols)


def direct_sum(ms: Sequence[Module]):
    """``(M_1 + ... + M_k, injections, projections)``."""
    if not ms:
        raise ModuleError("empty direct sum")
    first = ms[0]
    fld = first.field
    for m in ms:
        if m.ring is not first.ring or m.side != first.side:
            raise ModuleError("summands must share side and algebra")
    total = sum(m.dim for m in ms)
    z = fld.zero
    acts = []
    for i in range(first.algebra.dim):
        rows = [[z] * total for _ in range(total)]
        off = 0
        for m in ms:
            for r, row in enumerate(m.actions[i].rows):
                rows[off + r][off:off + m.dim] = list(row)
            off += m.dim
        acts.append(Matrix.raw(rows, total, fld))
    S = Module(first.algebra, first.side, acts, check=False)
    inj, proj = [], []
    off = 0
    for m in ms:
        E = [[fld.one if r == off + c else z for c in range(m.dim)] for r in range(total)]
        inj.append(ModuleMap(m, S, Matrix.raw(E, m.dim, fld), check=False))
        Pm = [[fld.one if c == off + r else z for c in range(total)] for r in range(m.dim)]
        proj.append(ModuleMap(S, m, Matrix.raw(Pm, total, fld), check=False))
        off += m.dim
    return S, inj, proj


def radical_of_module(M: Module):
    """``(rad(A) M, inclusion)``."""
    ring = M.ring
    fld = M.field
    vecs = []
    for r in ring.radical_basis().rows:
        A = M.act(r)
        vecs.extend(A.columns() if M.dim else [])
    return submodule_from_subspace(M, vecs, check=False)


def top(M: Module):
    """``(M / rad M, projection)``."""
    R, inc = radical_of_module(M)
    return quotient_module(M, inc.matrix.columns() if inc.matrix.nrows and inc.matrix.ncols else [])


# ---------------------------------------------------------------------------
# projectives

@dataclass
class ProjectiveIndecomposable:
    vertex: int
    module: Module
    basis: list  # basis vectors as elements of the ring (coordinates)
    generator: int  # index of the idempotent inside ``basis``


def projective_at(a: Algebra, vertex: int, side: str = LEFT) -> ProjectiveIndecomposable:
    """``A e_i`` (left) or ``e_i A`` (right) as a module with its basis inside ``A``."""
    key = ("proj", vertex, side)
    if key in a._cache:
        return a._cache[key]
    ring = a if side == LEFT else a.opposite()
    e = list(ring.idempotents[vertex])
    # ring-left ideal ring*e: image of right multiplication by e
    cols = [ring.multiply(ring.basis_vector(j), e) for j in range(ring.dim)]
    red, piv = rref_rows(cols, ring.dim)
    R = regular_module(a, side)
    P = _restrict(R, red, piv)
    # coordinates of e itself
    gen_coords = [e[p] for p in piv]
    gen = None
    for k, c in enumerate(gen_coords):
        if c:
            gen = k
            break
    if len(ring.idempotents) == 1:
        P.name = "A" if side == LEFT else "A_A"
    else:
        P.name = f"P{vertex}" if side == LEFT else f"P{vertex}_A"
    out = ProjectiveIndecomposable(vertex, P, red, gen)
    out.generator_vector = gen_coords
    a._cache[key] = out
    return out


@dataclass
class ProjectiveDecomposition:
    left: List[ProjectiveIndecomposable]
    right: List[ProjectiveIndecomposable]

    def dims(self):
        return [p.module.dim for p in self.left]


def projective_indecomposables(a: Algebra) -> ProjectiveDecomposition:
    r = len(a.idempotents)
    return ProjectiveDecomposition([projective_at(a, i, LEFT) for i in range(r)],
                                   [projective_at(a, i, RIGHT) for i in range(r)])


# ---------------------------------------------------------------------------
# isomorphism

@dataclass
class IsoVerdict:
    status: str  # "isomorphic" | "not-isomorphic" | "unknown"
    witness: Optional[ModuleMap] = None
    reason: str = ""
    attempts: int = 0

    def __bool__(self):
        return self.status == "isomorphic"

    @property
    def known(self) -> bool:
        return self.status != "unknown"


def _end_structure(M: Module):
    """Structure constants of ``End(M)`` on the hom basis."""
    vecs, free = _hom_kernel(M, M)
    m = M.dim
    fld = M.field
    z = fld.zero
    mats = [[v[r * m:(r + 1) * m] for r in range(m)] for v in vecs]
    # a basis element is determined by its entries at ``free``, so only those
    # entries of each product are needed
    spots = [divmod(p, m) for p in free]
    sparse = [[[(k, x) for k, x in enumerate(row) if x] for row in A] for A in mats]
    consts = []
    for SA in sparse:
        row = []
        for B in mats:
            out = []
            for r, c in spots:
                acc = z
                for k, x in SA[r]:
                    y = B[k][c]
                    if y:
                        acc = acc + x * y
                out.append(acc)
            row.append(out)
        consts.append(row)
    return mats, consts


def end_semisimple_dim(M: Module) -> Optional[int]:
    """``dim End(M)/rad End(M)`` via the trace form, or ``None`` if not applicable."""
    if "end_ss" in M._cache:
        return M._cache["end_ss"]
    mats, consts = _end_structure(M)
    k = len(mats)
    fld = M.field
    p = fld.characteristic
    if p and p <= k:
        M._cache["end_ss"] = None
        return None
    tr = []
    for l in range(k):
        t = fld.zero
        for j in range(k):
            t = t + consts[l][j][j]
        tr.append(t)
    gram = [[sum((x * tr[l] for l, x in enumerate(consts[i][j]) if x), fld.zero) for j in range(k)]
            for i in range(k)]
    val = rank_rows(gram, k)
    M._cache["end_ss"] = val
    return val


def is_local(M: Module) -> Optional[bool]:
    s = end_semisimple_dim(M)
    return None if s is None else s == 1


def is_isomorphic(M: Module, N: Module, attempts: int = DEFAULT_ISO_ATTEMPTS,
                  seed: int = DEFAULT_SEED) -> IsoVerdict:
    if M.ring is not N.ring or M.side != N.side:
        return IsoVerdict("not-isomorphic", reason="different side or algebra")
    if M.dim != N.dim:
        return IsoVerdict("not-isomorphic", reason=f"dimensions {M.dim} != {N.dim}")
    fld = M.field
    if M.dim == 0:
        return IsoVerdict("isomorphic", ModuleMap(M, N, Matrix.zeros(0, 0, fld), check=False))
    if M.dimension_vector() != N.dimension_vector():
        return IsoVerdict("not-isomorphic", reason="dimension vectors differ")
    dmn, dnm, dmm, dnn = hom_dim(M, N), hom_dim(N, M), hom_dim(M, M), hom_dim(N, N)
    if not (dmn == dnm == dmm == dnn):
        return IsoVerdict("not-isomorphic",
                          reason=f"hom dimensions differ (MN={dmn}, NM={dnm}, MM={dmm}, NN={dnn})")
    hs = hom_basis(M, N)
    tries = 0
    for h in hs:
        tries += 1
        if h.matrix.is_invertible():
            return IsoVerdict("isomorphic", h, attempts=tries)
    # random combinations first: when M = N the determinant of a generic
    # combination is a non-zero polynomial, so a witness turns up quickly
    rng = random.Random(seed)
    k = len(hs)
    for _ in range(attempts):
        tries += 1
        coeffs = [fld(rng.randint(-999, 999)) for _ in range(k)]
        F = _combine_maps([h.matrix for h in hs], coeffs, fld)
        if F.is_invertible():
            return IsoVerdict("isomorphic", ModuleMap(M, N, F, check=False), attempts=tries)
    if is_local(M):
        # End(M) local: an iso exists iff some g o h is a unit, and non-units form an ideal
        gs = hom_basis(N, M)
        for h in hs:
            for g in gs:
                tries += 1
                if (g.matrix @ h.matrix).is_invertible():
                    return IsoVerdict("isomorphic", h, attempts=tries)
        return IsoVerdict("not-isomorphic", reason="End is local and no composite is invertible",
                          attempts=tries)
    if k <= 3:
        # det(sum t_j h_j) has degree <= dim in each t_j; vanishing on S^k with |S| = dim+1
        # forces it to be the zero polynomial
        S = [fld(s) for s in range(M.dim + 1)]
        for pt in itertools.product(S, repeat=k):
            tries += 1
            F = _combine_maps([h.matrix for h in hs], list(pt), fld)
            if F.is_invertible():
                return IsoVerdict("isomorphic", ModuleMap(M, N, F, check=False), attempts=tries)
        return IsoVerdict("not-isomorphic", reason="determinant vanishes identically on Hom",
                          attempts=tries)
    return IsoVerdict("unknown", reason="no invertible map found", attempts=tries)


def _combine_maps(mats, coeffs, fld) -> Matrix:
    nr, nc = mats[0].shape
    rows = [[fld.zero] * nc for _ in range(nr)]
    for c, m in zip(coeffs, mats):
        if not c:
            continue
        for r, mr in zip(rows, m.rows):
            for j, x in enumerate(mr):
                if x:
                    r[j] = r[j] + c * x
    return Matrix.raw(rows, nc, fld)


# ---------------------------------------------------------------------------
# indecomposability

@dataclass
class Decomposition:
    status: str  # "indecomposable" | "decomposes" | "unknown" | "zero"
    parts: Optional[Tuple[Tuple[Module, ModuleMap], Tuple[Module, ModuleMap]]] = None
    idempotent: Optional[Matrix] = None
    reason: str = ""

    def __bool__(self):
        return self.status == "indecomposable"


def _charpoly_factors(F: Matrix):
    import sympy

    t = sympy.Symbol("t")
    fld = F.field
    p = fld.characteristic
    if p:
        S = sympy.Matrix([[int(x.v) for x in r] for r in F.rows])
        poly = sympy.Poly(S.charpoly(t).as_expr(), t, modulus=p)
    else:
        S = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in F.rows])
        poly = sympy.Poly(S.charpoly(t).as_expr(), t, domain="QQ")
    _, facs = poly.factor_list()
    out = []
    for f, e in facs:
        coeffs = []
        for c in f.all_coeffs():
            if p:
                coeffs.append(fld(int(c) % p))
            else:
                c = sympy.Rational(c)
                coeffs.append(fld(Fraction(int(c.p), int(c.q))))
        out.append((coeffs, e))
    return out


def _poly_at(coeffs, F: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (highest coefficient first) at ``F``."""
    n = F.nrows
    fld = F.field
    I = Matrix.identity(n, fld)
    acc = Matrix.zeros(n, n, fld)
    for c in coeffs:
        acc = acc @ F + I.scale(c)
    return acc


def _split_by(M: Module, F: Matrix):
    facs = _charpoly_factors(F)
    if len(facs) < 2:
        return None
    fcoeffs, e = facs[0]
    fld = M.field
    P1 = Matrix.identity(M.dim, fld)
    f_pow = _poly_at(fcoeffs, F)
    for _ in range(e):
        P1 = P1 @ f_pow
    P2 = Matrix.identity(M.dim, fld)
    for g, ge in facs[1:]:
        gm = _poly_at(g, F)
        for _ in range(ge):
            P2 = P2 @ gm
    U = P1.kernel().columns()
    W = P2.kernel().columns()
    if not U or not W or len(U) + len(W) != M.dim:
        return None
    return U, W


def is_indecomposable(M: Module, seed: int = DEFAULT_SEED, attempts: int = DEFAULT_ISO_ATTEMPTS) -> Decomposition:
    if "indec" in M._cache:
        return M._cache["indec"]
    res = _is_indecomposable(M, seed, attempts)
    M._cache["indec"] = res
    return res


def _is_indecomposable(M: Module, seed: int, attempts: int) -> Decomposition:
    if M.dim == 0:
        return Decomposition("zero", reason="zero module")
    s = end_semisimple_dim(M)
    if s == 1:
        return Decomposition("indecomposable", reason="End is local")
    fld = M.field
    ends = end_algebra_basis(M)
    rng = random.Random(seed)
    cands = list(ends)
    for a, b in itertools.combinations(ends, 2):
        cands.append(_combine_maps([a, b], [fld.one, fld.one], fld))
        cands.append(_combine_maps([a, b], [fld.one, -fld.one], fld))
    for _ in range(attempts):
        cands.append(_combine_maps(ends, [fld(rng.randint(-5, 5)) for _ in ends], fld))
    for F in cands:
        split = _split_by(M, F)
        if split is None:
            continue
        U, W = split
        pu = submodule_from_subspace(M, U, check=False)
        pw = submodule_from_subspace(M, W, check=False)
        basis = Matrix.from_columns(pu[1].matrix.columns() + pw[1].matrix.columns(), M.dim, fld)
        # projection onto U along W
        k = pu[0].dim
        coords = basis.solve(Matrix.identity(M.dim, fld))
        keep = Matrix.raw([list(r) if i < k else [fld.zero] * M.dim for i, r in enumerate(coords.rows)],
                          M.dim, fld)
        e = basis @ keep
        return Decomposition("decomposes", (pu, pw), e, reason="Fitting splitting of an endomorphism")
    if s is None:
        return Decomposition("unknown", reason="characteristic too small for the trace form")
    return Decomposition("unknown", reason=f"End/rad has dimension {s} but no idempotent found")


class DecompositionUnknown(ModuleError):
    pass


def decompose(M: Module, seed: int = DEFAULT_SEED) -> List[Module]:
    """Indecomposable summands (Krull-Schmidt); raises if a step is undecided."""
    if M.dim == 0:
        return []
    verdict = is_indecomposable(M, seed)
    if verdict.status == "indecomposable":
        return [M]
    if verdict.status != "decomposes":
        raise DecompositionUnknown(verdict.reason)
    (U, _), (W, _) = verdict.parts
    return decompose(U, seed) + decompose(W, seed)
