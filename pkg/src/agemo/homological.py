"""Projective covers, syzygies, transposes, cosyzygies and Ext against the algebra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .config import DEFAULT_SEED
from .resolution import free_resolution
from .linalg import Matrix, rank_rows, reduce_against, rref_rows
from .modules import (
    DecompositionUnknown,
    Module,
    ModuleError,
    ModuleMap,
    _cols_matrix,
    cokernel_module,
    decompose,
    direct_sum,
    dual,
    dual_map,
    eval_map,
    hom_basis,
    hom_dim,
    is_isomorphic,
    is_reflexive,
    is_torsionless,
    kernel_module,
    projective_at,
    radical_of_module,
    regular_module,
    zero_module,
)


# ---------------------------------------------------------------------------
# projective covers and syzygies

@dataclass
class ProjectiveCover:
    cover: ModuleMap  # P -> M
    vertices: List[int]  # idempotent index of each indecomposable summand of P
    generators: list  # image of the generator of each summand, as vectors of M

    @property
    def projective(self) -> Module:
        return self.cover.domain


def projective_cover(M: Module) -> ProjectiveCover:
    """Minimal surjection from a projective onto ``M``."""
    if "cover" in M._cache:
        return M._cache["cover"]
    ring = M.ring
    fld = M.field
    _, inc = radical_of_module(M)
    red, piv = rref_rows(inc.matrix.columns(), M.dim) if inc.matrix.ncols and M.dim else ([], [])
    rad_dim = len(red)
    gens: List[Tuple[int, list]] = []
    for i, e in enumerate(ring.idempotents):
        E = M.act(e)
        for col in (E.columns() if M.dim else []):
            r = reduce_against(col, red, piv)
            if any(r):
                red, piv = rref_rows(red + [r], M.dim)
                gens.append((i, col))
    if rad_dim + len(gens) != M.dim:
        raise ModuleError("idempotents do not generate the top; algebra is not split basic")
    projs = [projective_at(M.algebra, i, M.side) for i, _ in gens]
    if projs:
        P, _, _ = direct_sum([p.module for p in projs])
    else:
        P = zero_module(M.algebra, M.side)
    cols = []
    for p, (_, g) in zip(projs, gens):
        for u in p.basis:
            cols.append(M.act(u).apply(g))
    f = ModuleMap(P, M, _cols_matrix(cols, M.dim, fld), check=False)
    if f.rank() != M.dim:
        raise ModuleError("projective cover is not surjective")
    res = ProjectiveCover(f, [i for i, _ in gens], [g for _, g in gens])
    M._cache["cover"] = res
    return res


def syzygy_with_inclusion(M: Module):
    """``(Omega M, inclusion into the projective cover)``."""
    if "syz" not in M._cache:
        K, inc = kernel_module(projective_cover(M).cover)
        if M.name and K.dim:
            K.name = f"Omega({M.name})"
        M._cache["syz"] = (K, inc)
    return M._cache["syz"]


def syzygy(M: Module) -> Module:
    """Kernel of the projective cover."""
    return syzygy_with_inclusion(M)[0]


def syzygy_power(M: Module, t: int) -> Module:
    for _ in range(t):
        M = syzygy(M)
    return M


def is_projective(M: Module) -> bool:
    return M.dim == 0 or syzygy(M).dim == 0


@dataclass
class ProjectivePresentation:
    p1: ProjectiveCover  # P1 -> Omega M
    p0: ProjectiveCover  # P0 -> M
    d1: ModuleMap  # P1 -> P0


def presentation(M: Module) -> ProjectivePresentation:
    c0 = projective_cover(M)
    K, inc = syzygy_with_inclusion(M)
    c1 = projective_cover(K)
    d1 = inc @ c1.cover
    return ProjectivePresentation(c1, c0, d1)


def transpose(M: Module) -> Module:
    """Cokernel of the dual of a minimal presentation; lives on the other side."""
    if "tr" in M._cache:
        return M._cache["tr"]
    pres = presentation(M)
    T, _ = cokernel_module(dual_map(pres.d1))
    if M.name and T.dim:
        T.name = f"Tr({M.name})"
    M._cache["tr"] = T
    return T


def cosyzygy(M: Module) -> Module:
    """``Tr Omega Tr M``."""
    if "cosyz" not in M._cache:
        C = transpose(syzygy(transpose(M)))
        if M.name and C.dim:
            C.name = f"Agemo({M.name})"
        M._cache["cosyz"] = C
    return M._cache["cosyz"]


def cosyzygy_power(M: Module, t: int) -> Module:
    for _ in range(t):
        M = cosyzygy(M)
    return M


@dataclass
class Approximation:
    map: ModuleMap  # M -> P
    cokernel: Module
    projection: ModuleMap  # P -> cokernel
    vertices: List[int]


def _approximation_span(M: Module, comps) -> int:
    """dim of the image of Hom(P', A) -> Hom(M, A) for the chosen components."""
    ring = M.ring
    right = ring.right_regular_actions()
    vecs = []
    for H in comps:
        for Rb in right:
            vecs.append((Rb @ H).flat() if M.dim else [])
    if not vecs or not vecs[0]:
        return 0
    return rank_rows(vecs, len(vecs[0]))


def minimal_left_approximation(M: Module) -> Approximation:
    """Minimal left ``add(A)``-approximation ``M -> P`` and its cokernel."""
    if "approx" in M._cache:
        return M._cache["approx"]
    ring = M.ring
    fld = M.field
    R = regular_module(M.algebra, M.side)
    hs = hom_basis(M, R)
    d = len(hs)
    comps = []  # (vertex, matrix M -> A landing in A e_i)
    for h in hs:
        for i, e in enumerate(ring.idempotents):
            Re = ring.right_regular_actions()
            C = ring.combine(Re, e) @ h.matrix
            if not C.is_zero():
                comps.append((i, C))
    keep = list(range(len(comps)))
    for k in range(len(comps)):
        trial = [j for j in keep if j != k]
        if _approximation_span(M, [comps[j][1] for j in trial]) == d:
            keep = trial
    projs = [projective_at(M.algebra, comps[j][0], M.side) for j in keep]
    if projs:
        P, _, _ = direct_sum([p.module for p in projs])
    else:
        P = zero_module(M.algebra, M.side)
    rows = []
    for p, j in zip(projs, keep):
        C = comps[j][1]
        piv = _pivots(p.basis, ring.dim)
        for pv in piv:
            rows.append(list(C.rows[pv]))
    u = ModuleMap(M, P, Matrix.raw(rows, M.dim, fld) if rows else Matrix.zeros(P.dim, M.dim, fld),
                  check=False)
    coker, proj = cokernel_module(u)
    res = Approximation(u, coker, proj, [comps[j][0] for j in keep])
    M._cache["approx"] = res
    return res


def _pivots(red, ncols):
    out = []
    for row in red:
        for c in range(ncols):
            if row[c]:
                out.append(c)
                break
    return out


def is_left_approximation(u: ModuleMap) -> bool:
    """Does every map ``M -> A`` factor through ``u : M -> P`` (P projective)?"""
    M, P = u.domain, u.codomain
    R = regular_module(M.algebra, M.side)
    target = hom_dim(M, R)
    vecs = [(g.matrix @ u.matrix).flat() for g in hom_basis(P, R)] if P.dim and M.dim else []
    got = rank_rows(vecs, R.dim * M.dim) if vecs else 0
    return got == target


# ---------------------------------------------------------------------------
# Ext^i(M, A)

@dataclass
class ExtProfile:
    module: Module
    horizon: int
    dims: List[int]
    route: str = "resolution"

    def first_nonzero(self) -> Optional[int]:
        for i, d in enumerate(self.dims, start=1):
            if d:
                return i
        return None

    def vanishes(self) -> bool:
        return not any(self.dims)


def _dual_dim_of_projective(M: Module, vertices) -> int:
    return sum(projective_at(M.algebra, v, _other(M.side)).module.dim for v in vertices)


def _other(side):
    return "right" if side == "left" else "left"


def _ring_element(block_coords, pi, zero) -> list:
    out = [zero] * len(pi.basis[0])
    for c, row in zip(block_coords, pi.basis):
        if c:
            out = [x + c * y for x, y in zip(out, row)]
    return out


def _dualized_rank(M: Module, target: ProjectiveCover, source: ProjectiveCover, d: Matrix) -> int:
    """Rank of ``Hom(P_src_codomain, A) -> Hom(P_dom, A)`` for ``d : P_dom -> P_cod``.

    ``source`` is the cover whose projective is the domain of ``d`` and
    ``target`` the one whose projective is the codomain. A map out of
    ``A e_j`` is determined by the image of ``e_j``, an element of ``e_j A``,
    so the dual of ``d`` is left multiplication by the matrix entries of ``d``.
    """
    ring = M.ring
    fld = M.field
    cod = [projective_at(M.algebra, v, M.side) for v in target.vertices]
    dom = [projective_at(M.algebra, v, M.side) for v in source.vertices]
    if not cod or not dom:
        return 0
    offs = []
    o = 0
    for p in cod:
        offs.append(o)
        o += p.module.dim
    # a[s][t]: component in summand s of d(generator of summand t), as a ring element
    a = []
    col = 0
    gen_cols = []
    for p in dom:
        gen_cols.append(col + p.generator)
        col += p.module.dim
    for s, p in enumerate(cod):
        row = []
        for gc in gen_cols:
            coords = [d.rows[offs[s] + k][gc] for k in range(p.module.dim)]
            row.append(_ring_element(coords, p, fld.zero))
        a.append(row)
    vecs = []
    for s, p in enumerate(cod):
        e = list(ring.idempotents[p.vertex])
        eR = _right_ideal_basis(ring, e)
        for g in eR:
            v = []
            for t in range(len(dom)):
                v.extend(ring.multiply(a[s][t], g))
            vecs.append(v)
    return rank_rows(vecs, len(vecs[0])) if vecs else 0


def _right_ideal_basis(ring, e):
    key = ("eR", tuple(e))
    if key not in ring._cache:
        red, _ = rref_rows([ring.multiply(e, ring.basis_vector(j)) for j in range(ring.dim)], ring.dim)
        ring._cache[key] = red
    return ring._cache[key]


def _ext_by_resolution(M: Module, T: int, limit: int) -> Optional[List[int]]:
    """Cohomology of the dualized minimal resolution, or ``None`` if it grows past ``limit``."""
    covers = []
    X = M
    for _ in range(T + 2):
        if X.dim > limit:
            return None
        covers.append(projective_cover(X))
        X = syzygy(X)
    # d_i : P_i -> P_{i-1} is inclusion(Omega^i) o cover_i
    ds = [None]
    X = M
    for i in range(1, T + 2):
        K, inc = syzygy_with_inclusion(X)
        ds.append((inc @ covers[i].cover).matrix)
        X = K
    dims = []
    for i in range(1, T + 1):
        hom_pi = _dual_dim_of_projective(M, covers[i].vertices)
        r_in = _dualized_rank(M, covers[i - 1], covers[i], ds[i])
        r_out = _dualized_rank(M, covers[i], covers[i + 1], ds[i + 1])
        dims.append(hom_pi - r_in - r_out)
    return dims


class _ClassTable:
    """Iso classes of indecomposables met while resolving, with their transitions.

    Each class records ``dim Ext^1(X, A)`` and the multiset of classes of the
    indecomposable summands of ``Omega X``; Ext of a direct sum is the sum.
    """

    def __init__(self, seed: int = DEFAULT_SEED):
        self.reps: List[Module] = []
        self.ext1: Dict[int, int] = {}
        self.omega: Dict[int, Dict[int, int]] = {}
        self.seed = seed

    def lookup(self, X: Module) -> int:
        key = X.key()
        for k, rep in enumerate(self.reps):
            if rep.dim != X.dim:
                continue
            if rep.key() == key:
                return k
            v = is_isomorphic(rep, X, seed=self.seed)
            if v.status == "isomorphic":
                return k
        self.reps.append(X)
        return len(self.reps) - 1

    def split(self, X: Module) -> Dict[int, int]:
        try:
            parts = decompose(X, self.seed)
        except DecompositionUnknown:
            parts = [X]
        out: Dict[int, int] = {}
        for p in parts:
            k = self.lookup(p)
            out[k] = out.get(k, 0) + 1
        return out

    def ext1_of(self, k: int) -> int:
        if k not in self.ext1:
            self.ext1[k] = ext1_dim(self.reps[k])
        return self.ext1[k]

    def omega_of(self, k: int) -> Dict[int, int]:
        if k not in self.omega:
            self.omega[k] = self.split(syzygy(self.reps[k]))
        return self.omega[k]


def ext1_dim(X: Module) -> int:
    """From ``0 -> X* -> P0* -> (Omega X)* -> Ext^1(X, A) -> 0``."""
    if X.dim == 0:
        return 0
    c = projective_cover(X)
    R = regular_module(X.algebra, X.side)
    K = syzygy(X)
    dk = hom_dim(K, R) if K.dim else 0
    return dk - _dual_dim_of_projective(X, c.vertices) + hom_dim(X, R)


def ext_dims(M: Module, T: int, seed: int = DEFAULT_SEED, table: Optional[_ClassTable] = None) -> Iterator[int]:
    """Lazily yield ``dim Ext^i(M, A)`` for ``i = 1..T`` through summand classes."""
    table = table or _ClassTable(seed)
    state = table.split(M) if M.dim else {}
    for _ in range(T):
        yield sum(m * table.ext1_of(k) for k, m in state.items())
        nxt: Dict[int, int] = {}
        for k, m in state.items():
            for k2, m2 in table.omega_of(k).items():
                nxt[k2] = nxt.get(k2, 0) + m * m2
        state = nxt


ROUTES = ("resolution", "modules", "summands")


def ext_profile(M: Module, T: int, route: str = "resolution", seed: int = DEFAULT_SEED) -> ExtProfile:
    """``dim Ext^i(M, A)`` for ``1 <= i <= T``.

    ``resolution`` takes cohomology of the dualized minimal resolution kept
    as generator data (:mod:`agemo.resolution`). ``modules`` does the same
    with every syzygy built as a :class:`Module`; ``summands`` follows
    Krull-Schmidt classes of the syzygies and adds up ``Ext^1`` of each. The
    last two are independent cross-checks and only practical while the
    syzygies stay small.
    """
    if T < 1:
        raise ValueError("horizon must be >= 1")
    if route == "auto":
        route = "resolution"
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    key = ("ext", T, route)
    if key in M._cache:
        return M._cache[key]
    if M.dim == 0:
        dims = [0] * T
    elif route == "resolution":
        dims = free_resolution(M).ext_dims(T)
    elif route == "modules":
        dims = _ext_by_resolution(M, T, 10 ** 9)
    else:
        dims = list(ext_dims(M, T, seed))
    prof = ExtProfile(M, T, dims, route)
    M._cache[key] = prof
    return prof


def first_nonvanishing_ext(M: Module, T: int, seed: int = DEFAULT_SEED) -> Optional[int]:
    """Least ``i <= T`` with ``Ext^i(M, A) != 0``; the resolution is only extended as needed."""
    if M.dim == 0:
        return None
    res = free_resolution(M)
    for i in range(1, T + 1):
        if res.ext_dim(i):
            return i
    return None


# ---------------------------------------------------------------------------
# predicates

def torsion_dim(M: Module) -> int:
    return M.dim - eval_map(M).rank()


def torsionfree_depth(M: Module, T: int) -> Optional[int]:
    """Least ``t <= T`` with ``cosyzygy^t(M)`` not torsionless, else ``None``."""
    X = M
    for t in range(T):
        if X.dim == 0:
            return None
        if not is_torsionless(X):
            return t
        X = cosyzygy(X)
    return None


@dataclass
class TRProfile:
    horizon: int
    positive: List[bool]  # positive[i-1] is (TR_i)
    negative: List[bool]  # negative[t-1] is (TR_-t)

    def holds(self, i: int) -> bool:
        if i == 0 or abs(i) > self.horizon:
            raise ValueError(f"index {i} outside 1..{self.horizon}")
        return self.positive[i - 1] if i > 0 else self.negative[-i - 1]

    def satisfied(self) -> List[int]:
        idx = list(range(-self.horizon, 0)) + list(range(1, self.horizon + 1))
        return [i for i in idx if self.holds(i)]


def tr_profile(M: Module, T: int, seed: int = DEFAULT_SEED) -> TRProfile:
    pos = [d == 0 for d in ext_profile(M, T, seed=seed).dims]
    trm = transpose(M)
    neg = [d == 0 for d in ext_profile(trm, T, seed=seed).dims] if trm.dim else [True] * T
    return TRProfile(T, pos, neg)


def tr_negative_via_cosyzygies(M: Module, T: int) -> List[bool]:
    """``(TR_-t)`` from torsionlessness of ``cosyzygy^(t-1)(M)``; second route."""
    out = []
    X = M
    for _ in range(T):
        out.append(X.dim == 0 or is_torsionless(X))
        X = cosyzygy(X) if X.dim else X
    return out


def omega_period(M: Module, T: int, seed: int = DEFAULT_SEED, max_dim: int = 64) -> Optional[int]:
    """Least ``t <= T`` with ``Omega^t M = M``.

    Syzygy dimensions come cheaply from the free resolution, so syzygies are
    only built as modules up to the last ``t`` whose dimension matches.
    """
    if M.dim == 0:
        return None
    res = free_resolution(M)
    cands = []
    for t in range(1, T + 1):
        d = res.syzygy_dim(t)
        if d == 0 or d > max_dim:
            break
        if d == M.dim:
            cands.append(t)
    X = M
    done = 0
    for t in cands:
        X = syzygy_power(X, t - done)
        done = t
        if is_isomorphic(X, M, seed=seed).status == "isomorphic":
            return t
    return None


@dataclass
class GPVerdict:
    status: str  # "GP-exact" | "GP-up-to-horizon" | "not-GP"
    period: Optional[int] = None
    witness: str = ""
    horizon: int = 0

    def as_dict(self):
        return {"status": self.status, "period": self.period, "witness": self.witness,
                "horizon": self.horizon}


def certify_gp(M: Module, T: int, seed: int = DEFAULT_SEED) -> GPVerdict:
    if is_projective(M):
        return GPVerdict("GP-exact", None, "projective", T)
    k = torsion_dim(M)
    if k:
        return GPVerdict("not-GP", None, f"K M has dimension {k}", T)
    bad = first_nonvanishing_ext(M, T, seed)
    if bad is not None:
        return GPVerdict("not-GP", omega_period(M, bad, seed), f"Ext^{bad}(M,A) != 0", T)
    t = omega_period(M, T, seed)
    if t is not None:
        # Ext^(i+t)(M, A) = Ext^i(Omega^t M, A), so one period of vanishing is conclusive
        return GPVerdict("GP-exact", t, "", T)
    depth = torsionfree_depth(M, T)
    if depth is not None:
        return GPVerdict("not-GP", None, f"cosyzygy^{depth}(M) is not torsionless", T)
    return GPVerdict("GP-up-to-horizon", None, "", T)


@dataclass
class Certificate:
    holds: bool
    level: str  # "exact" | "up-to-horizon" | "refuted"
    horizon: int = 0
    witness: Optional[int] = None

    def __str__(self):
        if self.level == "refuted":
            return "no" if self.witness is None else f"no (i={self.witness})"
        if self.level == "exact":
            return "yes (exact)"
        return f"yes ({self.horizon})"

    def as_dict(self):
        return {"holds": self.holds, "level": self.level, "horizon": self.horizon,
                "witness": self.witness}


@dataclass
class GStatus:
    g1: Certificate
    g2: Certificate
    g3: Certificate

    def as_dict(self):
        return {"G1": self.g1.as_dict(), "G2": self.g2.as_dict(), "G3": self.g3.as_dict()}


def _semi_gp_certificate(M: Module, T: int, seed: int) -> Certificate:
    if is_projective(M):
        return Certificate(True, "exact", T)
    bad = first_nonvanishing_ext(M, T, seed)
    if bad is not None:
        return Certificate(False, "refuted", T, bad)
    t = omega_period(M, T, seed)
    if t is not None:
        return Certificate(True, "exact", T)
    return Certificate(True, "up-to-horizon", T)


def g_status(M: Module, T: int, seed: int = DEFAULT_SEED) -> GStatus:
    g1 = _semi_gp_certificate(M, T, seed)
    g2 = _semi_gp_certificate(dual(M), T, seed)
    refl = is_reflexive(M)
    g3 = Certificate(refl, "exact" if refl else "refuted", T)
    return GStatus(g1, g2, g3)
