"""Minimal projective resolutions kept as submodules of free modules.

The module-level route in :mod:`agemo.homological` materializes every syzygy
as a :class:`Module` with full action matrices. That is fine for small
modules but syzygies over non-self-injective algebras can grow exponentially,
so Ext deep in the resolution needs something leaner. Here a term
``P_n = (+)_j A e_{i_j}`` is only a list of generators, each with its vertex,
its degree and its image in ``P_{n-1}``. Kernels, tops and the dual complex
are computed directly from that data.

When the algebra is graded by path length and the first syzygy is a graded
submodule, everything splits by degree and each linear algebra problem only
sees one homogeneous piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .linalg import rank_rows, rref_rows, independent_indices, sparse_kernel, sparse_rank
from .modules import Module, projective_at


@dataclass
class _Gen:
    vertex: int
    degree: int
    image: Dict[int, list]  # summand index in the previous term -> local coordinates


class _RingData:
    """Per-(algebra, side) tables: local bases of ``A e_i`` and ``e_i A`` with degrees."""

    def __init__(self, algebra, side):
        self.algebra = algebra
        self.side = side
        ring = algebra if side == "left" else algebra.opposite()
        self.ring = ring
        self.field = ring.field
        self.nv = len(ring.idempotents)
        self.proj = [projective_at(algebra, i, side) for i in range(self.nv)]
        self.pdim = [p.module.dim for p in self.proj]
        n = ring.dim
        self.graded, self.deg = self._grading()
        self.ldeg = [[self._vec_degree(b) for b in p.basis] for p in self.proj]
        self.eR = []
        for e in ring.idempotents:
            red, _ = rref_rows([ring.multiply(list(e), ring.basis_vector(j)) for j in range(n)], n)
            self.eR.append(red)
        self.eRdeg = [[self._vec_degree(c) for c in red] for red in self.eR]
        if self.graded and any(d is None for ds in self.ldeg + self.eRdeg for d in ds):
            self.graded = False
        if not self.graded:
            self.deg = [0] * n
            self.ldeg = [[0] * d for d in self.pdim]
            self.eRdeg = [[0] * len(r) for r in self.eR]
        # elements whose products with a submodule span its radical
        if self.graded:
            self.rad_gens = [ring.basis_vector(k) for k in range(n) if self.deg[k] == 1]
        else:
            self.rad_gens = [list(r) for r in ring.radical_basis().rows]
        self._cols: Dict[tuple, list] = {}

    def _vec_degree(self, v):
        ds = {self.deg[k] for k, x in enumerate(v) if x}
        return ds.pop() if len(ds) == 1 else None

    def _grading(self):
        ring = self.ring
        n = ring.dim
        if not ring.paths:
            return False, [0] * n
        deg = [len(p[1]) for p in ring.paths]
        for i in range(n):
            for j in range(n):
                for k, x in enumerate(ring.mul[i][j]):
                    if x and deg[k] != deg[i] + deg[j]:
                        return False, deg
        # radical must be everything of positive degree, generated in degree one
        if sum(1 for d in deg if d == 0) != self.nv:
            return False, deg
        ones = [k for k in range(n) if deg[k] == 1]
        for d in range(2, max(deg) + 1):
            prods = [ring.mul[a][b] for a in ones for b in range(n) if deg[b] == d - 1]
            if rank_rows(prods, n) != sum(1 for x in deg if x == d):
                return False, deg
        return True, deg

    def action_columns(self, key, a, i):
        """``a`` acting on ``A e_i``: for each local basis index ``u`` the list ``[(w, c)]``."""
        k = (key, i)
        if k not in self._cols:
            rows = self.proj[i].module.act(a).rows
            d = self.pdim[i]
            self._cols[k] = [[(w, rows[w][u]) for w in range(d) if rows[w][u]] for u in range(d)]
        return self._cols[k]

    def local_basis_columns(self, i, u, s):
        """Basis vector ``u`` of ``A e_i`` acting on ``A e_s``."""
        return self.action_columns(("pb", i, u), self.proj[i].basis[u], s)

    def to_ring(self, i, loc):
        """Ring element with sparse local coordinates ``loc`` in ``A e_i``."""
        z = self.field.zero
        out = [z] * self.ring.dim
        basis = self.proj[i].basis
        for u, c in loc.items():
            for k, x in enumerate(basis[u]):
                if x:
                    out[k] = out[k] + c * x
        return out


def _apply(cols, loc):
    out: Dict[int, object] = {}
    for u, x in loc.items():
        for w, c in cols[u]:
            y = out.get(w)
            out[w] = c * x if y is None else y + c * x
    return {w: y for w, y in out.items() if y}


def _ring_data(M: Module) -> _RingData:
    key = ("resdata", M.side)
    cache = M.algebra._cache
    if key not in cache:
        cache[key] = _RingData(M.algebra, M.side)
    return cache[key]


class FreeResolution:
    """Lazily extended minimal projective resolution of ``M``.

    ``terms[n]`` lists the generators of ``P_n``; the generator images of
    ``P_n`` live in ``P_{n-1}``. Terms are added on demand by :meth:`extend`.
    Vectors are sparse dicts over the coordinates of one degree piece.
    """

    def __init__(self, M: Module):
        from .homological import projective_cover, syzygy_with_inclusion

        self.module = M
        self.data = D = _ring_data(M)
        cover = projective_cover(M)
        # P_0 generators carry no image; their degrees are all zero
        self.terms: List[List[_Gen]] = [[_Gen(v, 0, {}) for v in cover.vertices]]
        K, inc = syzygy_with_inclusion(M)
        vecs = inc.matrix.columns() if K.dim else []
        self.graded = D.graded
        self._coord_cache: Dict[int, dict] = {}
        pieces = self._split_homogeneous(vecs) if self.graded else None
        if pieces is None:
            self.graded = False
            self._coord_cache = {}
            pieces = {0: [{k: x for k, x in enumerate(v) if x} for v in vecs]} if vecs else {}
        self._pending = pieces  # kernel of d_n by degree, in P_n coordinates
        self._ext_cache: Dict[int, int] = {}

    # degrees -------------------------------------------------------------

    def _coords(self, n):
        """Coordinates of ``P_n`` grouped by degree: ``{d: [(j, u), ...]}``."""
        if n not in self._coord_cache:
            out: Dict[int, List[Tuple[int, int]]] = {}
            ldeg = self.data.ldeg
            for j, g in enumerate(self.terms[n]):
                for u in range(self.data.pdim[g.vertex]):
                    d = g.degree + (ldeg[g.vertex][u] if self.graded else 0)
                    out.setdefault(d, []).append((j, u))
            self._coord_cache[n] = out
        return self._coord_cache[n]

    def _split_homogeneous(self, vecs):
        """Degree pieces of the span of ``vecs`` inside ``P_0``, or ``None`` if not graded."""
        if not vecs:
            return {}
        flat = []
        for j, g in enumerate(self.terms[0]):
            for u in range(self.data.pdim[g.vertex]):
                flat.append((j, u, self.data.ldeg[g.vertex][u]))
        n = len(flat)
        red, _ = rref_rows(vecs, n)
        parts: Dict[int, list] = {}
        for v in red:
            by: Dict[int, list] = {}
            for pos, x in enumerate(v):
                if x:
                    by.setdefault(flat[pos][2], [self.data.field.zero] * n)[pos] = x
            for d, w in by.items():
                parts.setdefault(d, []).append(w)
        if rank_rows([w for ws in parts.values() for w in ws], n) != len(red):
            return None
        coords = self._coords(0)
        index = {(j, u): k for k, (j, u, _) in enumerate(flat)}
        out = {}
        for d, ws in parts.items():
            red_d, _ = rref_rows(ws, n)
            out[d] = [{k: w[index[c]] for k, c in enumerate(coords[d]) if w[index[c]]} for w in red_d]
        return out

    # construction -------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def rank(self, n: int) -> int:
        """Number of indecomposable summands of ``P_n``."""
        self.extend(n)
        return len(self.terms[n])

    def vertices(self, n: int) -> List[int]:
        self.extend(n)
        return [g.vertex for g in self.terms[n]]

    def syzygy_dim(self, n: int) -> int:
        """``dim Omega^n M``; ``n = 0`` gives ``dim M``."""
        dim = self.module.dim
        for k in range(n):
            self.extend(k)
            dim = sum(self.data.pdim[g.vertex] for g in self.terms[k]) - dim
        return dim

    def extend(self, n: int):
        while len(self.terms) <= n:
            self._step()

    def _radical_part(self, vecs, coords_from, coords_to, terms):
        """Sparse vectors ``a v`` spanning the radical of the submodule in one degree."""
        D = self.data
        index = {c: k for k, c in enumerate(coords_to)}
        out = []
        for a_idx, a in enumerate(D.rad_gens):
            for v in vecs:
                blocks: Dict[int, dict] = {}
                for k, x in v.items():
                    j, u = coords_from[k]
                    blocks.setdefault(j, {})[u] = x
                w = {}
                for j, loc in blocks.items():
                    cols = D.action_columns(("rad", a_idx), a, terms[j].vertex)
                    for u, x in _apply(cols, loc).items():
                        w[index[(j, u)]] = x
                if w:
                    out.append(w)
        return out

    def _step(self):
        """Append ``P_n`` (generators of the pending kernel) and compute the next kernel."""
        D = self.data
        fld = D.field
        n = len(self.terms)
        prev = self.terms[n - 1]
        coords = self._coords(n - 1)
        pending = self._pending
        gens: List[_Gen] = []
        for d in sorted(pending):
            K = pending[d]
            if not K:
                continue
            cd = coords[d]
            if self.graded:
                below = pending.get(d - 1)
                jk = self._radical_part(below, coords[d - 1], cd, prev) if below else []
            else:
                jk = self._radical_part(K, cd, cd, prev)
            if jk and sparse_rank(jk, len(cd), fld) == len(K):
                continue
            cands = []
            index = {c: k for k, c in enumerate(cd)}
            for i in range(D.nv):
                for v in K:
                    w = v if D.nv == 1 else self._idempotent_part(i, v, cd, index, prev)
                    if w:
                        cands.append((i, w))
            # greedy choice of candidates independent modulo jk: pivot columns
            cols = jk + [w for _, w in cands]
            for p in independent_indices(cols, len(cd), fld):
                if p >= len(jk):
                    i, w = cands[p - len(jk)]
                    img: Dict[int, dict] = {}
                    for k, x in w.items():
                        j, u = cd[k]
                        img.setdefault(j, {})[u] = x
                    gens.append(_Gen(i, d, img))
        self.terms.append(gens)
        self._pending = self._kernel(n)

    def _idempotent_part(self, i, v, cd, index, terms):
        """``e_i v`` for a sparse vector over the coordinates ``cd``."""
        D = self.data
        blocks: Dict[int, dict] = {}
        for k, x in v.items():
            j, u = cd[k]
            blocks.setdefault(j, {})[u] = x
        w = {}
        for j, loc in blocks.items():
            cols = D.action_columns(("idem", i), list(D.ring.idempotents[i]), terms[j].vertex)
            for u, x in _apply(cols, loc).items():
                w[index[(j, u)]] = x
        return w

    def _kernel(self, n):
        """Kernel of ``d_n : P_n -> P_{n-1}`` by degree, in ``P_n`` coordinates."""
        D = self.data
        cn = self._coords(n)
        cp = self._coords(n - 1)
        terms = self.terms[n]
        prev = self.terms[n - 1]
        out = {}
        for d, cols in cn.items():
            rows_idx = {c: k for k, c in enumerate(cp.get(d, []))}
            rows: List[dict] = [{} for _ in rows_idx]
            for c, (j, u) in enumerate(cols):
                g = terms[j]
                for s, loc in g.image.items():
                    act = D.local_basis_columns(g.vertex, u, prev[s].vertex)
                    for w, x in _apply(act, loc).items():
                        rows[rows_idx[(s, w)]][c] = x
            vecs = sparse_kernel(rows, len(cols), D.field)
            if vecs:
                out[d] = vecs
        return out

    # Ext -----------------------------------------------------------------

    def _hom_columns(self, n):
        """Basis of ``Hom(P_n, A)`` grouped by shift: ``{s: [(j, c), ...]}``."""
        D = self.data
        out: Dict[int, list] = {}
        for j, g in enumerate(self.terms[n]):
            for c, dc in enumerate(D.eRdeg[g.vertex]):
                shift = dc - g.degree if self.graded else 0
                out.setdefault(shift, []).append((j, c))
        return out

    def _dual_rank(self, n):
        """Rank of ``d_n^* : Hom(P_{n-1}, A) -> Hom(P_n, A)``.

        A map out of ``A e_j`` is fixed by the image of ``e_j``, an element
        of ``e_j A``, so ``d_n^*`` is left multiplication by the components
        of the generator images.
        """
        D = self.data
        ring = D.ring
        self.extend(n)
        prev = self.terms[n - 1]
        uses: Dict[int, list] = {}
        for k, g in enumerate(self.terms[n]):
            for j, loc in g.image.items():
                uses.setdefault(j, []).append((k, D.to_ring(prev[j].vertex, loc)))
        total = 0
        for cols in self._hom_columns(n - 1).values():
            rows_idx: Dict[Tuple[int, int], int] = {}
            vecs = []
            for j, c in cols:
                phi = D.eR[prev[j].vertex][c]
                entries = {}
                for k, a in uses.get(j, ()):
                    for t, x in enumerate(ring.multiply(a, phi)):
                        if x:
                            key = (k, t)
                            if key not in rows_idx:
                                rows_idx[key] = len(rows_idx)
                            entries[rows_idx[key]] = x
                vecs.append(entries)
            total += sparse_rank(vecs, len(rows_idx), D.field)
        return total

    def hom_dim(self, n: int) -> int:
        """``dim Hom(P_n, A)``."""
        self.extend(n)
        return sum(len(self.data.eR[g.vertex]) for g in self.terms[n])

    def ext_dim(self, n: int) -> int:
        """``dim Ext^n(M, A)`` for ``n >= 1``."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if n not in self._ext_cache:
            self.extend(n + 1)
            self._ext_cache[n] = self.hom_dim(n) - self._dual_rank(n) - self._dual_rank(n + 1)
        return self._ext_cache[n]

    def ext_dims(self, T: int) -> List[int]:
        return [self.ext_dim(i) for i in range(1, T + 1)]


def free_resolution(M: Module) -> FreeResolution:
    if "freeres" not in M._cache:
        M._cache["freeres"] = FreeResolution(M)
    return M._cache["freeres"]
