"""Finite-dimensional modules given as quiver representations.

A representation assigns a d_v-dimensional space to every vertex and a
d_{t(a)} x d_{s(a)} matrix to every arrow; for a path p = a_1 ... a_m,
M(p) = M(a_1) ... M(a_m).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from .algebra.presentation import Presentation
from .algebra.table import AlgebraTable, truncated_quotient
from .linalg import (FieldMismatch, Subspace, identity, is_zero, matmul, matrix, nullspace, rank,
                     sparse_nullspace, zeros)
from .quiver import Path


class AlgebraMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class NotLocallyFree(ValueError):
    def __init__(self, vertex: str):
        super().__init__(f"e_{vertex}M is not free over e_{vertex}Ae_{vertex}")
        self.vertex = vertex


class NotTruncatedPolynomial(ValueError):
    pass


class Representation:
    """Immutable tuple of arrow matrices over the presentation's field."""

    def __init__(self, presentation: Presentation, dims, mats: dict | None = None):
        self.presentation = presentation
        self.field = presentation.field
        q = presentation.quiver
        dims = tuple(int(x) for x in dims)
        if len(dims) != len(q.vertices):
            raise ShapeMismatch(f"dimension vector {dims} has wrong length")
        self.dims = dims
        self._dim = dict(zip(q.vertices, dims))
        mats = dict(mats or {})
        out = {}
        for a in q.arrows:
            shape = (self._dim[a.target], self._dim[a.source])
            m = mats.pop(a.name, None)
            if m is None:
                m = zeros(*shape, self.field)
            elif not isinstance(m, np.ndarray) or m.dtype != object:
                try:
                    m = matrix(m, self.field, shape)
                except FieldMismatch:
                    raise
                except ValueError:
                    raise ShapeMismatch(f"arrow {a.name}: entries do not fit {shape}") from None
            if m.shape != shape:
                raise ShapeMismatch(f"arrow {a.name}: expected {shape}, got {m.shape}")
            m.setflags(write=False)
            out[a.name] = m
        if mats:
            raise ShapeMismatch(f"unknown arrows {sorted(mats)}")
        self.mats = out

    # -- basics -------------------------------------------------------------

    def dim_at(self, v) -> int:
        return self._dim[str(v)]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def __getitem__(self, arrow: str) -> np.ndarray:
        return self.mats[arrow]

    def eval_path(self, p: Path) -> np.ndarray:
        out = identity(self.dim_at(p.target), self.field)
        for a in p.arrows:
            out = matmul(out, self.mats[a], self.field)
        return out

    def eval_relation(self, rel) -> np.ndarray:
        f = self.field
        out = zeros(self.dim_at(rel.target), self.dim_at(rel.source), f)
        for c, p in rel.terms:
            out = out + self.eval_path(p) * self.presentation.coefficient(c)
        return np.vectorize(f.norm, otypes=[object])(out) if out.size else out

    def satisfies_relations(self) -> bool:
        return all(is_zero(self.eval_relation(r), self.field) for r in self.presentation.relations)

    def to_json(self) -> dict:
        f = self.field
        return {
            "dims": list(self.dims),
            "matrices": {a: [[f.to_json(x) for x in row] for row in m.tolist()]
                         for a, m in self.mats.items()},
        }

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.presentation == other.presentation
                and self.dims == other.dims
                and all(np.array_equal(self.mats[a], other.mats[a]) for a in self.mats))

    def __hash__(self):
        return hash((self.dims, tuple((a, tuple(m.flat)) for a, m in self.mats.items())))

    def __repr__(self):
        return f"Representation(dims={self.dims})"


def _same_algebra(M: Representation, N: Representation) -> None:
    if M.presentation != N.presentation:
        raise AlgebraMismatch("modules over different presentations")


def zero_module(P: Presentation) -> Representation:
    return Representation(P, [0] * P.n_vertices)


def simple(P: Presentation, v) -> Representation:
    return Representation(P, [1 if x == str(v) else 0 for x in P.quiver.vertices])


def direct_sum(*modules: Representation) -> Representation:
    if not modules:
        raise ValueError("need at least one summand")
    P = modules[0].presentation
    for M in modules[1:]:
        _same_algebra(modules[0], M)
    f = P.field
    dims = [sum(M.dims[i] for M in modules) for i in range(P.n_vertices)]
    mats = {}
    for a in P.quiver.arrows:
        m = zeros(dims[P.quiver.vertex_index[a.target]], dims[P.quiver.vertex_index[a.source]], f)
        r = c = 0
        for M in modules:
            b = M.mats[a.name]
            m[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        mats[a.name] = m
    return Representation(P, dims, mats)


def power(M: Representation, k: int) -> Representation:
    return direct_sum(*([M] * k)) if k else zero_module(M.presentation)


# ---------------------------------------------------------------------------
# Hom

@dataclass(frozen=True)
class HomBasis:
    source: Representation
    target: Representation
    basis: tuple[dict, ...]        # vertex -> d^N_v x d^M_v matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> dict:
        f = self.source.field
        out = {v: zeros(self.target.dim_at(v), self.source.dim_at(v), f)
               for v in self.source.presentation.quiver.vertices}
        for c, h in zip(coeffs, self.basis):
            if c:
                for v in out:
                    out[v] = out[v] + h[v] * c
        return {v: np.vectorize(f.norm, otypes=[object])(m) if m.size else m
                for v, m in out.items()}


def _hom_layout(M: Representation, N: Representation):
    off = {}
    n = 0
    for v in M.presentation.quiver.vertices:
        off[v] = n
        n += N.dim_at(v) * M.dim_at(v)
    return off, n


def hom_equations(M: Representation, N: Representation):
    """Sparse rows of N(a) f_s - f_t M(a) = 0 in the entries of (f_v)."""
    f = M.field
    off, n = _hom_layout(M, N)
    rows = []
    for a in M.presentation.quiver.arrows:
        s, t = a.source, a.target
        Na, Ma = N.mats[a.name], M.mats[a.name]
        ms, nt = M.dim_at(s), N.dim_at(t)
        for r in range(nt):
            for c in range(ms):
                row: dict = {}
                for k in range(N.dim_at(s)):
                    x = Na[r, k]
                    if x:
                        key = off[s] + k * ms + c
                        row[key] = f.norm(row.get(key, 0) + x)
                for k in range(M.dim_at(t)):
                    x = Ma[k, c]
                    if x:
                        key = off[t] + r * M.dim_at(t) + k
                        row[key] = f.norm(row.get(key, 0) - x)
                row = {k: x for k, x in row.items() if x}
                if row:
                    rows.append(row)
    return rows, n, off


def hom_basis(M: Representation, N: Representation) -> HomBasis:
    _same_algebra(M, N)
    rows, n, off = hom_equations(M, N)
    f = M.field
    basis = []
    for vec in sparse_nullspace(rows, n, f):
        h = {}
        for v in M.presentation.quiver.vertices:
            dn, dm = N.dim_at(v), M.dim_at(v)
            block = vec[off[v]:off[v] + dn * dm]
            h[v] = matrix(block, f, (dn, dm)) if dn * dm else zeros(dn, dm, f)
        basis.append(h)
    return HomBasis(M, N, tuple(basis))


def hom_dim(M: Representation, N: Representation) -> int:
    _same_algebra(M, N)
    rows, n, _ = hom_equations(M, N)
    return n - rank_sparse(rows, M.field)


def rank_sparse(rows, field) -> int:
    from .linalg import sparse_rref
    return len(sparse_rref(rows, field))


def end_dim(M: Representation) -> int:
    return hom_dim(M, M)


def is_homomorphism(h: dict, M: Representation, N: Representation) -> bool:
    f = M.field
    for a in M.presentation.quiver.arrows:
        lhs = matmul(N.mats[a.name], h[a.source], f)
        rhs = matmul(h[a.target], M.mats[a.name], f)
        if not is_zero(np.vectorize(f.norm, otypes=[object])(lhs - rhs) if lhs.size else lhs, f):
            return False
    return True


# ---------------------------------------------------------------------------
# submodules and quotients

def _columns(m: np.ndarray) -> list[list]:
    return [list(m[:, j]) for j in range(m.shape[1])]


def submodule(M: Representation, spaces: dict) -> tuple[Representation, dict]:
    """Representation on the given invariant subspaces and the inclusion matrices.

    ``spaces[v]`` is an iterable of vectors spanning a subspace of M_v; the
    family must be closed under the arrows.
    """
    f = M.field
    q = M.presentation.quiver
    subs = {v: Subspace(spaces.get(v, []), M.dim_at(v), f) for v in q.vertices}
    incl = {}
    for v, S in subs.items():
        B = S.basis()
        incl[v] = matrix(B, f, (len(B), M.dim_at(v))).T.copy() if B else zeros(M.dim_at(v), 0, f)
    mats = {}
    for a in q.arrows:
        S_tgt = subs[a.target]
        img = matmul(M.mats[a.name], incl[a.source], f)
        m = zeros(S_tgt.dim, subs[a.source].dim, f)
        for j in range(img.shape[1]):
            for i, x in enumerate(S_tgt.coords(list(img[:, j]))):
                m[i, j] = x
        mats[a.name] = m
    dims = [subs[v].dim for v in q.vertices]
    return Representation(M.presentation, dims, mats), incl


def quotient(M: Representation, spaces: dict) -> tuple[Representation, dict]:
    """M modulo an invariant family of subspaces, with the projection matrices."""
    f = M.field
    q = M.presentation.quiver
    subs = {v: Subspace(spaces.get(v, []), M.dim_at(v), f) for v in q.vertices}
    proj = {}
    for v, S in subs.items():
        d = M.dim_at(v)
        m = zeros(len(S.free), d, f)
        for j in range(d):
            e = [f.zero] * d
            e[j] = f.one
            for i, x in enumerate(S.quotient_coords(e)):
                m[i, j] = x
        proj[v] = m
    mats = {}
    for a in q.arrows:
        S_src, S_tgt = subs[a.source], subs[a.target]
        m = zeros(len(S_tgt.free), len(S_src.free), f)
        Ma = M.mats[a.name]
        for j, c in enumerate(S_src.free):
            col = list(Ma[:, c])
            for i, x in enumerate(S_tgt.quotient_coords(col)):
                m[i, j] = x
        mats[a.name] = m
    dims = [len(subs[v].free) for v in q.vertices]
    return Representation(M.presentation, dims, mats), proj


def radical_spaces(M: Representation) -> dict:
    out = {v: [] for v in M.presentation.quiver.vertices}
    for a in M.presentation.quiver.arrows:
        out[a.target].extend(_columns(M.mats[a.name]))
    return out


def socle_spaces(M: Representation) -> dict:
    f = M.field
    q = M.presentation.quiver
    out = {}
    for v in q.vertices:
        rows = []
        for a in q.arrows:
            if a.source == v:
                rows.extend(list(r) for r in M.mats[a.name])
        out[v] = nullspace(rows, M.dim_at(v), f) if rows else \
            [[f.one if i == j else f.zero for j in range(M.dim_at(v))] for i in range(M.dim_at(v))]
    return out


def radical(M: Representation) -> Representation:
    return submodule(M, radical_spaces(M))[0]


def socle(M: Representation) -> Representation:
    return submodule(M, socle_spaces(M))[0]


def top(M: Representation) -> Representation:
    return quotient(M, radical_spaces(M))[0]


def is_semisimple(M: Representation) -> bool:
    return all(not m.size or is_zero(m, M.field) for m in M.mats.values())


# ---------------------------------------------------------------------------
# isomorphism

def _invertible(h: dict, f) -> bool:
    return all(m.shape[0] == m.shape[1] and rank(m.tolist(), f) == m.shape[0]
               for m in h.values())


def is_isomorphic(M: Representation, N: Representation, seed: int = 0,
                  retries: int = 8, exhaustive_limit: int = 4096) -> bool:
    """Search for an invertible intertwiner.

    Over the rationals a generic combination of a Hom basis is invertible
    whenever an isomorphism exists; ``retries`` random combinations are tried.
    Over F_p all combinations are tried when there are at most
    ``exhaustive_limit`` of them.
    """
    _same_algebra(M, N)
    if M.dims != N.dims:
        return False
    if M.dim == 0:
        return True
    H = hom_basis(M, N)
    if H.dim == 0:
        return False
    f = M.field
    p = getattr(f, "p", None)
    if p is not None and p ** H.dim <= exhaustive_limit:
        for coeffs in product(range(p), repeat=H.dim):
            if any(coeffs) and _invertible(H.combine(coeffs), f):
                return True
        return False
    rng = random.Random(seed)
    tries = retries if p is None else 4 * retries
    for _ in range(tries):
        coeffs = [f.random(rng, 10 ** 6) for _ in range(H.dim)]
        if _invertible(H.combine(coeffs), f):
            return True
    return False


# ---------------------------------------------------------------------------
# projectives, injectives, duality

def projective(P: Presentation, v, table: AlgebraTable | None = None) -> Representation:
    """A e_v: spaces e_jAe_v, arrows acting by left multiplication."""
    table = table or truncated_quotient(P)
    v = str(v)
    f = P.field
    q = P.quiver
    blocks = {j: table.block(j, v) for j in q.vertices}
    pos = {j: {b: k for k, b in enumerate(bl)} for j, bl in blocks.items()}
    mats = {}
    for a in q.arrows:
        ia = table.index[Path(a.source, a.target, (a.name,))]
        m = zeros(len(blocks[a.target]), len(blocks[a.source]), f)
        for col, b in enumerate(blocks[a.source]):
            for k, x in table.mul(ia, b).items():
                m[pos[a.target][k], col] = x
        mats[a.name] = m
    return Representation(P, [len(blocks[j]) for j in q.vertices], mats)


def regular(P: Presentation) -> Representation:
    table = truncated_quotient(P)
    return direct_sum(*(projective(P, v, table) for v in P.quiver.vertices))


def dual(M: Representation) -> Representation:
    """D M = Hom_K(M, K), a representation of the opposite presentation."""
    Pop = M.presentation.opposite()
    mats = {a: m.T.copy() for a, m in M.mats.items()}
    return Representation(Pop, M.dims, mats)


def injective(P: Presentation, v) -> Representation:
    """D(e_v A), built from the projective A^op e_v."""
    return dual(projective(P.opposite(), v))


def injective_cogenerator(P: Presentation) -> Representation:
    """D(A_A)."""
    return direct_sum(*(injective(P, v) for v in P.quiver.vertices))


def projective_and_injective(P: Presentation, v) -> tuple[Representation, Representation]:
    return projective(P, v), injective(P, v)


# ---------------------------------------------------------------------------
# covers, syzygies, Ext

def projective_cover(M: Representation, table: AlgebraTable | None = None):
    """(P0, pi) with pi: P0 -> M surjective and P0 minimal; pi is per-vertex matrices."""
    Pres = M.presentation
    table = table or truncated_quotient(Pres)
    f = M.field
    q = Pres.quiver
    rad = radical_spaces(M)
    gens = []   # (vertex, vector in M_v)
    for v in q.vertices:
        S = Subspace(rad[v], M.dim_at(v), f)
        for c in S.free:
            e = [f.zero] * M.dim_at(v)
            e[c] = f.one
            gens.append((v, e))
    summands = []
    pis = []
    for v, m in gens:
        Pv = projective(Pres, v, table)
        pi = {}
        mvec = matrix([m], f, (len(m), 1)) if m else zeros(0, 1, f)
        for j in q.vertices:
            cols = []
            for b in table.block(j, v):
                cols.append(matmul(M.eval_path(table.basis[b]), mvec, f)[:, 0])
            pi[j] = np.stack(cols, axis=1) if cols else zeros(M.dim_at(j), 0, f)
        summands.append(Pv)
        pis.append(pi)
    if not summands:
        return zero_module(Pres), {v: zeros(M.dim_at(v), 0, f) for v in q.vertices}
    P0 = direct_sum(*summands)
    pi = {j: np.concatenate([p[j] for p in pis], axis=1) for j in q.vertices}
    return P0, pi


def syzygy(M: Representation, table: AlgebraTable | None = None) -> Representation:
    P0, pi = projective_cover(M, table)
    f = M.field
    ker = {v: nullspace(pi[v].tolist(), P0.dim_at(v), f) if pi[v].shape[0] else
           [[f.one if i == j else f.zero for j in range(P0.dim_at(v))]
            for i in range(P0.dim_at(v))]
           for v in M.presentation.quiver.vertices}
    return submodule(P0, ker)[0]


def ext1_dim(M: Representation, N: Representation) -> int:
    _same_algebra(M, N)
    P0, _ = projective_cover(M)
    omega = syzygy(M)
    return hom_dim(omega, N) - hom_dim(P0, N) + hom_dim(M, N)


def is_rigid(M: Representation) -> bool:
    return ext1_dim(M, M) == 0


def projective_dimension(M: Representation, bound: int | None = None) -> int | None:
    """pd(M) when it is at most ``bound`` (default dim A), else None."""
    table = truncated_quotient(M.presentation)
    if bound is None:
        bound = table.dim
    cur = M
    for k in range(bound + 1):
        nxt = syzygy(cur, table)
        if nxt.dim == 0:
            return k
        cur = nxt
    return None


def injective_dimension(M: Representation, bound: int | None = None) -> int | None:
    if bound is None:
        bound = truncated_quotient(M.presentation).dim
    return projective_dimension(dual(M), bound)


def resolution(M: Representation, steps: int) -> list[Representation]:
    """[M, Omega M, Omega^2 M, ...] of length steps + 1 (stops at zero)."""
    table = truncated_quotient(M.presentation)
    out = [M]
    for _ in range(steps):
        if out[-1].dim == 0:
            break
        out.append(syzygy(out[-1], table))
    return out


# ---------------------------------------------------------------------------
# local freeness

def loop_degrees(P: Presentation) -> dict[str, int]:
    table = truncated_quotient(P)
    out = {}
    for v, c in table.loop_degrees().items():
        if c is None:
            raise NotTruncatedPolynomial(f"e_{v}Ae_{v} is not a truncated polynomial ring")
        out[v] = c
    return out


def locally_free_rank(M: Representation) -> tuple[int, ...]:
    """Ranks of e_vM over K[eps_v]/(eps_v^c_v); raises NotLocallyFree."""
    cs = loop_degrees(M.presentation)
    q = M.presentation.quiver
    out = []
    for v in q.vertices:
        d = M.dim_at(v)
        loops = q.loops_at(v)
        if not loops:
            out.append(d)
            continue
        m = M.mats[loops[0].name]
        blocks = d - rank(m.tolist(), M.field) if d else 0
        if blocks * cs[v] != d:
            raise NotLocallyFree(v)
        out.append(blocks)
    return tuple(out)


def is_locally_free(M: Representation) -> bool:
    try:
        locally_free_rank(M)
    except NotLocallyFree:
        return False
    return True


def dim_label(x: int | None, bound: int) -> int | str:
    return f">={bound}" if x is None else x


def homological_dims(M: Representation, bound: int | None = None):
    """(pd, id) with None standing for "at least the bound"."""
    return projective_dimension(M, bound), injective_dimension(M, bound)


@dataclass(frozen=True)
class GorensteinReport:
    bound: int
    pd_injective_cogenerator: int | None
    id_regular: int | None
    samples: tuple[dict, ...] = ()

    @property
    def gorenstein(self) -> bool:
        return (self.pd_injective_cogenerator is not None
                and self.pd_injective_cogenerator == self.id_regular)

    def to_json(self) -> dict:
        b = self.bound
        return {
            "bound": b,
            "pd_D(A_A)": dim_label(self.pd_injective_cogenerator, b),
            "id_A": dim_label(self.id_regular, b),
            "finite_and_equal": self.gorenstein,
            "samples": list(self.samples),
        }


def gorenstein_check(P: Presentation, samples=(), bound: int | None = None) -> GorensteinReport:
    table = truncated_quotient(P)
    B = table.dim if bound is None else bound

    def worst(values):
        if any(x is None for x in values):
            return None
        return max(values, default=0)

    pd_d = worst([projective_dimension(injective(P, v), B) for v in P.quiver.vertices])
    id_a = worst([injective_dimension(projective(P, v, table), B) for v in P.quiver.vertices])
    rows = []
    for M in samples:
        pd, idim = homological_dims(M, B)
        try:
            lf = is_locally_free(M)
        except NotTruncatedPolynomial:
            lf = None
        rows.append({"dims": list(M.dims), "pd": dim_label(pd, B), "id": dim_label(idim, B),
                     "locally_free": lf,
                     "consistent": lf is None or ((pd is not None) == (idim is not None) == lf)})
    return GorensteinReport(B, pd_d, id_a, tuple(rows))
