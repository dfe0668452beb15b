"""The schemes rep(A, d): equations, group action, strata and point counts."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

import numpy as np
import sympy

from .algebra.grading import DegreeTooHigh, GradedSplit, degree_split
from .algebra.presentation import Presentation
from .linalg import (PrimeField, identity, inverse, matmul, matrix, rank, sparse_nullspace,
                     sparse_rref, zeros)
from .modules import Representation, ShapeMismatch, end_dim

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(ValueError):
    pass


class SingularBlock(ValueError):
    pass


def _dims(P: Presentation, d) -> dict[str, int]:
    d = tuple(int(x) for x in d)
    if len(d) != P.n_vertices or min(d, default=0) < 0:
        raise ShapeMismatch(f"dimension vector {d} does not fit {P.n_vertices} vertices")
    return dict(zip(P.quiver.vertices, d))


# ---------------------------------------------------------------------------
# equations

def arrow_symbols(P: Presentation, d) -> dict[str, sympy.Matrix]:
    dim = _dims(P, d)
    out = {}
    for a in P.quiver.arrows:
        r, c = dim[a.target], dim[a.source]
        out[a.name] = sympy.Matrix(r, c, lambda i, j: sympy.Symbol(f"{a.name}_{i}{j}"))
    return out


def relation_equations(P: Presentation, d) -> list[sympy.Expr]:
    """Nonzero polynomial entries of M(rho) for every generating relation."""
    dim = _dims(P, d)
    X = arrow_symbols(P, d)
    eqs = []
    for rel in P.relations:
        acc = sympy.zeros(dim[rel.target], dim[rel.source])
        for c, p in rel.terms:
            term = sympy.eye(dim[p.target])
            for a in p.arrows:
                term = term * X[a]
            acc += sympy.Rational(c.numerator, c.denominator) * term
        eqs.extend(e for e in (sympy.expand(x) for x in acc) if e != 0)
    return eqs


def is_point(M: Representation) -> bool:
    return M.satisfies_relations()


# ---------------------------------------------------------------------------
# group action

def act(g: dict, M: Representation) -> Representation:
    """(g.M)(a) = g_t M(a) g_s^{-1}."""
    f = M.field
    inv = {}
    for v in M.presentation.quiver.vertices:
        m = g[v]
        if m.shape != (M.dim_at(v), M.dim_at(v)):
            raise ShapeMismatch(f"group block at {v} has shape {m.shape}")
        gi = inverse(m, f)
        if gi is None:
            raise SingularBlock(f"block at vertex {v} is singular")
        inv[v] = gi
    mats = {a.name: matmul(matmul(g[a.target], M.mats[a.name], f), inv[a.source], f)
            for a in M.presentation.quiver.arrows}
    return Representation(M.presentation, M.dims, mats)


def random_group_element(P: Presentation, d, rng: random.Random) -> dict:
    f = P.field
    dim = _dims(P, d)
    out = {}
    for v, n in dim.items():
        while True:
            m = matrix([[f.random(rng, 5) for _ in range(n)] for _ in range(n)], f, (n, n))
            if inverse(m, f) is not None:
                break
        out[v] = m
    return out


def group_dim(d) -> int:
    return sum(x * x for x in d)


def orbit_dim(M: Representation) -> int:
    return group_dim(M.dims) - end_dim(M)


# ---------------------------------------------------------------------------
# nilpotent orbits

def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in decreasing order of parts, lexicographically largest first."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def conjugate(lam: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(1 for x in lam if x > j) for j in range(max(lam, default=0)))


def nilpotent_orbit_dim(lam: Sequence[int]) -> int:
    """d^2 minus the centralizer dimension sum_j (lam'_j)^2."""
    d = sum(lam)
    return d * d - sum(x * x for x in conjugate(lam))


def jordan_matrix(lam: Sequence[int], f) -> np.ndarray:
    """Nilpotent Jordan form, blocks in the given order, ones on the superdiagonal."""
    d = sum(lam)
    m = zeros(d, d, f)
    pos = 0
    for k in lam:
        for i in range(k - 1):
            m[pos + i, pos + i + 1] = f.one
        pos += k
    return m


def jordan_type(m: np.ndarray, f) -> tuple[int, ...]:
    """Block sizes of a nilpotent matrix, from the ranks of its powers."""
    d = m.shape[0]
    ranks = [d]
    power = identity(d, f)
    while ranks[-1]:
        power = matmul(power, m, f)
        r = rank(power.tolist(), f)
        if r == ranks[-1]:
            raise ValueError("matrix is not nilpotent")
        ranks.append(r)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return tuple(parts)


def commutator_nullity(m: np.ndarray, f) -> int:
    """dim {X : XJ = JX}."""
    d = m.shape[0]
    rows = []
    for r in range(d):
        for c in range(d):
            row: dict = {}
            for k in range(d):
                # (XJ)[r,c] = sum_k X[r,k] J[k,c]; (JX)[r,c] = sum_k J[r,k] X[k,c]
                if m[k, c]:
                    row[r * d + k] = f.norm(row.get(r * d + k, 0) + m[k, c])
                if m[r, k]:
                    row[k * d + c] = f.norm(row.get(k * d + c, 0) - m[r, k])
            row = {k: x for k, x in row.items() if x}
            if row:
                rows.append(row)
    return d * d - len(sparse_rref(rows, f))


def orbit_dim_oracle(lam: Sequence[int], f) -> int:
    d = sum(lam)
    return d * d - commutator_nullity(jordan_matrix(lam, f), f)


# ---------------------------------------------------------------------------
# strata

@dataclass(frozen=True)
class Stratum:
    partitions: tuple[tuple[int, ...], ...]   # one partition per vertex, in quiver order
    orbit_dim: int
    fiber_dim: int
    dense: bool

    @property
    def dim(self) -> int:
        return self.orbit_dim + self.fiber_dim

    def to_json(self) -> dict:
        return {"partitions": [list(p) for p in self.partitions], "orbit_dim": self.orbit_dim,
                "fiber_dim": self.fiber_dim, "dim": self.dim, "dense": self.dense}


def _linear_split(P: Presentation) -> GradedSplit:
    split = degree_split(P)
    if split.max_degree >= 2:
        raise DegreeTooHigh("strata need relations of arrow degree <= 1")
    return split


def fiber_system(P: Presentation, split: GradedSplit, loops: dict, dim: dict):
    """Rows of the linear system on the non-loop arrow matrices with loops fixed.

    ``loops[v]`` is the matrix of the loop at v.  Returns (rows, n_unknowns).
    """
    f = P.field
    q = P.quiver
    loop_names = set(split.shape.loops)
    plain = [a for a in q.arrows if a.name not in loop_names]
    off = {}
    n = 0
    for a in plain:
        off[a.name] = n
        n += dim[a.target] * dim[a.source]
    cache: dict = {}

    def pw(v, k):
        key = (v, k)
        if key not in cache:
            m = identity(dim[v], f)
            for _ in range(k):
                m = matmul(m, loops[v], f)
            cache[key] = m
        return cache[key]

    rows = []
    for rel in split.by_degree[1] if len(split.by_degree) > 1 else ():
        t, s = rel.target, rel.source
        eqs: dict = {}
        for c, p in rel.terms:
            c = P.coefficient(c)
            k = next(i for i, a in enumerate(p.arrows) if a not in loop_names)
            a = q.arrow(p.arrows[k])
            L = pw(t, k)                         # loop power on the target side
            R = pw(s, len(p.arrows) - k - 1)     # loop power on the source side
            at, as_ = dim[a.target], dim[a.source]
            for r in range(dim[t]):
                for col in range(dim[s]):
                    row = eqs.setdefault((r, col), {})
                    for i in range(at):
                        lv = L[r, i]
                        if not lv:
                            continue
                        for j in range(as_):
                            rv = R[j, col]
                            if rv:
                                key = off[a.name] + i * as_ + j
                                row[key] = f.norm(row.get(key, 0) + c * lv * rv)
        for row in eqs.values():
            row = {k: x for k, x in row.items() if x}
            if row:
                rows.append(row)
    return rows, n


def fiber_dim(P: Presentation, loops: dict, d) -> int:
    """dim of the affine fiber over a fixed tuple of loop matrices."""
    split = _linear_split(P)
    dim = _dims(P, d)
    rows, n = fiber_system(P, split, loops, dim)
    return n - len(sparse_rref(rows, P.field))


def partition_tuples(P: Presentation, d) -> list[tuple[tuple[int, ...], ...]]:
    split = _linear_split(P)
    dim = _dims(P, d)
    c = dict(zip(split.shape.order, split.c))
    per = [list(partitions(dim[v], c[v])) for v in P.quiver.vertices]
    return list(product(*per))


def dense_tuple(P: Presentation, d) -> tuple[tuple[int, ...], ...]:
    split = _linear_split(P)
    dim = _dims(P, d)
    c = dict(zip(split.shape.order, split.c))
    out = []
    for v in P.quiver.vertices:
        k, r = divmod(dim[v], c[v])
        out.append((c[v],) * k + ((r,) if r else ()))
    return tuple(out)


def strata(P: Presentation, d) -> list[Stratum]:
    split = _linear_split(P)
    dim = _dims(P, d)
    dense = dense_tuple(P, d)
    out = []
    for tup in partition_tuples(P, d):
        loops = {v: jordan_matrix(lam, P.field) for v, lam in zip(P.quiver.vertices, tup)}
        rows, n = fiber_system(P, split, loops, dim)
        fib = n - len(sparse_rref(rows, P.field))
        orb = sum(nilpotent_orbit_dim(lam) for lam in tup)
        out.append(Stratum(tup, orb, fib, tup == dense))
    return out


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam >= mu in dominance order (same size)."""
    a = b = 0
    for k in range(max(len(lam), len(mu))):
        a += lam[k] if k < len(lam) else 0
        b += mu[k] if k < len(mu) else 0
        if a < b:
            return False
    return True


def sample_stratum_point(P: Presentation, d, tup, rng: random.Random,
                         conjugate_loops: bool = True) -> Representation:
    """Exact sample: conjugated Jordan loops and a random solution of the fiber system."""
    split = _linear_split(P)
    dim = _dims(P, d)
    f = P.field
    loops = {}
    for v, lam in zip(P.quiver.vertices, tup):
        J = jordan_matrix(lam, f)
        if conjugate_loops and dim[v]:
            g = random_group_element(P, d, rng)[v]
            J = matmul(matmul(g, J, f), inverse(g, f), f)
        loops[v] = J
    rows, n = fiber_system(P, split, loops, dim)
    basis = sparse_nullspace(rows, n, f)
    x = [f.zero] * n
    for b in basis:
        c = f.random(rng, 5)
        x = [f.norm(u + c * w) for u, w in zip(x, b)]
    loop_names = dict(zip(split.shape.order, split.shape.loops))
    mats = {loop_names[v]: m for v, m in loops.items()}
    pos = 0
    for a in P.quiver.arrows:
        if a.name in mats:
            continue
        r, c = dim[a.target], dim[a.source]
        mats[a.name] = matrix(x[pos:pos + r * c], f, (r, c))
        pos += r * c
    return Representation(P, [dim[v] for v in P.quiver.vertices], mats)


# ---------------------------------------------------------------------------
# finite fields

@dataclass
class PointCount:
    p: int
    dims: tuple[int, ...]
    total: int
    checked: int
    by_stratum: dict | None = None
    points: list | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"p": self.p, "dims": list(self.dims), "total": self.total, "checked": self.checked}
        if self.by_stratum is not None:
            out["by_stratum"] = [{"partitions": [list(x) for x in k], "count": v}
                                 for k, v in sorted(self.by_stratum.items(), reverse=True)]
        return out


def _over(P: Presentation, p: int) -> Presentation:
    F = PrimeField(p)
    return P if P.field == F else P.with_field(F)


def _binnable(P: Presentation) -> GradedSplit | None:
    try:
        return _linear_split(P)
    except ValueError:
        return None


def enumerate_points(P: Presentation, d, p: int, max_enum: int = DEFAULT_BUDGET,
                     collect: bool = False, chunk: int = 1 << 16) -> PointCount:
    """Exhaustive search over all arrow-matrix tuples over F_p."""
    P = _over(P, p)
    dim = _dims(P, d)
    q = P.quiver
    shapes = [(a.name, dim[a.target], dim[a.source]) for a in q.arrows]
    nvar = sum(r * c for _, r, c in shapes)
    if nvar * math.log(p) > math.log(max_enum) + 1e-9:
        raise BudgetExceeded(f"{p}^{nvar} tuples exceed the budget {max_enum}")
    total = p ** nvar
    rels = []
    for rel in P.relations:
        rels.append((dim[rel.target], dim[rel.source],
                     [(int(P.coefficient(c)), p_.arrows) for c, p_ in rel.terms]))
    split = _binnable(P)
    loop_cols = []
    if split is not None:
        loop_names = set(split.shape.loops)
        off = 0
        for name, r, c in shapes:
            if name in loop_names:
                loop_cols.extend(range(off, off + r * c))
            off += r * c
    found_digits = []
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        x = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((stop - start, nvar), dtype=np.int64)
        for k in range(nvar):
            digits[:, k] = x % p
            x //= p
        mats = {}
        off = 0
        for name, r, c in shapes:
            mats[name] = digits[:, off:off + r * c].reshape(stop - start, r, c)
            off += r * c
        ok = np.ones(stop - start, dtype=bool)
        for rt, rs, terms in rels:
            acc = np.zeros((stop - start, rt, rs), dtype=np.int64)
            for coef, arrows in terms:
                prod_ = mats[arrows[0]]
                for a in arrows[1:]:
                    prod_ = np.matmul(prod_, mats[a]) % p
                acc = (acc + coef * prod_) % p
            ok &= ~acc.reshape(stop - start, -1).any(axis=1)
        found_digits.append(digits[ok])
    pts = np.concatenate(found_digits) if found_digits else np.zeros((0, nvar), dtype=np.int64)
    result = PointCount(p, tuple(dim[v] for v in q.vertices), int(len(pts)), total)
    if split is not None:
        result.by_stratum = _bin_by_jordan(P, dim, shapes, pts, split)
    if collect:
        result.points = []
        for row in pts:
            mats = {}
            off = 0
            for name, r, c in shapes:
                mats[name] = matrix([int(v) for v in row[off:off + r * c]], P.field, (r, c))
                off += r * c
            result.points.append(Representation(P, result.dims, mats))
    return result


def _bin_by_jordan(P, dim, shapes, pts, split) -> dict:
    f = P.field
    loop_of = dict(zip(split.shape.order, split.shape.loops))
    where = {}
    off = 0
    for name, r, c in shapes:
        where[name] = (off, r, c)
        off += r * c
    cols = []
    for v in P.quiver.vertices:
        o, r, c = where[loop_of[v]]
        cols.extend(range(o, o + r * c))
    counts: dict = {}
    if not len(pts):
        return counts
    sub = pts[:, cols] if cols else np.zeros((len(pts), 0), dtype=np.int64)
    uniq, inv = np.unique(sub, axis=0, return_inverse=True)
    inv = np.asarray(inv).reshape(-1)
    tally = np.bincount(inv, minlength=len(uniq))
    for k, row in enumerate(uniq):
        pos = 0
        key = []
        for v in P.quiver.vertices:
            n = dim[v]
            m = matrix([int(x) for x in row[pos:pos + n * n]], f, (n, n))
            pos += n * n
            key.append(jordan_type(m, f))
        key = tuple(key)
        counts[key] = counts.get(key, 0) + int(tally[k])
    return counts


def _nilpotents(n: int, c: int, p: int, max_enum: int) -> list[np.ndarray]:
    """All n x n matrices over F_p with m^c = 0."""
    if n == 0:
        return [np.zeros((0, 0), dtype=np.int64)]
    if n * n * math.log(p) > math.log(max_enum) + 1e-9:
        raise BudgetExceeded(f"{p}^{n * n} loop matrices exceed the budget")
    total = p ** (n * n)
    x = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n * n), dtype=np.int64)
    for k in range(n * n):
        digits[:, k] = x % p
        x //= p
    m = digits.reshape(total, n, n)
    acc = m
    for _ in range(c - 1):
        acc = np.matmul(acc, m) % p
    keep = ~acc.reshape(total, -1).any(axis=1)
    return list(m[keep])


def count_points_fibered(P: Presentation, d, p: int,
                         max_enum: int = DEFAULT_BUDGET) -> PointCount:
    """Exact |rep(A,d)(F_p)| for degree-<=1 linear presentations.

    Enumerates loop tuples only; the fiber over each is an affine space of
    dimension given by the linear system on the remaining arrows.
    """
    P = _over(P, p)
    split = _linear_split(P)
    dim = _dims(P, d)
    c = dict(zip(split.shape.order, split.c))
    for rel in split.by_degree[0]:
        if not rel.is_monomial:
            raise ValueError("loop relations must be monomials for fibered counting")
    per = [_nilpotents(dim[v], c[v], p, max_enum) for v in P.quiver.vertices]
    combos = math.prod(len(x) for x in per)
    if combos > max_enum:
        raise BudgetExceeded(f"{combos} loop tuples exceed the budget")
    f = P.field
    types = [[jordan_type(matrix(m.tolist(), f, m.shape), f) for m in ms] for ms in per]
    objs = [[matrix(m.tolist(), f, m.shape) for m in ms] for ms in per]
    counts: dict = {}
    total = 0
    vs = P.quiver.vertices
    for idx in product(*(range(len(x)) for x in per)):
        loops = {v: objs[k][i] for k, (v, i) in enumerate(zip(vs, idx))}
        rows, n = fiber_system(P, split, loops, dim)
        npts = p ** (n - len(sparse_rref(rows, f)))
        key = tuple(types[k][i] for k, i in enumerate(idx))
        counts[key] = counts.get(key, 0) + npts
        total += npts
    return PointCount(p, tuple(dim[v] for v in vs), total, combos, counts)


def count_points(P: Presentation, d, p: int, max_enum: int = DEFAULT_BUDGET) -> PointCount:
    """Exhaustive enumeration within budget, else the fibered count when applicable."""
    try:
        return enumerate_points(P, d, p, max_enum)
    except BudgetExceeded:
        if _binnable(_over(P, p)) is None:
            raise
        return count_points_fibered(P, d, p, max_enum)


def dimension_from_counts(counts: dict[int, int]) -> int:
    """Dimension read off point counts N_p ~ p^dim at the two largest primes.

    Uses the slope of log N_p against log p between them; lower-order terms
    bias the estimate at p = 2.
    """
    ps = sorted(p for p, n in counts.items() if n > 0)
    if len(ps) < 2:
        raise ValueError("need counts at two primes")
    a, b = ps[-2], ps[-1]
    slope = (math.log(counts[b]) - math.log(counts[a])) / (math.log(b) - math.log(a))
    return round(slope)
