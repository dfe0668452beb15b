"""The finite-dimensional algebra KQ/(I + J^L) as an explicit basis with
structure constants.

The ideal (I + J^L)/J^L is computed as the smallest subspace of the span of
paths of length < L that contains the relations and is closed under left and
right multiplication by arrows.  Paths are ordered by length and then by their
arrow indices read from the source end; the pivot of every row is its largest
path.  This order is compatible with concatenation on both sides, so the
non-pivot ("standard") paths are closed under taking subpaths and form a basis
of the quotient.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from ..linalg import OrderedEchelon
from ..quiver import Path
from .presentation import Presentation


def path_key(presentation: Presentation):
    q = presentation.quiver
    aidx = q.arrow_index
    vidx = q.vertex_index

    @lru_cache(maxsize=None)
    def key(p: Path):
        return (len(p.arrows), tuple(aidx[a] for a in reversed(p.arrows)),
                vidx[p.source], vidx[p.target])

    return key


class AlgebraTable:
    """Basis, structure constants and idempotents of KQ/(I + J^L)."""

    def __init__(self, presentation: Presentation, level: int | None = None):
        self.presentation = presentation
        self.field = presentation.field
        self.quiver = presentation.quiver
        self.level = presentation.truncation if level is None else level
        self._key = path_key(presentation)
        self._ideal = OrderedEchelon(self.field, self._key)
        self._close_ideal()
        self._ideal.finalize()
        self.basis: tuple[Path, ...] = tuple(sorted(self._standard_paths(), key=self._key))
        self.index: dict[Path, int] = {p: i for i, p in enumerate(self.basis)}
        self._mul: dict[tuple[int, int], dict[int, object]] = {}
        self._reduced: dict[Path, dict[int, object]] = {}

    # -- construction -------------------------------------------------------

    def _left(self, a, v: dict) -> dict:
        L = self.level
        out = {}
        for p, c in v.items():
            if p.target == a.source and p.length + 1 < L:
                out[Path(p.source, a.target, (a.name,) + p.arrows)] = c
        return out

    def _right(self, a, v: dict) -> dict:
        L = self.level
        out = {}
        for p, c in v.items():
            if p.source == a.target and p.length + 1 < L:
                out[Path(a.source, p.target, p.arrows + (a.name,))] = c
        return out

    def _close_ideal(self) -> None:
        P = self.presentation
        L = self.level
        arrows = self.quiver.arrows
        queue = deque()
        for rel in P.relations:
            v = {}
            for c, p in rel.terms:
                if p.length < L:
                    v[p] = P.coefficient(c)
            if v:
                queue.append(v)
        while queue:
            row = self._ideal.add(queue.popleft())
            if row is None:
                continue
            for a in arrows:
                w = self._left(a, row)
                if w:
                    queue.append(w)
                w = self._right(a, row)
                if w:
                    queue.append(w)

    def _standard_paths(self) -> list[Path]:
        L = self.level
        layer = [Path.trivial(v) for v in self.quiver.vertices]
        out = list(layer)
        for _ in range(L - 1):
            nxt = []
            for p in layer:
                for a in self.quiver.arrows:
                    if a.target == p.source:
                        q = Path(a.source, p.target, p.arrows + (a.name,))
                        if q not in self._ideal:
                            nxt.append(q)
            out.extend(nxt)
            layer = nxt
        return out

    # -- arithmetic ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, p: Path) -> dict[int, object]:
        """Coordinates of the image of a path in the basis."""
        hit = self._reduced.get(p)
        if hit is not None:
            return hit
        if p.length >= self.level:
            out = {}
        elif p in self.index:
            out = {self.index[p]: self.field.one}
        else:
            nf = self._ideal.normal_form({p: self.field.one})
            out = {self.index[q]: c for q, c in nf.items()}
        self._reduced[p] = out
        return out

    def element(self, terms) -> dict[int, object]:
        """Coordinates of a linear combination given as (coefficient, path) pairs."""
        f = self.field
        out: dict[int, object] = {}
        for c, p in terms:
            c = f(c)
            for i, x in self.reduce(p).items():
                w = f.norm(out.get(i, 0) + c * x)
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
        return out

    def mul(self, i: int, j: int) -> dict[int, object]:
        """b_i * b_j in coordinates."""
        key = (i, j)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        p, q = self.basis[i], self.basis[j]
        if p.source != q.target:
            out = {}
        else:
            out = self.reduce(Path(q.source, p.target, p.arrows + q.arrows))
        self._mul[key] = out
        return out

    def mul_vec(self, x: dict, y: dict) -> dict:
        f = self.field
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul(i, j).items():
                    w = f.norm(out.get(k, 0) + a * b * c)
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
        return out

    # -- structure ----------------------------------------------------------

    def idempotent(self, v) -> int:
        return self.index[Path.trivial(v)]

    def block(self, target, source) -> list[int]:
        """Basis indices spanning e_target A e_source."""
        t, s = str(target), str(source)
        return [i for i, p in enumerate(self.basis) if p.target == t and p.source == s]

    def dim_block(self, target, source) -> int:
        return len(self.block(target, source))

    def loop_degree(self, v) -> int | None:
        """c with e_v A e_v = K[eps]/(eps^c) generated by the loop at v, else None."""
        v = str(v)
        c = self.dim_block(v, v)
        loops = self.quiver.loops_at(v)
        if not loops:
            return 1 if c == 1 else None
        if len(loops) > 1:
            return None
        eps = loops[0].name
        power = Path(v, v, (eps,) * (c - 1))
        return c if self.reduce(power) else None

    def loop_degrees(self) -> dict[str, int | None]:
        return {v: self.loop_degree(v) for v in self.quiver.vertices}

    def is_zero_path(self, p: Path) -> bool:
        return not self.reduce(p)

    def check_idempotents(self) -> bool:
        """e_v pairwise orthogonal, sum to 1 on every basis element."""
        f = self.field
        es = [self.idempotent(v) for v in self.quiver.vertices]
        for a in es:
            for b in es:
                expect = {a: f.one} if a == b else {}
                if self.mul(a, b) != expect:
                    return False
        for i in range(self.dim):
            left: dict = {}
            right: dict = {}
            for e in es:
                for k, x in self.mul(e, i).items():
                    left[k] = f.norm(left.get(k, 0) + x)
                for k, x in self.mul(i, e).items():
                    right[k] = f.norm(right.get(k, 0) + x)
            unit = {i: f.one}
            if {k: x for k, x in left.items() if x} != unit:
                return False
            if {k: x for k, x in right.items() if x} != unit:
                return False
        return True

    def check_associativity(self, full_limit: int = 30, samples: int = 2000,
                            seed: int = 0) -> bool:
        n = self.dim
        if n <= full_limit:
            triples = product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(samples))
        for i, j, k in triples:
            left = self.mul_vec(self.mul(i, j), {k: self.field.one})
            right = self.mul_vec({i: self.field.one}, self.mul(j, k))
            if left != right:
                return False
        return True

    def nonzero_paths(self, length: int):
        """Yield paths of the given length whose image in A is nonzero.

        Uses that a path with zero image stays zero under extension.
        """
        layer = [Path.trivial(v) for v in self.quiver.vertices]
        for _ in range(length):
            nxt = []
            for p in layer:
                for a in self.quiver.arrows:
                    if a.target == p.source:
                        q = Path(a.source, p.target, p.arrows + (a.name,))
                        if self.reduce(q):
                            nxt.append(q)
            layer = nxt
        yield from layer

    def radical_length(self) -> int:
        """Smallest N with every path of length N zero in A (capped at the level)."""
        for n in range(1, self.level + 1):
            if next(self.nonzero_paths(n), None) is None:
                return n
        return self.level


_TABLES: dict = {}


def truncated_quotient(presentation: Presentation, level: int | None = None) -> AlgebraTable:
    """Basis and structure constants of KQ/(I + J^L); cached per presentation."""
    key = (presentation, presentation.truncation if level is None else level)
    table = _TABLES.get(key)
    if table is None:
        table = AlgebraTable(presentation, level)
        _TABLES[key] = table
    return table


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    offending_path: Path | None
    stable: bool
    levels: tuple[int, int]
    dims: tuple[int, int]
    notes: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.admissible

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "offending_path": None if self.offending_path is None
            else list(self.offending_path.arrows),
            "stable": self.stable,
            "levels": list(self.levels),
            "dims": list(self.dims),
            "notes": list(self.notes),
        }


def verify_admissible(presentation: Presentation) -> AdmissibilityResult:
    """Check that every path of length N vanishes, at two consecutive truncation levels.

    The check at a finite level is a semi-decision: it shows J^N lies in
    I + J^L.  Agreement of the answer and of dim A at levels L and L+1 is
    reported as ``stable``.
    """
    N = presentation.nilpotency
    lo = max(presentation.truncation, N + 1)
    results = []
    for level in (lo, lo + 1):
        table = truncated_quotient(presentation, level)
        bad = next(table.nonzero_paths(N), None)
        results.append((bad, table.dim))
    (bad1, d1), (bad2, d2) = results
    ok = bad1 is None and bad2 is None
    stable = d1 == d2 and (bad1 is None) == (bad2 is None)
    notes = []
    if not stable:
        notes.append("dimension or verdict changed between truncation levels")
    return AdmissibilityResult(ok, bad1 if bad1 is not None else bad2, stable,
                               (lo, lo + 1), (d1, d2), tuple(notes))


def loop_power_bound(presentation: Presentation) -> int | None:
    """A level L with J^L inside I, when one follows from the shape of Q.

    Applies when the only cycles are powers of single loops and every loop
    has a monomial relation eps^c: a path avoiding all eps^c has at most
    c - 1 consecutive copies of each loop around a loop-free path.
    """
    q = presentation.quiver
    for v in q.vertices:
        if len(q.loops_at(v)) > 1:
            return None
    plain = [a for a in q.arrows if not a.is_loop]
    # longest path in the loop-free part; fails on oriented cycles
    order = {v: 0 for v in q.vertices}
    for _ in range(len(q.vertices)):
        changed = False
        for a in plain:
            if order[a.source] + 1 > order[a.target]:
                order[a.target] = order[a.source] + 1
                changed = True
        if not changed:
            break
    else:
        if plain:
            return None
    longest = max(order.values(), default=0)
    extra = 0
    for a in q.arrows:
        if not a.is_loop:
            continue
        powers = [r.paths[0].length for r in presentation.relations
                  if r.is_monomial and set(r.paths[0].arrows) == {a.name}]
        if not powers:
            return None
        extra += min(powers) - 1
    return longest + extra + 1


def fit_levels(presentation: Presentation) -> Presentation:
    """Replace truncation and nilpotency by values computed from the quiver."""
    bound = loop_power_bound(presentation)
    if bound is None:
        raise ValueError("cannot bound path lengths automatically; give truncate/nilpotent")
    level = max(bound, 2)
    table = truncated_quotient(presentation.with_truncation(level, 2), level)
    n = max(2, table.radical_length())
    return presentation.with_truncation(max(level, n), n)
