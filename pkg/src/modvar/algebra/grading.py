"""Linear quivers: the arrow-degree grading and the tensor algebra over the loops.

The linear shape is a chain of vertices v_0, ..., v_n with exactly one loop at
every vertex and t_i >= 1 arrows v_i -> v_{i-1}.  Loops have degree 0, the
other arrows degree 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from ..linalg import OrderedEchelon, rank
from ..quiver import Path, Quiver
from .presentation import Presentation, Relation
from .table import AlgebraTable, truncated_quotient


class NotLinearShape(ValueError):
    pass


class InhomogeneousRelation(ValueError):
    def __init__(self, relation: Relation):
        super().__init__(f"relation {relation} mixes arrow degrees")
        self.relation = relation


class DegreeTooHigh(ValueError):
    """Relations of arrow degree >= 2 present where only degree <= 1 is allowed."""


class NotFree(ValueError):
    def __init__(self, side: str, index: int, detail: str = ""):
        super().__init__(f"B_{index} is not free as a {side} module{detail}")
        self.side = side
        self.index = index


@dataclass(frozen=True)
class LinearShape:
    order: tuple[str, ...]             # v_0 (the sink) ... v_n
    loops: tuple[str, ...]             # loop name at v_i
    arrows: tuple[tuple[str, ...], ...]  # arrows[i-1]: names of arrows v_i -> v_{i-1}

    @property
    def n(self) -> int:
        return len(self.order) - 1

    def degree(self, p: Path) -> int:
        loops = set(self.loops)
        return sum(1 for a in p.arrows if a not in loops)


def linear_shape(q: Quiver) -> LinearShape:
    loops = []
    for v in q.vertices:
        ls = q.loops_at(v)
        if len(ls) != 1:
            raise NotLinearShape(f"vertex {v} has {len(ls)} loops, expected 1")
        loops.append(ls[0].name)
    plain = [a for a in q.arrows if not a.is_loop]
    out_of = {v: {a.target for a in plain if a.source == v} for v in q.vertices}
    if any(len(t) > 1 for t in out_of.values()):
        raise NotLinearShape("a vertex has arrows to two different vertices")
    sinks = [v for v in q.vertices if not out_of[v]]
    if len(sinks) != 1:
        raise NotLinearShape("expected exactly one sink")
    order = [sinks[0]]
    while len(order) < len(q.vertices):
        prev = [v for v in q.vertices if out_of[v] == {order[-1]}]
        if len(prev) != 1 or prev[0] in order:
            raise NotLinearShape("non-loop arrows do not form a chain")
        order.append(prev[0])
    loop_of = dict(zip(q.vertices, loops))
    arrows = tuple(tuple(a.name for a in plain if a.source == order[i])
                   for i in range(1, len(order)))
    return LinearShape(tuple(order), tuple(loop_of[v] for v in order), arrows)


@dataclass(frozen=True)
class GradedSplit:
    shape: LinearShape
    by_degree: tuple[tuple[Relation, ...], ...]
    c: tuple[int, ...]

    @property
    def max_degree(self) -> int:
        return max((k for k, rs in enumerate(self.by_degree) if rs), default=0)

    def to_json(self) -> dict:
        return {
            "order": list(self.shape.order),
            "c": list(self.c),
            "relations_by_degree": [[str(r) for r in rs] for rs in self.by_degree],
        }


def degree_split(P: Presentation) -> GradedSplit:
    shape = linear_shape(P.quiver)
    groups: list[list[Relation]] = [[] for _ in range(shape.n + 1)]
    for r in P.relations:
        degs = {shape.degree(p) for p in r.paths}
        if len(degs) != 1:
            raise InhomogeneousRelation(r)
        groups[degs.pop()].append(r)
    c = []
    for v, eps in zip(shape.order, shape.loops):
        powers = [min(p.length for p in r.paths) for r in groups[0] if r.target == v]
        if not powers:
            raise NotLinearShape(f"no loop power relation at vertex {v}")
        c.append(min(powers))
    return GradedSplit(shape, tuple(tuple(g) for g in groups), tuple(c))


def degree_one_part(P: Presentation) -> Presentation:
    """A' = KQ/I' with I' generated by the relations of degree <= 1."""
    split = degree_split(P)
    keep = split.by_degree[0] + (split.by_degree[1] if split.shape.n >= 1 else ())
    return P.with_relations(keep)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorData:
    split: GradedSplit
    ranks: tuple[int, ...]          # r_i: left rank of B_i over A_{i-1}
    right_ranks: tuple[int, ...]
    block_dims: dict                # (j, i) -> dim e_j T e_i, j <= i
    dims_by_degree: tuple[int, ...]
    dim_tensor: int
    dim_algebra: int
    bijective: bool
    products_agree: bool

    def to_json(self) -> dict:
        return {
            "c": list(self.split.c),
            "ranks": list(self.ranks),
            "right_ranks": list(self.right_ranks),
            "dims_by_degree": list(self.dims_by_degree),
            "dim_tensor_algebra": self.dim_tensor,
            "dim_algebra": self.dim_algebra,
            "bijective": self.bijective,
            "products_agree": self.products_agree,
        }


def _action_matrix(table: AlgebraTable, eps: dict, block: list[int], left: bool):
    """Matrix (rows = output coords, cols = inputs) of eps acting on a block."""
    pos = {b: k for k, b in enumerate(block)}
    f = table.field
    m = [[f.zero] * len(block) for _ in block]
    for col, b in enumerate(block):
        v = table.mul_vec(eps, {b: f.one}) if left else table.mul_vec({b: f.one}, eps)
        for k, x in v.items():
            m[pos[k]][col] = x
    return m


class _Block:
    """e_j T e_i: a quotient with labelled basis, inclusion into A, and eps-actions."""

    def __init__(self, labels, phi, left, right, echelon=None):
        self.labels = labels          # basis labels
        self.phi = phi                # label -> coordinate dict in A
        self.left = left              # label -> dict(label -> coef): eps_j * label
        self.right = right            # label -> dict: label * eps_i
        self.echelon = echelon

    def normal(self, v: dict) -> dict:
        return v if self.echelon is None else self.echelon.normal_form(v)


def _tensor_blocks(table: AlgebraTable, split: GradedSplit):
    f = table.field
    shape = split.shape
    order = shape.order
    n = shape.n
    eps = [table.element([(1, Path(v, v, (e,)))]) for v, e in zip(order, shape.loops)]
    blocks: dict[tuple[int, int], _Block] = {}

    for i in range(n + 1):
        labels = list(table.block(order[i], order[i]))
        phi = {b: {b: f.one} for b in labels}
        lm = {b: table.mul_vec(eps[i], {b: f.one}) for b in labels}
        blocks[(i, i)] = _Block(labels, phi, lm, lm)
    bimods = {}
    for i in range(1, n + 1):
        bimods[i] = table.block(order[i - 1], order[i])
    for i in range(n + 1):
        for j in range(i - 1, -1, -1):
            inner = blocks[(j + 1, i)]
            B = bimods[j + 1]
            pairs = [(b, t) for b in B for t in inner.labels]
            rank_of = {p: k for k, p in enumerate(pairs)}
            ech = OrderedEchelon(f, rank_of.__getitem__)
            b_eps = {b: table.mul_vec({b: f.one}, eps[j + 1]) for b in B}
            for b in B:
                for t in inner.labels:
                    v: dict = {}
                    for b2, c in b_eps[b].items():
                        v[(b2, t)] = f.norm(v.get((b2, t), 0) + c)
                    for t2, c in inner.left[t].items():
                        v[(b, t2)] = f.norm(v.get((b, t2), 0) - c)
                    ech.add(v)
            ech.finalize()
            labels = [p for p in pairs if p not in ech]
            phi = {}
            for b, t in labels:
                phi[(b, t)] = table.mul_vec({b: f.one}, inner.phi[t])
            left, right = {}, {}
            for b, t in labels:
                lv = {}
                for b2, c in table.mul_vec(eps[j], {b: f.one}).items():
                    lv[(b2, t)] = c
                left[(b, t)] = ech.normal_form(lv)
                rv = {(b, t2): c for t2, c in inner.right[t].items()}
                right[(b, t)] = ech.normal_form(rv)
            blocks[(j, i)] = _Block(labels, phi, left, right, ech)
    return blocks


def bimodule_ranks(P: Presentation, check_products: bool = True) -> TensorData:
    split = degree_split(P)
    if split.max_degree >= 2:
        raise DegreeTooHigh("relations of arrow degree >= 2; use degree_one_part first")
    table = truncated_quotient(P)
    f = table.field
    shape = split.shape
    order = shape.order
    for v, c in zip(order, split.c):
        if table.loop_degree(v) != c:
            raise NotLinearShape(f"e_{v}Ae_{v} is not K[eps]/(eps^{c})")
    eps = [table.element([(1, Path(v, v, (e,)))]) for v, e in zip(order, shape.loops)]
    left_ranks, right_ranks = [], []
    for i in range(1, shape.n + 1):
        block = table.block(order[i - 1], order[i])
        d = len(block)
        for side, e, c, store in (("left", eps[i - 1], split.c[i - 1], left_ranks),
                                  ("right", eps[i], split.c[i], right_ranks)):
            m = _action_matrix(table, e, block, side == "left")
            nullity = d - rank(m, f)
            if nullity * c != d:
                raise NotFree(side, i, f" (dim {d}, {nullity} Jordan blocks, c = {c})")
            store.append(nullity)
    blocks = _tensor_blocks(table, split)
    dims = {key: len(b.labels) for key, b in blocks.items()}
    by_degree = [0] * (shape.n + 1)
    for (j, i), d in dims.items():
        by_degree[i - j] += d
    dim_t = sum(dims.values())
    bijective = dim_t == table.dim and all(
        _phi_rank(table, blocks[key]) == dims[key] == table.dim_block(order[key[0]], order[key[1]])
        for key in blocks)
    products = _check_products(table, split, blocks) if check_products else True
    return TensorData(split, tuple(left_ranks), tuple(right_ranks), dims, tuple(by_degree),
                      dim_t, table.dim, bijective, products)


def _phi_rank(table: AlgebraTable, block: _Block) -> int:
    rows = [[block.phi[lab].get(k, table.field.zero) for k in range(table.dim)]
            for lab in block.labels]
    return rank(rows, table.field)


def _apply_left_power(block: _Block, f, m: int, y: dict) -> dict:
    out = dict(y)
    for _ in range(m):
        nxt: dict = {}
        for lab, c in out.items():
            for k, x in block.left[lab].items():
                w = f.norm(nxt.get(k, 0) + c * x)
                if w:
                    nxt[k] = w
                else:
                    nxt.pop(k, None)
        out = nxt
    return out


def _tensor_mul(table, blocks, x, j: int, k: int, y: dict, i: int) -> dict:
    f = table.field
    if j == k:
        m = table.basis[x].length   # x is eps_k^m
        return _apply_left_power(blocks[(k, i)], f, m, y)
    b, t = x
    z = _tensor_mul(table, blocks, t, j + 1, k, y, i)
    raw: dict = {}
    for lab, c in z.items():
        raw[(b, lab)] = f.norm(raw.get((b, lab), 0) + c)
    return blocks[(j, i)].normal(raw)


def _check_products(table: AlgebraTable, split: GradedSplit, blocks) -> bool:
    """phi(x y) = phi(x) phi(y) for all composable pairs of basis tensors."""
    f = table.field
    n = split.shape.n
    for j in range(n + 1):
        for k in range(j, n + 1):
            for i in range(k, n + 1):
                bx, by, bt = blocks[(j, k)], blocks[(k, i)], blocks[(j, i)]
                for x in bx.labels:
                    for y in by.labels:
                        z = _tensor_mul(table, blocks, x, j, k, {y: f.one}, i)
                        img: dict = {}
                        for lab, c in z.items():
                            for idx, v in bt.phi[lab].items():
                                w = f.norm(img.get(idx, 0) + c * v)
                                if w:
                                    img[idx] = w
                                else:
                                    img.pop(idx, None)
                        if img != table.mul_vec(bx.phi[x], by.phi[y]):
                            return False
    return True


def projective_rank_vector(T: TensorData, i: int) -> tuple[int, ...]:
    """(r_1...r_i, r_2...r_i, ..., r_i, 1, 0, ..., 0) for the vertex in position i."""
    n = len(T.ranks)
    if not 0 <= i <= n:
        raise IndexError(i)
    return tuple(prod(T.ranks[j:i]) if j <= i else 0 for j in range(n + 1))


def rank_vector_from_basis(table: AlgebraTable, split: GradedSplit, i: int) -> tuple[int, ...]:
    """dim e_jAe_i / c_j, counted directly on the path basis."""
    order = split.shape.order
    out = []
    for j, v in enumerate(order):
        d = table.dim_block(v, order[i])
        if d % split.c[j]:
            raise ValueError(f"e_{v}Ae_{order[i]} has dimension {d}, not a multiple of c")
        out.append(d // split.c[j])
    return tuple(out)
