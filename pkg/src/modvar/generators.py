"""Built-in presentations shared by the CLI, tests and documentation."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra.presentation import Presentation, Relation
from .algebra.table import fit_levels
from .linalg import QQ
from .quiver import Path, Quiver


def _power(q: Quiver, name: str, m: int) -> Path:
    return q.path(*([name] * m))


def rho(q: Quiver, n: int, lam=1) -> Relation:
    """sum_p lam^p e0^(n-1-p) a e1^p on the B-quiver."""
    lam = Fraction(lam)
    terms = []
    for p in range(n):
        names = ["e0"] * (n - 1 - p) + ["a"] + ["e1"] * p
        terms.append((lam ** p, q.path(*names)))
    return Relation(tuple(terms))


def b_quiver() -> Quiver:
    return Quiver(("0", "1"), (("e0", "0", "0"), ("e1", "1", "1"), ("a", "1", "0")))


def build_B(m: int, n: int, lam=1, field=QQ) -> Presentation:
    """B(m, n): relations e0^m, e1^m and rho_n.  Requires 2 <= n <= m."""
    if m < 2 or not 2 <= n <= m:
        raise ValueError("B(m, n) needs 2 <= n <= m")
    q = b_quiver()
    rels = (Relation.of(_power(q, "e0", m)), Relation.of(_power(q, "e1", m)), rho(q, n, lam))
    return fit_levels(Presentation(q, rels, field=field, name=f"B({m},{n})"))


def truncpoly(m: int, field=QQ) -> Presentation:
    if m < 2:
        raise ValueError("m must be at least 2")
    q = Quiver(("0",), (("e", "0", "0"),))
    return fit_levels(Presentation(q, (Relation.of(_power(q, "e", m)),), field=field,
                                   name=f"K[e]/(e^{m})"))


def linear_arrow(i: int, j: int, t: int) -> str:
    """Name of the j-th (1-based) arrow i -> i-1 when there are t of them."""
    return f"a{i}" if t == 1 else f"a{i}_{j}"


def linear_quiver(n: int, t: Sequence[int] | None = None) -> Quiver:
    """Q(n, t_1..t_n): loop e<i> at each vertex i = 0..n, t_i arrows i -> i-1."""
    t = [1] * n if t is None else list(t)
    if n < 1 or len(t) != n or min(t) < 1:
        raise ValueError("need n >= 1 and n positive multiplicities")
    vs = tuple(str(i) for i in range(n + 1))
    arrows = [(f"e{i}", str(i), str(i)) for i in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, t[i - 1] + 1):
            arrows.append((linear_arrow(i, j, t[i - 1]), str(i), str(i - 1)))
    return Quiver(vs, tuple(arrows))


def linear(n: int, c: Sequence[int], t: Sequence[int] | None = None,
           relations: Sequence = (), field=QQ) -> Presentation:
    """Linear presentation with loop powers e_i^{c_i} plus extra relations.

    Extra relations are Relation objects or ``.quiv`` relation strings.
    """
    from .quivfile import parse_relation

    if len(c) != n + 1 or min(c) < 2:
        raise ValueError("need n + 1 loop degrees, each at least 2")
    q = linear_quiver(n, t)
    rels = [Relation.of(_power(q, f"e{i}", ci)) for i, ci in enumerate(c)]
    for r in relations:
        rels.append(parse_relation(q, r) if isinstance(r, str) else r)
    label = "Q(%d;%s)" % (n, ",".join(map(str, c)))
    return fit_levels(Presentation(q, tuple(rels), field=field, name=label))


def two_loops_square_zero(field=QQ) -> Presentation:
    """K<x,y>/(x,y)^2."""
    q = Quiver(("0",), (("x", "0", "0"), ("y", "0", "0")))
    rels = tuple(Relation.of(q.path(a, b)) for a in "xy" for b in "xy")
    return Presentation(q, rels, 3, 2, field, "K<x,y>/(x,y)^2")


def two_loops_commutative(field=QQ) -> Presentation:
    """K<x,y>/(x^2, y^2, xy - yx), selfinjective of dimension 4."""
    q = Quiver(("0",), (("x", "0", "0"), ("y", "0", "0")))
    rels = (Relation.of(q.path("x", "x")), Relation.of(q.path("y", "y")),
            Relation.of((1, q.path("x", "y")), (-1, q.path("y", "x"))))
    return Presentation(q, rels, 4, 3, field, "K<x,y>/(x^2,y^2,xy-yx)")


def two_cycle(field=QQ) -> Presentation:
    """u: 0 -> 1, v: 1 -> 0 with uv = vu = 0."""
    q = Quiver(("0", "1"), (("u", "0", "1"), ("v", "1", "0")))
    rels = (Relation.of(q.path("u", "v")), Relation.of(q.path("v", "u")))
    return Presentation(q, rels, 3, 2, field, "2-cycle")


def triangle(field=QQ) -> Presentation:
    """Oriented 3-cycle with every length-2 path zero."""
    q = Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")))
    rels = tuple(Relation.of(q.path(x, y)) for x, y in (("b", "a"), ("c", "b"), ("a", "c")))
    return Presentation(q, rels, 3, 2, field, "triangle")


def a3(field=QQ) -> Presentation:
    q = Quiver(("1", "2", "3"), (("a", "2", "1"), ("b", "3", "2")))
    return Presentation(q, (), 3, 3, field, "A3")


def kronecker(field=QQ) -> Presentation:
    q = Quiver(("0", "1"), (("a", "1", "0"), ("b", "1", "0")))
    return Presentation(q, (), 2, 2, field, "Kronecker")


def path_algebra(quiver: Quiver, field=QQ, name: str = "") -> Presentation:
    """KQ for an acyclic quiver."""
    lvl = 1
    while any(True for p in quiver.paths(lvl) if p.length == lvl):
        lvl += 1
        if lvl > len(quiver.vertices) + 1:
            raise ValueError("quiver has an oriented cycle")
    n = max(lvl, 2)
    return Presentation(quiver, (), n, n, field, name)
