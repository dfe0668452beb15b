"""Quivers, paths and cycles.

A path is written as in the usual left-to-right composition convention:
``(a_1, ..., a_m)`` with ``s(a_i) = t(a_{i+1})``, so ``a_m`` is traversed first.
Its source is ``s(a_m)`` and its target ``t(a_1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator


class QuiverError(ValueError):
    pass


class UnknownVertex(QuiverError):
    pass


class UnknownArrow(QuiverError):
    pass


class EndpointMismatch(QuiverError):
    pass


class NotACycle(QuiverError):
    pass


class AlreadyPrimitive(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True, slots=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def trivial(cls, vertex) -> "Path":
        v = str(vertex)
        return cls(v, v, ())

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def is_cycle(self) -> bool:
        return bool(self.arrows) and self.source == self.target

    def __mul__(self, other: "Path") -> "Path":
        return compose(self, other)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(self.arrows)


def compose(p: Path, q: Path) -> Path:
    """The product ``p q`` (q first, then p)."""
    if p.source != q.target:
        raise EndpointMismatch(
            f"cannot compose {p} (source {p.source}) after {q} (target {q.target})")
    return Path(q.source, p.target, p.arrows + q.arrows)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = field(default=())

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(set(vs)) != len(vs):
            raise QuiverError("vertex ids must be distinct")
        arrows = []
        for a in self.arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*(str(x) for x in a))
            arrows.append(a)
        object.__setattr__(self, "arrows", tuple(arrows))
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise QuiverError("arrow ids must be distinct")
        known = set(vs)
        for a in arrows:
            if a.source not in known:
                raise UnknownVertex(f"arrow {a.name}: unknown source {a.source}")
            if a.target not in known:
                raise UnknownVertex(f"arrow {a.name}: unknown target {a.target}")

    @cached_property
    def _arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_map[name]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {name}") from None

    def has_vertex(self, v) -> bool:
        return str(v) in self.vertex_index

    def loops_at(self, v) -> list[Arrow]:
        v = str(v)
        return [a for a in self.arrows if a.source == v and a.target == v]

    def path(self, *names: str) -> Path:
        """Path ``names[0] * names[1] * ...``; validates composability."""
        if not names:
            raise ValueError("use Path.trivial for length-zero paths")
        arrows = [self.arrow(n) for n in names]
        for a, b in zip(arrows, arrows[1:]):
            if a.source != b.target:
                raise EndpointMismatch(f"{a.name} cannot follow {b.name}")
        return Path(arrows[-1].source, arrows[0].target, tuple(names))

    def e(self, v) -> Path:
        v = str(v)
        if v not in self.vertex_index:
            raise UnknownVertex(v)
        return Path.trivial(v)

    def check_path(self, p: Path) -> None:
        if p.is_trivial:
            if p.source not in self.vertex_index or p.source != p.target:
                raise UnknownVertex(p.source)
            return
        q = self.path(*p.arrows)
        if (q.source, q.target) != (p.source, p.target):
            raise EndpointMismatch(f"path {p} has inconsistent endpoints")

    def support(self, p: Path) -> tuple[str, ...]:
        """supp(p): the sources of its arrows together with its target."""
        if p.is_trivial:
            return (p.source,)
        vs = {self.arrow(a).source for a in p.arrows} | {p.target}
        return tuple(v for v in self.vertices if v in vs)

    @cached_property
    def reachable(self) -> dict[str, set[str]]:
        """reachable[x] = vertices y with a path (possibly trivial) from x to y."""
        out_adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            out_adj[a.source].add(a.target)
        reach = {}
        for v in self.vertices:
            seen = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for y in out_adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            reach[v] = seen
        return reach

    def paths(self, max_length: int) -> Iterator[Path]:
        """All paths of length <= max_length, shortest first."""
        layer = [Path.trivial(v) for v in self.vertices]
        yield from layer
        for _ in range(max_length):
            nxt = []
            for p in layer:
                for a in self.arrows:
                    if a.target == p.source:
                        nxt.append(Path(a.source, p.target, p.arrows + (a.name,)))
            yield from nxt
            layer = nxt


def is_primitive(quiver: Quiver, c: Path) -> bool:
    """A cycle is primitive when the sources of its arrows are pairwise distinct."""
    srcs = [quiver.arrow(a).source for a in c.arrows]
    return len(set(srcs)) == len(srcs)


def is_loop_power(quiver: Quiver, c: Path) -> bool:
    return bool(c.arrows) and len(set(c.arrows)) == 1 and quiver.arrow(c.arrows[0]).is_loop


@dataclass(frozen=True)
class PrimitiveSplit:
    u: int
    v: int
    primitive: Path
    remainder: Path


def extract_primitive(quiver: Quiver, c: Path) -> PrimitiveSplit:
    """Split a non-primitive cycle into a primitive cycle and the remaining cycle.

    ``u`` and ``v`` are 1-based positions: ``(a_u, ..., a_v)`` is primitive and
    ``(a_1, ..., a_{u-1}, a_{v+1}, ..., a_m)`` is a cycle.  Among all pairs
    ``i <= j`` with ``s(a_j) = t(a_i)`` the pair minimising ``j - i`` is taken,
    smallest ``i`` first.
    """
    quiver.check_path(c)
    if not c.is_cycle:
        raise NotACycle(f"{c} is not a cycle")
    if is_primitive(quiver, c):
        raise AlreadyPrimitive(f"{c} is primitive")
    arrows = [quiver.arrow(a) for a in c.arrows]
    m = len(arrows)
    best = None
    for gap in range(m - 1):
        for i in range(m - gap):
            j = i + gap
            if arrows[j].source == arrows[i].target:
                best = (i, j)
                break
        if best:
            break
    assert best is not None, "non-primitive cycle without a shorter sub-cycle"
    i, j = best
    prim = quiver.path(*c.arrows[i:j + 1])
    rest_names = c.arrows[:i] + c.arrows[j + 1:]
    rest = quiver.path(*rest_names)
    return PrimitiveSplit(i + 1, j + 1, prim, rest)


def _canonical_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


def cycles(quiver: Quiver, max_length: int) -> list[Path]:
    """All cycles of length <= max_length, one representative per rotation class.

    The representative is the rotation whose arrow-index sequence is
    lexicographically smallest.
    """
    idx = quiver.arrow_index
    arrows = quiver.arrows
    into: dict[str, list[Arrow]] = {v: [] for v in quiver.vertices}
    for a in arrows:
        into[a.target].append(a)
    reach = quiver.reachable
    found = []

    def extend(seq: list[Arrow], start_target: str):
        cur = seq[-1].source
        if cur == start_target:
            key = tuple(idx[a.name] for a in seq)
            if _canonical_rotation(key) == key:
                found.append(quiver.path(*(a.name for a in seq)))
        if len(seq) == max_length:
            return
        first = idx[seq[0].name]
        for a in into[cur]:
            # the canonical rotation starts with its smallest arrow index
            if idx[a.name] < first:
                continue
            if cur not in reach[start_target] or a.source not in reach[start_target]:
                continue
            seq.append(a)
            extend(seq, start_target)
            seq.pop()

    for a in arrows:
        if a.source in reach[a.target]:
            extend([a], a.target)
    found.sort(key=lambda p: (p.length, tuple(idx[x] for x in p.arrows)))
    return found


@dataclass(frozen=True)
class CycleReport:
    max_length: int
    primitive_nonloop: tuple[Path, ...]
    multi_loop_vertices: tuple[str, ...]
    non_loop_powers: tuple[Path, ...]

    @property
    def passes(self) -> bool:
        return not (self.primitive_nonloop or self.multi_loop_vertices or self.non_loop_powers)

    def to_json(self) -> dict:
        return {
            "max_length": self.max_length,
            "primitive_nonloop": [list(p.arrows) for p in self.primitive_nonloop],
            "multi_loop_vertices": list(self.multi_loop_vertices),
            "non_loop_powers": [list(p.arrows) for p in self.non_loop_powers],
            "passes": self.passes,
        }


def cycle_report(quiver: Quiver, max_length: int | None = None) -> CycleReport:
    """Cycle obstructions: primitive cycles that are not loops, vertices with
    several loops, and cycles that are not powers of a single loop."""
    if max_length is None:
        max_length = max(1, 2 * len(quiver.arrows))
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    cs = cycles(quiver, max_length)
    prim = tuple(c for c in cs if c.length >= 2 and is_primitive(quiver, c))
    multi = tuple(v for v in quiver.vertices if len(quiver.loops_at(v)) >= 2)
    nonpow = tuple(c for c in cs if not is_loop_power(quiver, c))
    return CycleReport(max_length, prim, multi, nonpow)


def induced_subquiver(quiver: Quiver, what) -> Quiver:
    """Subquiver Q_p of a path, Q_rho of a relation, or the full subquiver on a
    vertex set.

    ``what`` may be a :class:`Path`, an object with a ``paths`` attribute
    (a relation), or an iterable of vertex ids.
    """
    if isinstance(what, Path):
        return _union_of_paths(quiver, [what])
    paths = getattr(what, "paths", None)
    if paths is not None:
        return _union_of_paths(quiver, list(paths))
    vs = {str(v) for v in what}
    for v in vs:
        if not quiver.has_vertex(v):
            raise UnknownVertex(v)
    return Quiver(
        tuple(v for v in quiver.vertices if v in vs),
        tuple(a for a in quiver.arrows if a.source in vs and a.target in vs),
    )


def _union_of_paths(quiver: Quiver, paths: Iterable[Path]) -> Quiver:
    vs: set[str] = set()
    names: set[str] = set()
    for p in paths:
        quiver.check_path(p)
        vs.update(quiver.support(p))
        names.update(p.arrows)
    return Quiver(
        tuple(v for v in quiver.vertices if v in vs),
        tuple(a for a in quiver.arrows if a.name in names),
    )
