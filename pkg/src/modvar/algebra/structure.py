"""Glueing decomposition, catalog recognition and subquiver projection."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..linalg import nullspace
from ..quiver import Path, Quiver, induced_subquiver
from .presentation import Presentation, Relation
from .table import AlgebraTable, truncated_quotient, verify_admissible


class NotAdmissible(ValueError):
    pass


# ---------------------------------------------------------------------------
# glueing

@dataclass(frozen=True)
class Split:
    first: Presentation
    second: Presentation
    first_vertices: tuple[str, ...]
    second_vertices: tuple[str, ...]
    reason: str

    def to_json(self) -> dict:
        return {
            "reason": self.reason,
            "first": {"vertices": list(self.first_vertices),
                      "arrows": [a.name for a in self.first.quiver.arrows],
                      "relations": [str(r) for r in self.first.relations]},
            "second": {"vertices": list(self.second_vertices),
                       "arrows": [a.name for a in self.second.quiver.arrows],
                       "relations": [str(r) for r in self.second.relations]},
        }


@dataclass(frozen=True)
class GlueingResult:
    """Minimality for the supplied generators, plus the same test on a reduced set."""

    minimal: bool
    split: Split | None
    reduced_relations: tuple[Relation, ...]
    reduced_minimal: bool

    def to_json(self) -> dict:
        return {
            "minimal_for_supplied_generators": self.minimal,
            "split": None if self.split is None else self.split.to_json(),
            "reduced_generators": [str(r) for r in self.reduced_relations],
            "minimal_for_reduced_generators": self.reduced_minimal,
        }


def _sub(P: Presentation, quiver: Quiver, relations) -> Presentation:
    return Presentation(quiver, tuple(relations), P.truncation, P.nilpotency, P.field)


def _components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _split(P: Presentation, relations: tuple[Relation, ...]) -> Split | None:
    q = P.quiver
    if not relations:
        return None
    covered = set().union(*(r.arrows() for r in relations))
    outside = [a for a in q.arrows if a.name not in covered]
    if outside:
        a = outside[0]
        rest = tuple(b for b in q.arrows if b.name != a.name)
        # drop vertices that only the removed arrow touched; they live in the second part
        touched = {v for b in rest for v in (b.source, b.target)}
        touched |= {v for r in relations for v in q.support(r.paths[0])}
        ends = {a.source, a.target}
        keep = tuple(v for v in q.vertices if v in touched or v not in ends)
        first = Quiver(keep, rest)
        second = Quiver(tuple(v for v in q.vertices if v in ends), (a,))
        return Split(_sub(P, first, relations), _sub(P, second, ()),
                     first.vertices, second.vertices, f"arrow {a.name} lies in no relation")
    subs = [induced_subquiver(q, r) for r in relations]
    arrow_sets = [{a.name for a in s.arrows} for s in subs]
    edges = [(i, j) for i in range(len(subs)) for j in range(i)
             if arrow_sets[i] & arrow_sets[j]]
    comps = _components(len(subs), edges)
    if len(comps) > 1:
        head = comps[0]
        tail = [i for c in comps[1:] for i in c]

        def union(ids):
            vs = set().union(*(set(subs[i].vertices) for i in ids))
            names = set().union(*(arrow_sets[i] for i in ids))
            return Quiver(tuple(v for v in q.vertices if v in vs),
                          tuple(a for a in q.arrows if a.name in names))

        q1, q2 = union(head), union(tail)
        return Split(_sub(P, q1, [relations[i] for i in head]),
                     _sub(P, q2, [relations[i] for i in tail]),
                     q1.vertices, q2.vertices, "relation overlap graph is disconnected")
    covered_vs = set().union(*(set(s.vertices) for s in subs))
    lonely = [v for v in q.vertices if v not in covered_vs]
    if lonely:
        v = lonely[0]
        first = Quiver(tuple(x for x in q.vertices if x != v), q.arrows)
        return Split(_sub(P, first, relations), _sub(P, Quiver((v,)), ()),
                     first.vertices, (v,), f"vertex {v} lies in no relation")
    return None


def reduced_generators(P: Presentation) -> tuple[Relation, ...]:
    """Drop, one at a time, generators lying in the ideal of the remaining ones."""
    rels = list(P.relations)
    # membership is tested modulo J^L; L must exceed every relation length
    level = max([P.truncation] + [p.length + 1 for r in rels for p in r.paths])
    i = 0
    while i < len(rels):
        others = rels[:i] + rels[i + 1:]
        if others:
            table = truncated_quotient(P.with_relations(others), level)
            zero = not table.element((c, p) for c, p in rels[i].terms)
        else:
            zero = False
        if zero:
            rels = others
        else:
            i += 1
    return tuple(rels)


def glueing_decompose(P: Presentation) -> GlueingResult:
    split = _split(P, P.relations)
    reduced = reduced_generators(P) if P.relations else ()
    reduced_split = _split(P, reduced) if reduced != P.relations else split
    return GlueingResult(split is None, split, reduced, reduced_split is None)


def decompose(P: Presentation) -> list[Presentation]:
    """Minimal pieces obtained by splitting repeatedly along the reduced generators."""
    reduced = reduced_generators(P) if P.relations else ()
    s = _split(P, reduced)
    if s is None:
        return [P.with_relations(reduced)]
    return decompose(s.first) + decompose(s.second)


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class CatalogVerdict:
    kind: str                       # Hereditary | TruncPoly | BClass | Glueing | Unknown
    params: tuple = ()
    relabel: dict = field(default_factory=dict)
    components: tuple["CatalogVerdict", ...] = ()
    reason: str = ""

    def __str__(self) -> str:
        if self.kind == "Glueing":
            return "Glueing(" + ", ".join(map(str, self.components)) + ")"
        if self.params:
            return f"{self.kind}({', '.join(map(str, self.params))})"
        return self.kind

    def to_json(self) -> dict:
        out = {"kind": self.kind, "params": list(self.params), "label": str(self)}
        if self.relabel:
            out["relabel"] = self.relabel
        if self.components:
            out["components"] = [c.to_json() for c in self.components]
        if self.reason:
            out["reason"] = self.reason
        return out


def _ideals_equal(P: Presentation, other: Presentation) -> bool:
    """Mutual membership of generators in KQ/(I + J^L) at a common level."""
    level = max([P.truncation, other.truncation]
                + [p.length + 1 for r in P.relations + other.relations for p in r.paths])
    a = truncated_quotient(P, level)
    b = truncated_quotient(other, level)
    return (all(not b.element(r.terms) for r in P.relations)
            and all(not a.element(r.terms) for r in other.relations))


def _recognize_b(P: Presentation) -> CatalogVerdict:
    q = P.quiver
    loops = [a for a in q.arrows if a.is_loop]
    plain = [a for a in q.arrows if not a.is_loop]
    if len(plain) != 1 or len(loops) != 2 or plain[0].source == plain[0].target:
        return CatalogVerdict("Unknown", reason="not the two-loop one-arrow shape")
    alpha = plain[0]
    v0, v1 = alpha.target, alpha.source
    l0, l1 = q.loops_at(v0), q.loops_at(v1)
    if len(l0) != 1 or len(l1) != 1:
        return CatalogVerdict("Unknown", reason="not the two-loop one-arrow shape")
    e0, e1 = l0[0].name, l1[0].name
    table = truncated_quotient(P)
    c0, c1 = table.loop_degree(v0), table.loop_degree(v1)
    if c0 is None or c1 is None or c0 != c1:
        return CatalogVerdict("Unknown", reason=f"loop degrees {c0}, {c1}")
    m = c0
    f = P.field
    relabel = {"vertices": {v0: "0", v1: "1"},
               "arrows": {e0: "e0", e1: "e1", alpha.name: "a"}}
    for n in range(2, m + 1):
        qs = [Path(v1, v0, (e0,) * (n - 1 - p) + (alpha.name,) + (e1,) * p) for p in range(n)]
        vecs = [table.reduce(p) for p in qs]
        cols = sorted(set().union(*vecs))
        rows = [[vecs[p].get(k, f.zero) for p in range(n)] for k in cols]
        ker = nullspace(rows, n, f) if rows else [[f.one if j == i else f.zero for j in range(n)]
                                                   for i in range(n)]
        if not ker:
            continue
        if len(ker) > 1 or not ker[0][0]:
            return CatalogVerdict("Unknown", reason=f"degree {n - 1} relation is not of rho type")
        mu = ker[0]
        lam = f.norm(mu[1] * f.inv(mu[0]))
        if not lam or any(f.norm(mu[p] * f.inv(mu[0]) - lam ** p) for p in range(n)):
            return CatalogVerdict("Unknown", reason="coefficients cannot be rescaled to rho_n")
        if n not in (2, m):
            return CatalogVerdict("Unknown", reason=f"rho_{n} with 2 < {n} < {m}")
        cand = (Relation.of(Path(v0, v0, (e0,) * m)),
                Relation.of(Path(v1, v1, (e1,) * m)),
                Relation(tuple((Fraction(lam ** p), qs[p]) for p in range(n))))
        if not _ideals_equal(P, P.with_relations(cand)):
            return CatalogVerdict("Unknown", reason="ideal differs from the catalog ideal")
        relabel["scale"] = {e1: f.to_json(lam)}
        return CatalogVerdict("BClass", (m, n), relabel)
    return CatalogVerdict("Unknown", reason="no connecting relation found")


def _recognize_component(P: Presentation) -> CatalogVerdict:
    q = P.quiver
    if not P.relations:
        return CatalogVerdict("Hereditary")
    if len(q.vertices) == 1 and len(q.arrows) == 1:
        table = truncated_quotient(P)
        m = table.loop_degree(q.vertices[0])
        return CatalogVerdict("TruncPoly", (m,), {"vertices": {q.vertices[0]: "0"},
                                                  "arrows": {q.arrows[0].name: "e"}})
    if len(q.vertices) == 2:
        return _recognize_b(P)
    return CatalogVerdict("Unknown", reason="no catalog shape with this quiver")


def recognize_catalog(P: Presentation) -> CatalogVerdict:
    if P.relations and not verify_admissible(P):
        raise NotAdmissible("presentation is not admissible at the given levels")
    parts = decompose(P)
    if len(parts) == 1:
        return _recognize_component(parts[0])
    comps = tuple(_recognize_component(p) for p in parts)
    return CatalogVerdict("Glueing", components=comps)


# ---------------------------------------------------------------------------

def project_to_subquiver(P: Presentation, vertices: Iterable) -> Presentation:
    """Restrict to the full subquiver: keep the terms of each relation inside it."""
    sub = induced_subquiver(P.quiver, vertices)
    names = {a.name for a in sub.arrows}
    keep = set(sub.vertices)
    rels = []
    for r in P.relations:
        terms = tuple((c, p) for c, p in r.terms
                      if set(p.arrows) <= names and p.source in keep)
        if terms:
            rels.append(Relation(terms))
    return Presentation(sub, tuple(rels), P.truncation, P.nilpotency, P.field,
                        P.name + "|" + ",".join(sub.vertices) if P.name else "")


def is_local_truncated(table: AlgebraTable) -> bool:
    """Every e_iAe_i is a truncated polynomial ring in the loop at i."""
    return all(c is not None for c in table.loop_degrees().values())
