from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable

from ..linalg import QQ, Field, FieldMismatch
from ..quiver import Path, Quiver, QuiverError


class InvalidRelation(ValueError):
    pass


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """A linear combination of pairwise distinct parallel paths of length >= 2."""

    terms: tuple[tuple[Fraction, Path], ...]

    def __post_init__(self):
        terms = tuple((Fraction(c), p) for c, p in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InvalidRelation("a relation needs at least one term")
        paths = [p for _, p in terms]
        if len(set(paths)) != len(paths):
            raise InvalidRelation("paths in a relation must be pairwise distinct")
        for c, p in terms:
            if c == 0:
                raise InvalidRelation(f"zero coefficient on {p}")
            if p.length < 2:
                raise InvalidRelation(f"path {p} has length {p.length} < 2")
        ends = {(p.source, p.target) for p in paths}
        if len(ends) != 1:
            raise InvalidRelation("paths in a relation must share source and target")

    @classmethod
    def of(cls, *terms) -> "Relation":
        """``Relation.of(path)`` or ``Relation.of((c1, p1), (c2, p2), ...)``."""
        out = []
        for t in terms:
            if isinstance(t, Path):
                out.append((Fraction(1), t))
            else:
                out.append(t)
        return cls(tuple(out))

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(p for _, p in self.terms)

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def arrows(self) -> set[str]:
        return {a for p in self.paths for a in p.arrows}

    def __str__(self) -> str:
        out = []
        for k, (c, p) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(p) if mag == 1 else f"{mag}*{p}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)


@dataclass(frozen=True)
class Presentation:
    """KQ/I with I generated by ``relations``.

    ``truncation`` is the level L at which path computations are cut off
    (KQ/(I + J^L) is computed); ``nilpotency`` is the claimed N with J^N in I.
    """

    quiver: Quiver
    relations: tuple[Relation, ...] = ()
    truncation: int = 2
    nilpotency: int = 2
    field: Field = QQ
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        for rel in self.relations:
            for p in rel.paths:
                try:
                    self.quiver.check_path(p)
                except QuiverError as exc:
                    raise InvalidRelation(str(exc)) from None
        if not self.truncation >= self.nilpotency >= 2:
            raise PresentationError(
                f"need truncation >= nilpotency >= 2, got L={self.truncation}, N={self.nilpotency}")

    def coefficient(self, c: Fraction):
        """The coefficient as an element of the working field."""
        x = self.field(c)
        if not self.field.norm(x):
            raise FieldMismatch(f"coefficient {c} vanishes in {self.field!r}")
        return x

    def with_field(self, field: Field) -> "Presentation":
        return replace(self, field=field)

    def with_relations(self, relations: Iterable[Relation]) -> "Presentation":
        return replace(self, relations=tuple(relations))

    def with_truncation(self, truncation: int, nilpotency: int | None = None) -> "Presentation":
        n = self.nilpotency if nilpotency is None else nilpotency
        return replace(self, truncation=truncation, nilpotency=n)

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    def opposite(self) -> "Presentation":
        """The presentation of A^op: arrows reversed, every path read backwards."""
        q = self.quiver
        qop = Quiver(q.vertices, tuple((a.name, a.target, a.source) for a in q.arrows))
        rels = tuple(
            Relation(tuple((c, Path(p.target, p.source, p.arrows[::-1])) for c, p in r.terms))
            for r in self.relations
        )
        if not self.name:
            name = ""
        elif self.name.endswith("^op"):
            name = self.name[:-3]
        else:
            name = self.name + "^op"
        return Presentation(qop, rels, self.truncation, self.nilpotency, self.field, name)
