"""The line-oriented ``.quiv`` presentation format.

::

    # B(2,2)
    field Q
    vertex 0 1
    arrow e0 0 0
    arrow e1 1 1
    arrow a 1 0
    truncate 4 nilpotent 3
    relation e0*e0
    relation e1*e1
    relation e0*a + a*e1

A term is ``[<coef>*]<arrow>(*<arrow>)*`` read left to right as a product
a_1 ... a_m (so the rightmost arrow is traversed first).  Terms are joined by
``+`` or ``-``; coefficients are integers or fractions ``p/q``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .algebra.presentation import InvalidRelation, Presentation, Relation
from .algebra.table import fit_levels
from .linalg import parse_field
from .quiver import Arrow, EndpointMismatch, Quiver, QuiverError


class ParseError(ValueError):
    kind = "SyntaxError"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{self.kind} at line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class QuivSyntaxError(ParseError):
    kind = "SyntaxError"


class UnknownSymbol(ParseError):
    kind = "UnknownSymbol"


class QuivInvalidRelation(ParseError, InvalidRelation):
    kind = "InvalidRelation"


_COEF = re.compile(r"^\d+(?:/\d+)?$")
_TERM = re.compile(r"([+-])?\s*([^+\-]+)")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def parse_relation(quiver: Quiver, text: str, line: int = 0, col0: int = 1) -> Relation:
    """Parse the right-hand side of a ``relation`` line."""
    terms: dict = {}
    order = []
    pos = 0
    stripped = text.rstrip()
    first = True
    for m in _TERM.finditer(stripped):
        gap = stripped[pos:m.start()]
        if gap.strip():
            raise QuivSyntaxError(f"unexpected {gap.strip()!r}", line, col0 + pos)
        sign, body = m.group(1), m.group(2).strip()
        col = col0 + m.start(2)
        if sign is None and not first:
            raise QuivSyntaxError("missing + or - between terms", line, col)
        first = False
        pos = m.end()
        factors = [f.strip() for f in body.split("*")]
        coef = Fraction(1)
        if factors and _COEF.match(factors[0]):
            coef = Fraction(factors.pop(0))
        if not factors or any(not f for f in factors):
            raise QuivSyntaxError(f"malformed term {body!r}", line, col)
        for f in factors:
            if not _IDENT.match(f):
                raise QuivSyntaxError(f"bad arrow name {f!r}", line, col)
            try:
                quiver.arrow(f)
            except QuiverError:
                raise UnknownSymbol(f"unknown arrow {f!r}", line, col) from None
        if sign == "-":
            coef = -coef
        try:
            path = quiver.path(*factors)
        except EndpointMismatch as exc:
            raise QuivInvalidRelation(str(exc), line, col) from None
        if path.length < 2:
            raise QuivInvalidRelation(f"path {path} has length {path.length} < 2", line, col)
        if path not in terms:
            order.append(path)
            terms[path] = Fraction(0)
        terms[path] += coef
    if pos < len(stripped) and stripped[pos:].strip():
        raise QuivSyntaxError(f"trailing {stripped[pos:].strip()!r}", line, col0 + pos)
    pairs = tuple((terms[p], p) for p in order if terms[p] != 0)
    if not pairs:
        raise QuivInvalidRelation("relation is empty or cancels to zero", line, col0)
    try:
        return Relation(pairs)
    except InvalidRelation as exc:
        raise QuivInvalidRelation(str(exc), line, col0) from None


def parse(text: str) -> Presentation:
    """Parse ``.quiv`` text into a validated presentation."""
    vertices: list[str] = []
    arrows: list[Arrow] = []
    field = None
    levels = None
    name = ""
    rel_lines: list[tuple[int, int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        kw = words[0]
        if kw == "vertex":
            if len(words) < 2:
                raise QuivSyntaxError("vertex needs at least one id", lineno, indent + 1)
            for v in words[1:]:
                if v in vertices:
                    raise QuivSyntaxError(f"duplicate vertex {v}", lineno, line.index(v) + 1)
                vertices.append(v)
        elif kw == "arrow":
            if len(words) != 4:
                raise QuivSyntaxError("expected: arrow <id> <source> <target>", lineno, indent + 1)
            _, a, s, t = words
            if not _IDENT.match(a):
                raise QuivSyntaxError(f"bad arrow name {a!r}", lineno, line.index(a) + 1)
            for v in (s, t):
                if v not in vertices:
                    raise UnknownSymbol(f"unknown vertex {v!r}", lineno, line.rindex(v) + 1)
            if any(b.name == a for b in arrows):
                raise QuivSyntaxError(f"duplicate arrow {a}", lineno, line.index(a) + 1)
            arrows.append(Arrow(a, s, t))
        elif kw == "field":
            if len(words) != 2:
                raise QuivSyntaxError("expected: field Q | F<p>", lineno, indent + 1)
            try:
                field = parse_field(words[1])
            except ValueError as exc:
                raise QuivSyntaxError(str(exc), lineno, line.index(words[1]) + 1) from None
        elif kw == "truncate":
            if len(words) != 4 or words[2] != "nilpotent" or not (
                    words[1].isdigit() and words[3].isdigit()):
                raise QuivSyntaxError("expected: truncate <L> nilpotent <N>", lineno, indent + 1)
            levels = (int(words[1]), int(words[3]))
        elif kw == "relation":
            start = line.index("relation") + len("relation")
            rel_lines.append((lineno, start + 1, line[start:]))
        elif kw == "name":
            name = line.split(None, 1)[1].strip()
        else:
            raise QuivSyntaxError(f"unknown keyword {kw!r}", lineno, indent + 1)
    if not vertices:
        raise QuivSyntaxError("no vertices declared", 1, 1)
    quiver = Quiver(tuple(vertices), tuple(arrows))
    relations = []
    for lineno, col, body in rel_lines:
        relations.append(parse_relation(quiver, body, lineno, col))
    kwargs = {} if field is None else {"field": field}
    if levels is None:
        p = Presentation(quiver, tuple(relations), 2, 2, name=name, **kwargs)
        try:
            return fit_levels(p)
        except ValueError as exc:
            raise QuivSyntaxError(str(exc), len(text.splitlines()), 1) from None
    L, N = levels
    try:
        return Presentation(quiver, tuple(relations), L, N, name=name, **kwargs)
    except ValueError as exc:
        raise QuivSyntaxError(str(exc), 0, 0) from None


def _coef_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_relation(rel: Relation) -> str:
    parts = []
    for k, (c, p) in enumerate(rel.terms):
        mag = abs(c)
        body = "*".join(p.arrows)
        if mag != 1:
            body = f"{_coef_text(mag)}*{body}"
        if k == 0:
            parts.append(("- " if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def format(presentation: Presentation) -> str:
    """Normalised ``.quiv`` text; ``parse(format(p)) == p``."""
    q = presentation.quiver
    lines = []
    if presentation.name:
        lines.append(f"name {presentation.name}")
    lines.append(f"field {presentation.field.name}")
    lines.append("vertex " + " ".join(q.vertices))
    for a in q.arrows:
        lines.append(f"arrow {a.name} {a.source} {a.target}")
    lines.append(f"truncate {presentation.truncation} nilpotent {presentation.nilpotency}")
    for r in presentation.relations:
        lines.append("relation " + format_relation(r))
    return "\n".join(lines) + "\n"
