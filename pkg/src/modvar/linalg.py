"""Exact fields and linear algebra.

Elements of the rationals are :class:`fractions.Fraction`; elements of a prime
field are plain ints in ``range(p)``.  Every routine takes the field as an
explicit argument and normalises intermediate results with ``field.norm``.
"""
from __future__ import annotations

from random import Random
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class FieldMismatch(ValueError):
    """A scalar cannot be interpreted in the working field."""


class Rationals:
    name = "Q"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def norm(self, x):
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def random(self, rng: Random, bound: int = 97):
        return Fraction(rng.randint(-bound, bound))

    def to_json(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def from_json(self, s) -> Fraction:
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldMismatch(f"{x} has no image in F{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng: Random, bound: int = 0):
        return rng.randrange(self.p)

    def elements(self) -> range:
        return range(self.p)

    def to_json(self, x) -> int:
        return int(x) % self.p

    def from_json(self, s) -> int:
        return self(s)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F{self.p}"


QQ = Rationals()
Field = Rationals | PrimeField


def parse_field(text: str) -> Field:
    """``"Q"`` or ``"F<p>"``."""
    text = text.strip()
    if text in ("Q", "QQ"):
        return QQ
    if text[:1] == "F" and text[1:].isdigit():
        return PrimeField(int(text[1:]))
    raise ValueError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# Sparse row echelon form.  A row is a dict {column: nonzero value}.

def _axpy(field, y: dict, c, x: dict) -> None:
    """y += c * x, in place, dropping zeros."""
    norm = field.norm
    for k, v in x.items():
        w = norm(y.get(k, 0) + c * v)
        if w:
            y[k] = w
        else:
            y.pop(k, None)


def sparse_rref(rows: Iterable[dict], field) -> dict[int, dict]:
    """Fully reduced echelon form keyed by pivot column (pivot = smallest column).

    Each returned row has value 1 at its pivot and 0 at every other pivot.
    """
    piv: dict[int, dict] = {}
    for row in rows:
        v = {k: field.norm(x) for k, x in row.items() if field.norm(x)}
        for k in sorted(set(v) & set(piv)):
            c = v.get(k)
            if c:
                _axpy(field, v, field.norm(-c), piv[k])
        if not v:
            continue
        p = min(v)
        inv = field.inv(v[p])
        v = {k: field.norm(x * inv) for k, x in v.items()}
        for q, r in piv.items():
            c = r.get(p)
            if c:
                _axpy(field, r, field.norm(-c), v)
        piv[p] = v
    return piv


def _reduce_by(piv: dict[int, dict], v: dict, field) -> dict:
    v = dict(v)
    for k in sorted(set(v) & set(piv)):
        c = v.get(k)
        if c:
            _axpy(field, v, field.norm(-c), piv[k])
    return v


def sparse_nullspace(rows: Iterable[dict], ncols: int, field) -> list[list]:
    """Basis of {x : row . x = 0 for every row}, as dense lists."""
    piv = sparse_rref(rows, field)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for p, r in piv.items():
            c = r.get(f)
            if c:
                x[p] = field.norm(-c)
        basis.append(x)
    return basis


def _to_sparse(row: Sequence, field) -> dict:
    return {j: x for j, x in enumerate(row) if field.norm(x)}


def rank(matrix: Sequence[Sequence], field) -> int:
    return len(sparse_rref((_to_sparse(r, field) for r in matrix), field))


def nullspace(matrix: Sequence[Sequence], ncols: int, field) -> list[list]:
    return sparse_nullspace((_to_sparse(r, field) for r in matrix), ncols, field)


def matrix(rows, field, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Object-dtype matrix with entries coerced into the field."""
    a = np.array(rows, dtype=object)
    if shape is not None:
        a = a.reshape(shape)
    elif a.ndim != 2:
        raise ValueError("expected a two-dimensional array")
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = field(x)
    return out


def norm_array(a: np.ndarray, field) -> np.ndarray:
    if isinstance(field, PrimeField):
        return a % field.p
    return a


def matmul(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} times {b.shape}")
    return norm_array(a.dot(b), field)


def zeros(m: int, n: int, field) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(field.zero)
    return out


def identity(n: int, field) -> np.ndarray:
    out = zeros(n, n, field)
    for i in range(n):
        out[i, i] = field.one
    return out


def inverse(a: np.ndarray, field) -> np.ndarray | None:
    """Inverse of a square matrix, or None when singular."""
    n = a.shape[0]
    rows = []
    for i in range(n):
        r = _to_sparse(a[i], field)
        r[n + i] = field.one
        rows.append(r)
    piv = sparse_rref(rows, field)
    if any(p not in piv for p in range(n)):
        return None
    out = zeros(n, n, field)
    for i in range(n):
        for j in range(n):
            out[i, j] = piv[i].get(n + j, field.zero)
    return out


def is_zero(a: np.ndarray, field) -> bool:
    return all(not field.norm(x) for x in a.flat)


class Subspace:
    """A subspace of K^n with a fully reduced echelon basis.

    Besides membership this gives coordinates in two useful bases: for a
    vector inside the subspace, its coefficients on the echelon basis (the
    values at the pivot columns); for an arbitrary vector, its class in the
    quotient K^n / U written on the complementary unit vectors.
    """

    def __init__(self, vectors: Iterable[Sequence], n: int, field):
        self.n = n
        self.field = field
        self._piv = sparse_rref((_to_sparse(v, field) for v in vectors), field)
        self.pivots = sorted(self._piv)
        self.free = [c for c in range(n) if c not in self._piv]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[list]:
        f = self.field
        return [[self._piv[p].get(c, f.zero) for c in range(self.n)] for p in self.pivots]

    def reduce(self, v: Sequence) -> dict:
        return _reduce_by(self._piv, _to_sparse(v, self.field), self.field)

    def __contains__(self, v: Sequence) -> bool:
        return not self.reduce(v)

    def coords(self, v: Sequence) -> list:
        """Coefficients of v (assumed inside U) on the echelon basis."""
        f = self.field
        if self.reduce(v):
            raise ValueError("vector is not in the subspace")
        return [f.norm(v[p]) for p in self.pivots]

    def quotient_coords(self, v: Sequence) -> list:
        """Class of v in K^n / U, in the basis given by the free columns."""
        r = self.reduce(v)
        return [r.get(c, self.field.zero) for c in self.free]


class OrderedEchelon:
    """Incremental echelon form over arbitrary hashable column labels.

    Columns are ordered by ``key``; the pivot of a row is its largest column.
    Used for quotients of spaces whose basis is a set of paths or tensors,
    where the non-pivot columns ("standard" labels) give a basis of the
    quotient.
    """

    def __init__(self, field, key):
        self.field = field
        self.key = key
        self.rows: dict = {}
        self._final = False

    def _lead(self, v: dict):
        return max(v, key=self.key)

    def add(self, v: dict) -> dict | None:
        """Insert v; returns the new row when it enlarged the span, else None."""
        f = self.field
        v = {k: f.norm(x) for k, x in v.items() if f.norm(x)}
        while v:
            lead = self._lead(v)
            row = self.rows.get(lead)
            if row is None:
                inv = f.inv(v[lead])
                row = {k: f.norm(x * inv) for k, x in v.items()}
                self.rows[lead] = row
                self._final = False
                return dict(row)
            _axpy(f, v, f.norm(-v[lead]), row)
        return None

    def finalize(self) -> None:
        """Interreduce so that no row mentions another row's pivot."""
        if self._final:
            return
        f = self.field
        for p in sorted(self.rows, key=self.key):
            r = self.rows[p]
            for k in [k for k in r if k != p and k in self.rows]:
                c = r.get(k)
                if c:
                    _axpy(f, r, f.norm(-c), self.rows[k])
        self._final = True

    def normal_form(self, v: dict) -> dict:
        """Reduce v to a combination of non-pivot labels."""
        self.finalize()
        f = self.field
        out = {}
        for k, x in v.items():
            x = f.norm(x)
            if not x:
                continue
            row = self.rows.get(k)
            if row is None:
                w = f.norm(out.get(k, 0) + x)
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
            else:
                for j, y in row.items():
                    if j == k:
                        continue
                    w = f.norm(out.get(j, 0) - x * y)
                    if w:
                        out[j] = w
                    else:
                        out.pop(j, None)
        return out

    def __contains__(self, label) -> bool:
        return label in self.rows
