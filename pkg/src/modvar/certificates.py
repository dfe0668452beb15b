"""Reducibility witnesses for rep(A, d) and their independent re-verification.

Three kinds:

* ``OpenCover``: a primitive non-loop cycle gives nonempty opens
  {rank M(a_i) >= 1} at the indicator dimension vector whose intersection is
  empty, because a point in all of them would make the cycle act by a
  nonzero scalar on a one-dimensional space while a power of it vanishes in A.
* ``RigidPair`` (local algebras with two or more loops): A and D(A) are
  rigid of the same dimension but not isomorphic.  When they are isomorphic
  the socle/top variant records rad(A) and A/soc(A) instead.
* ``DimensionGap`` (linear quivers with a relation of top arrow degree): a
  projective P whose orbit closure is a component, and a module Q of the same
  dimension vector with a larger orbit.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import prod

from .algebra.grading import bimodule_ranks, degree_one_part, degree_split
from .algebra.presentation import Presentation
from .algebra.table import truncated_quotient, verify_admissible
from .modules import (Representation, direct_sum, end_dim, ext1_dim, hom_dim, injective,
                      injective_cogenerator, is_isomorphic, locally_free_rank, power,
                      projective, quotient, radical, regular, socle, socle_spaces, top)
from .quiver import Path, is_primitive
from .varieties import group_dim


class CertificateError(ValueError):
    pass


class IsLoop(CertificateError):
    pass


class NotPrimitive(CertificateError):
    pass


class NotLocal(CertificateError):
    pass


class FewerThanTwoLoops(CertificateError):
    pass


class NoDefect(CertificateError):
    pass


class NoWitnessInRange(CertificateError):
    pass


class PreconditionViolation(CertificateError):
    pass


K_CAP = 1000


@dataclass(frozen=True)
class Certificate:
    kind: str                   # OpenCover | RigidPair | SocleTop | DimensionGap
    argument: str
    presentation: Presentation
    dims: tuple[int, ...]
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "argument": self.argument, "dims": list(self.dims)}
        for key, val in self.data.items():
            if isinstance(val, Representation):
                out[key] = val.to_json()
            elif isinstance(val, Path):
                out[key] = list(val.arrows)
            elif isinstance(val, (list, tuple)) and val and isinstance(val[0], Representation):
                out[key] = [m.to_json() for m in val]
            else:
                out[key] = val
        return out


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    certificate: Certificate
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "argument": self.certificate.argument,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                           for c in self.checks]}


# ---------------------------------------------------------------------------
# open cover

def _indicator(P: Presentation, vertices) -> tuple[int, ...]:
    vs = set(vertices)
    return tuple(1 if v in vs else 0 for v in P.quiver.vertices)


def _cycle_power(c: Path, t: int) -> Path:
    return Path(c.source, c.target, c.arrows * t)


def cert_primitive_cycle(P: Presentation, cycle: Path) -> Certificate:
    q = P.quiver
    q.check_path(cycle)
    if not cycle.is_cycle:
        raise NotPrimitive(f"{cycle} is not a cycle")
    if cycle.length == 1:
        raise IsLoop(f"{cycle} is a loop")
    if not is_primitive(q, cycle):
        raise NotPrimitive(f"{cycle} repeats a vertex")
    d = _indicator(P, q.support(cycle))
    points = []
    for a in cycle.arrows:
        mats = {b.name: [[1 if b.name == a else 0]] if d[q.vertex_index[b.source]]
                and d[q.vertex_index[b.target]] else None for b in q.arrows}
        mats = {k: v for k, v in mats.items() if v is not None}
        points.append(Representation(P, d, mats))
    table = truncated_quotient(P)
    t = 1
    while table.reduce(_cycle_power(cycle, t)):
        t += 1
        if t * cycle.length > table.level:
            break
    return Certificate("OpenCover", "primitive non-loop cycle", P, d,
                       {"cycle": cycle, "opens": [f"rank M({a}) >= 1" for a in cycle.arrows],
                        "points": points, "exponent": t})


def _verify_open_cover(c: Certificate) -> list[Check]:
    P = c.presentation
    q = P.quiver
    cyc: Path = c.data["cycle"]
    pts = c.data["points"]
    t = c.data["exponent"]
    checks = [
        Check("cycle is primitive and not a loop",
              cyc.is_cycle and cyc.length >= 2 and is_primitive(q, cyc)),
        Check("dimension vector is the indicator of supp(w)",
              c.dims == _indicator(P, q.support(cyc))),
        Check("one open per arrow, composing to w",
              q.path(*cyc.arrows) == cyc and len(pts) == cyc.length),
    ]
    for a, M in zip(cyc.arrows, pts):
        checks.append(Check(f"point for {a} satisfies all relations", M.satisfies_relations()))
        checks.append(Check(f"point for {a} has rank M({a}) >= 1",
                            M.dims == c.dims and bool(M[a].size) and bool(M[a][0, 0])))
    adm = verify_admissible(P)
    checks.append(Check("presentation admissible", bool(adm), f"levels {adm.levels}"))
    table = truncated_quotient(P)
    checks.append(Check(f"w^{t} vanishes in A", not table.reduce(_cycle_power(cyc, t))))
    return checks


# ---------------------------------------------------------------------------
# local algebras with several loops

def cert_local_two_loops(P: Presentation, seed: int = 0) -> Certificate:
    q = P.quiver
    if len(q.vertices) != 1:
        raise NotLocal("the quiver has more than one vertex")
    if len(q.arrows) < 2:
        raise FewerThanTwoLoops("the quiver has fewer than two loops")
    A = regular(P)
    D = injective_cogenerator(P)
    if not is_isomorphic(A, D, seed=seed):
        return Certificate("RigidPair", "two loops at one vertex", P, A.dims,
                           {"M": A, "N": D, "M_role": "A", "N_role": "D(A)"})
    R = radical(A)
    Q = quotient(A, socle_spaces(A))[0]
    return Certificate("SocleTop", "two loops at one vertex (selfinjective case)", P, R.dims,
                       {"rad_P": R, "P_mod_soc": Q, "loops": len(q.arrows),
                        "opens": ["dim soc(M) <= 1", "dim top(M) <= 1"]})


def _verify_rigid_pair(c: Certificate, seed: int = 0) -> list[Check]:
    M, N = c.data["M"], c.data["N"]
    return [
        Check("M satisfies relations", M.satisfies_relations()),
        Check("N satisfies relations", N.satisfies_relations()),
        Check("equal dimension vectors", M.dims == N.dims == c.dims),
        Check("Ext^1(M, M) = 0", ext1_dim(M, M) == 0),
        Check("Ext^1(N, N) = 0", ext1_dim(N, N) == 0),
        Check("M and N not isomorphic", not is_isomorphic(M, N, seed=seed)),
    ]


def _verify_socle_top(c: Certificate, seed: int = 0) -> list[Check]:
    P = c.presentation
    A = regular(P)
    R, Q = c.data["rad_P"], c.data["P_mod_soc"]
    n = top(R).dim
    return [
        Check("A selfinjective (A iso D(A))",
              is_isomorphic(A, injective_cogenerator(P), seed=seed)),
        Check("members satisfy relations", R.satisfies_relations() and Q.satisfies_relations()),
        Check("members have dimension dim A - 1",
              R.dims == Q.dims == c.dims and R.dim == A.dim - 1),
        Check("rad(P) iso to the radical of A", is_isomorphic(R, radical(A), seed=seed)),
        Check(f"top(rad P) = S^{n} with n >= 2", n >= 2 and top(R).dim == R.dim - radical(R).dim),
        Check("soc(rad P) simple", socle(R).dim == 1),
        Check("top(P/soc P) simple", top(Q).dim == 1),
        Check("rad(P) not iso to P/soc(P)", not is_isomorphic(R, Q, seed=seed)),
    ]


# ---------------------------------------------------------------------------
# dimension gap

def _dimvec_at(M: Representation, order) -> list[int]:
    return [M.dim_at(v) for v in order]


def dimension_gap_modules(P: Presentation, k: int, l: int, r_n: int):
    """P = Ae_n + (Ae_0)^(k+l) and Q = (Ae_{n-1})^r_n + (Ae_0)^k + D(e_nA)."""
    order = degree_split(P).shape.order
    table = truncated_quotient(P)
    v0, vm, vn = order[0], order[-2], order[-1]
    A0 = projective(P, v0, table)
    Pm = direct_sum(projective(P, vn, table), power(A0, k + l))
    Qm = direct_sum(power(projective(P, vm, table), r_n), power(A0, k), injective(P, vn))
    return Pm, Qm


def cert_high_degree_relation(P: Presentation, k: int | None = None) -> Certificate:
    try:
        split = degree_split(P)
    except ValueError as exc:
        raise PreconditionViolation(str(exc)) from exc
    n = split.shape.n
    order = split.shape.order
    top_deg = split.max_degree
    if top_deg >= 2 and (top_deg != n or any(split.by_degree[j] for j in range(2, n))):
        raise PreconditionViolation("need R_n nonempty and R_2 ... R_{n-1} empty")
    try:
        T = bimodule_ranks(degree_one_part(P), check_products=False)
    except ValueError as exc:
        raise PreconditionViolation(str(exc)) from exc
    r = T.ranks
    table = truncated_quotient(P)
    c0 = split.c[0]
    e0n = table.dim_block(order[0], order[-1])
    if e0n % c0:
        raise PreconditionViolation(f"e_0Ae_n has dimension {e0n}, not a multiple of c_0")
    s = prod(r) - e0n // c0
    if s <= 0 or top_deg < 2:
        raise NoDefect(f"rank(Ae_n) at vertex 0 equals r_1...r_n (s = {s})")
    l = s
    r_n = r[-1]
    dn = table.dim_block(order[-1], order[-1])
    dm = table.dim_block(order[-2], order[-1])
    base0 = e0n

    def d0_of(kk):
        return base0 + (kk + l) * c0

    if k is None:
        k = 0
        while not l * d0_of(k) > r_n * dm:
            k += 1
            if k > K_CAP:
                raise NoWitnessInRange(f"no k <= {K_CAP}")
    Pm, Qm = dimension_gap_modules(P, k, l, r_n)
    d = Pm.dims
    G = group_dim(d)
    d0 = d0_of(k)
    return Certificate("DimensionGap", "relation of top arrow degree", P, d, {
        "order": list(order), "ranks": list(r), "s": s, "l": l, "k": k, "r_n": r_n,
        "d_0": d0, "d_n_minus_1": dm, "d_n": dn, "dim_G": G,
        "dim_X": G - dn - k * d0 - l * d0, "dim_Y": G - dn - k * d0 - r_n * dm,
        "P": Pm, "Q": Qm,
    })


def _verify_dimension_gap(c: Certificate) -> list[Check]:
    P = c.presentation
    x = c.data
    order = x["order"]
    Pm, Qm = x["P"], x["Q"]
    k, l, r_n = x["k"], x["l"], x["r_n"]
    dims = _dimvec_at(Pm, order)
    d0, dm, dn = dims[0], dims[-2], dims[-1]
    G = group_dim(c.dims)
    endP, endQ = end_dim(Pm), end_dim(Qm)
    table = truncated_quotient(P)
    vm = order[-2]
    vn = order[-1]
    ref_P, ref_Q = dimension_gap_modules(P, k, l, r_n)
    low = direct_sum(power(projective(P, vm, table), r_n), power(projective(P, order[0], table), k))
    try:
        same_rank = locally_free_rank(Pm) == locally_free_rank(Qm)
    except ValueError:
        same_rank = False
    dim_X, dim_Y = G - endP, G - endQ
    return [
        Check("modules match the recorded k, l, r_n", Pm == ref_P and Qm == ref_Q),
        Check("P and Q satisfy relations", Pm.satisfies_relations() and Qm.satisfies_relations()),
        Check("equal dimension vectors", Pm.dims == Qm.dims == c.dims),
        Check("rank(P) = rank(Q)", same_rank),
        Check("l = s", l == x["s"]),
        Check("P rigid", ext1_dim(Pm, Pm) == 0),
        Check("End(P) = d_n + (k+l) d_0", endP == dn + (k + l) * d0,
              f"{endP} vs {dn + (k + l) * d0}"),
        Check("Hom(D(e_nA), (Ae_{n-1})^r_n + (Ae_0)^k) = 0", hom_dim(injective(P, vn), low) == 0),
        Check("End(Q) = r_n d_{n-1} + k d_0 + d_n", endQ == r_n * dm + k * d0 + dn,
              f"{endQ} vs {r_n * dm + k * d0 + dn}"),
        Check("recorded dim X and dim Y match End dimensions",
              (x["dim_X"], x["dim_Y"]) == (dim_X, dim_Y)),
        Check("dim Y > dim X", dim_Y > dim_X, f"{dim_Y} > {dim_X}"),
    ]


def verify(c: Certificate, seed: int = 0) -> VerificationReport:
    try:
        if c.kind == "OpenCover":
            checks = _verify_open_cover(c)
        elif c.kind == "RigidPair":
            checks = _verify_rigid_pair(c, seed)
        elif c.kind == "SocleTop":
            checks = _verify_socle_top(c, seed)
        elif c.kind == "DimensionGap":
            checks = _verify_dimension_gap(c)
        else:
            checks = [Check("known certificate kind", False, c.kind)]
    except Exception as exc:   # a malformed certificate is a failed check, not a crash
        checks = [Check("certificate well formed", False, f"{type(exc).__name__}: {exc}")]
    return VerificationReport(c, tuple(checks))


def tamper(c: Certificate, **data) -> Certificate:
    """Copy of a certificate with some recorded data replaced (negative controls)."""
    new = dict(c.data)
    new.update(data)
    return replace(c, data=new)
