
import pytest
from hypothesis import given, strategies as st

from modvar import generators as g
from modvar.algebra.presentation import InvalidRelation, Presentation, PresentationError, Relation
from modvar.algebra.structure import (NotAdmissible, decompose, glueing_decompose,
                                      is_local_truncated, project_to_subquiver,
                                      recognize_catalog, reduced_generators)
from modvar.algebra.table import fit_levels, truncated_quotient, verify_admissible
from modvar.linalg import PrimeField
from modvar.quiver import Quiver


def avoiding_paths(quiver, forbidden, max_len):
    """Paths of length < max_len with no forbidden consecutive subword."""
    count = 0
    for p in quiver.paths(max_len - 1):
        w = p.arrows
        if not any(w[i:i + len(f)] == f for f in forbidden for i in range(len(w) - len(f) + 1)):
            count += 1
    return count


@st.composite
def monomial_presentations(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 4))
    arrows = [(f"x{i}", str(draw(st.integers(0, n - 1))), str(draw(st.integers(0, n - 1))))
              for i in range(m)]
    q = Quiver(tuple(str(i) for i in range(n)), arrows)
    N = draw(st.integers(2, 4))
    paths = [p for p in q.paths(N) if p.length >= 2]
    extra = draw(st.lists(st.sampled_from(paths), unique=True, max_size=4)) if paths else []
    rels = {p for p in q.paths(N) if p.length == N} | set(extra)
    rels = sorted(rels, key=lambda p: (p.length, p.arrows))
    P = Presentation(q, tuple(Relation.of(p) for p in rels), N + 1, N)
    return P, [p.arrows for p in rels], N


@given(monomial_presentations())
def test_monomial_quotient_dimension_matches_subword_count(data):
    P, forbidden, N = data
    table = truncated_quotient(P)
    assert table.dim == avoiding_paths(P.quiver, forbidden, N + 1)
    assert verify_admissible(P)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_b_family_dimensions(m):
    # n = 2: a e1^j = (-1)^j e0^j a; n = m: rho_m removes one dimension per e0^i a e1^j diagonal
    assert truncated_quotient(g.build_B(m, 2)).dim == 3 * m
    assert truncated_quotient(g.build_B(m, m)).dim == m * m + m
    assert truncated_quotient(g.build_B(m, m)).dim_block("0", "1") == m * m - m


def test_table_identities():
    t = truncated_quotient(g.build_B(3, 2))
    assert t.check_idempotents()
    assert t.check_associativity()
    assert t.loop_degrees() == {"0": 3, "1": 3}
    assert is_local_truncated(t)


def test_prime_field_quotient():
    P = g.build_B(2, 2, field=PrimeField(2))
    assert truncated_quotient(P).dim == 6


def test_relation_validation():
    q = g.b_quiver()
    with pytest.raises(InvalidRelation):
        Relation.of(q.path("a"))
    with pytest.raises(InvalidRelation):
        Relation.of(q.path("e0", "e0"), q.path("e0", "a"))
    with pytest.raises(PresentationError):
        Presentation(q, (), 2, 3)


def test_opposite_is_an_involution():
    P = g.build_B(3, 3)
    assert P.opposite().opposite() == P
    assert truncated_quotient(P.opposite()).dim == truncated_quotient(P).dim


def test_admissibility_failure_names_a_path():
    q = Quiver(("0",), (("x", "0", "0"), ("y", "0", "0")))
    P = Presentation(q, (Relation.of(q.path("x", "x")),), 4, 3)
    res = verify_admissible(P)
    assert not res and res.offending_path is not None
    with pytest.raises(NotAdmissible):
        recognize_catalog(P)


def test_fit_levels():
    P = fit_levels(Presentation(g.b_quiver(), g.build_B(2, 2).relations))
    assert P.nilpotency == 3
    assert verify_admissible(P)


def test_glueing_b_is_minimal():
    r = glueing_decompose(g.build_B(2, 2))
    assert r.minimal and r.reduced_minimal and r.split is None


def test_glueing_linear_square_zero_splits():
    P = g.linear(2, [2, 2, 2], relations=["a1*a2"])
    r = glueing_decompose(P)
    assert not r.minimal and r.split is not None
    assert len(decompose(P)) == 4


def test_glueing_free_arrow_splits_off():
    q = Quiver(("0", "1", "2"), (("e", "0", "0"), ("a", "1", "0"), ("b", "2", "1")))
    P = fit_levels(Presentation(q, (Relation.of(q.path("e", "e")),
                                    Relation.of(q.path("e", "a")))))
    s = glueing_decompose(P).split
    assert s is not None and "lies in no relation" in s.reason


def test_reduced_generators_drop_consequences():
    q = Quiver(("0",), (("e", "0", "0"),))
    P = fit_levels(Presentation(q, (Relation.of(q.path("e", "e")),
                                    Relation.of(q.path("e", "e", "e")))))
    assert reduced_generators(P) == (Relation.of(q.path("e", "e")),)


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 4)])
def test_catalog_b(m, n):
    v = recognize_catalog(g.build_B(m, n))
    assert (v.kind, v.params) == ("BClass", (m, n))


def test_catalog_b_with_rescaled_loop():
    v = recognize_catalog(g.build_B(3, 3, lam=2))
    assert str(v) == "BClass(3, 3)" and v.relabel["scale"] == {"e1": "2/1"}


def test_catalog_other_shapes():
    assert str(recognize_catalog(g.truncpoly(4))) == "TruncPoly(4)"
    assert recognize_catalog(g.a3()).kind == "Hereditary"
    assert recognize_catalog(g.kronecker()).kind == "Hereditary"
    assert recognize_catalog(g.two_loops_square_zero()).kind == "Unknown"
    v = recognize_catalog(g.linear(2, [2, 2, 2], relations=["a1*a2"]))
    assert v.kind == "Glueing" and [c.kind for c in v.components].count("TruncPoly") == 3


def test_project_to_subquiver():
    P = g.linear(2, [2, 3, 2], relations=["a1*a2"])
    sub = project_to_subquiver(P, ("0", "1"))
    assert sub.quiver.vertices == ("0", "1")
    assert {str(r) for r in sub.relations} == {"e0*e0", "e1*e1*e1"}


def test_linear_square_zero_composite_dimension():
    from oracles import block_dims_bruteforce
    P = g.linear(2, [2, 2, 2], relations=["a1*a2"]).with_truncation(6, 6)
    t = truncated_quotient(P)
    blocks = block_dims_bruteforce(P)
    # e_0Ae_2 = span{a1 e1 a2, e0 a1 e1 a2, a1 e1 a2 e2, e0 a1 e1 a2 e2}
    assert t.dim_block("0", "2") == blocks[("0", "2")] == 4
    assert t.dim == sum(blocks.values()) == 6 + 4 + 4 + 4
    for p in [("a1", "e1", "a2"), ("e0", "a1", "e1", "a2"), ("a1", "e1", "a2", "e2")]:
        assert t.reduce(P.quiver.path(*p))
