from math import prod

import pytest

from modvar import generators as g
from modvar.algebra.grading import (DegreeTooHigh, NotFree,
                                    NotLinearShape, bimodule_ranks, degree_one_part,
                                    degree_split, linear_shape, projective_rank_vector,
                                    rank_vector_from_basis)
from modvar.algebra.table import truncated_quotient

from corpus import LINEAR_CORPUS, NOT_FREE


def build(case):
    n, c, t, rels = case
    return g.linear(n, c, t, rels)


def loop_only_dim(c, t):
    """Paths e_j^* a e_{j+1}^* ... a e_i^*: c_j * prod_{k=j+1..i} t_k c_k per block."""
    n = len(c) - 1
    t = t or [1] * n
    return sum(c[j] * prod(t[k - 1] * c[k] for k in range(j + 1, i + 1))
               for i in range(n + 1) for j in range(i + 1))


@pytest.mark.parametrize("case", LINEAR_CORPUS, ids=lambda c: f"{c[0]}-{c[1]}-{c[2]}-{len(c[3])}")
def test_corpus_rank_vectors_and_tensor_dimension(case):
    P = build(case)
    T = bimodule_ranks(P)
    split = degree_split(P)
    table = truncated_quotient(P)
    n = case[0]
    for i in range(n + 1):
        assert projective_rank_vector(T, i) == rank_vector_from_basis(table, split, i)
    assert T.dim_tensor == T.dim_algebra == table.dim
    assert T.bijective and T.products_agree


@pytest.mark.parametrize("case", [c for c in LINEAR_CORPUS if not c[3]])
def test_loop_only_dimension_closed_form(case):
    n, c, t, _ = case
    T = bimodule_ranks(build(case))
    assert T.dim_algebra == loop_only_dim(c, t)
    assert list(T.ranks) == [(t or [1] * n)[k - 1] * c[k] for k in range(1, n + 1)]


@pytest.mark.parametrize("case", NOT_FREE)
def test_not_free(case):
    with pytest.raises(NotFree):
        bimodule_ranks(build(case))


def test_b22_bimodule():
    T = bimodule_ranks(g.build_B(2, 2))
    assert T.ranks == (1,) and T.right_ranks == (1,)
    assert T.dim_tensor == 6


def test_shape_errors():
    with pytest.raises(NotLinearShape):
        linear_shape(g.two_cycle().quiver)
    with pytest.raises(NotLinearShape):
        degree_split(g.two_loops_square_zero())


def test_degree_split_and_degree_one_part():
    P = g.linear(2, [2, 2, 2], relations=["a1*e1*a2"])
    s = degree_split(P)
    assert s.max_degree == 2 and len(s.by_degree[2]) == 1 and s.c == (2, 2, 2)
    Q = degree_one_part(P)
    assert all(len(r.paths[0].arrows) for r in Q.relations)
    assert truncated_quotient(Q).dim == 22
    with pytest.raises(DegreeTooHigh):
        bimodule_ranks(P)
