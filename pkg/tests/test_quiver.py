import pytest
from hypothesis import given, strategies as st

from modvar.quiver import (AlreadyPrimitive, EndpointMismatch, NotACycle, Path, Quiver,
                           QuiverError, UnknownArrow, UnknownVertex, compose, cycle_report,
                           cycles, extract_primitive, induced_subquiver, is_loop_power,
                           is_primitive)


@pytest.fixture
def q():
    return Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"),
                                   ("l", "1", "1")))


def test_path_conventions(q):
    p = q.path("b", "a")
    assert (p.source, p.target) == ("1", "3")
    assert compose(q.path("b"), q.path("a")) == p
    with pytest.raises(EndpointMismatch):
        q.path("a", "b")
    assert q.support(p) == ("1", "2", "3")
    assert str(Path.trivial(2)) == "e_2"


def test_quiver_validation():
    with pytest.raises(UnknownVertex):
        Quiver(("0",), (("a", "0", "1"),))
    with pytest.raises(QuiverError):
        Quiver(("0", "0"))
    with pytest.raises(UnknownArrow):
        Quiver(("0",)).arrow("x")


def test_primitive_and_loop_power(q):
    assert is_primitive(q, q.path("c", "b", "a"))
    assert not is_primitive(q, q.path("c", "b", "a", "l"))
    assert is_loop_power(q, q.path("l", "l"))
    assert not is_loop_power(q, q.path("c", "b", "a"))


def test_extract_primitive_example(q):
    c = q.path("c", "b", "a", "l")
    s = extract_primitive(q, c)
    assert (s.u, s.v) == (4, 4) and s.primitive == q.path("l")
    assert s.remainder == q.path("c", "b", "a")
    with pytest.raises(AlreadyPrimitive):
        extract_primitive(q, q.path("l"))
    with pytest.raises(NotACycle):
        extract_primitive(q, q.path("a"))


def test_cycles_one_per_rotation_class(q):
    cs = cycles(q, 3)
    assert q.path("c", "b", "a") in cs or any(set(c.arrows) == {"a", "b", "c"} for c in cs)
    assert sum(1 for c in cs if set(c.arrows) == {"a", "b", "c"}) == 1
    assert q.path("l") in cs


def test_cycle_report(q):
    r = cycle_report(q)
    assert not r.passes
    assert len(r.primitive_nonloop) == 1
    good = Quiver(("0", "1"), (("e0", "0", "0"), ("a", "1", "0")))
    assert cycle_report(good).passes


def test_induced_subquiver(q):
    s = induced_subquiver(q, ("1", "2"))
    assert {a.name for a in s.arrows} == {"a", "l"}


@st.composite
def walks(draw):
    """A random quiver with a random closed walk on it."""
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 10))
    arrows = [(f"x{i}", str(draw(st.integers(0, n - 1))), str(draw(st.integers(0, n - 1))))
              for i in range(m)]
    q = Quiver(tuple(str(i) for i in range(n)), arrows)
    start = draw(st.sampled_from(q.vertices))
    seq, here = [], start
    for _ in range(draw(st.integers(1, 14))):
        out = [a for a in q.arrows if a.source == here]
        if not out:
            break
        a = draw(st.sampled_from(out))
        seq.append(a.name)
        here = a.target
    return q, start, seq


@given(walks())
def test_extract_primitive_contract(data):
    q, _, seq = data
    if not seq:
        return
    p = q.path(*reversed(seq))
    if not p.is_cycle or is_primitive(q, p):
        return
    s = extract_primitive(q, p)
    assert 1 <= s.u <= s.v <= p.length
    assert s.primitive.arrows == p.arrows[s.u - 1:s.v]
    assert s.primitive.is_cycle and is_primitive(q, s.primitive)
    assert s.remainder.arrows == p.arrows[:s.u - 1] + p.arrows[s.v:]
    assert s.remainder.is_cycle
