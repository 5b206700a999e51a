import random

from hypothesis import given, settings, strategies as st

from helpers import brute_etale, random_connected_complex, random_diagram, random_flabby_diagram, random_poset
from inflate_kit.inflation import completion, complexity, etale_check, inflate
from inflate_kit.poset import build_poset, dual, is_isomorphic
from inflate_kit.sheaf import build_diagram, trivial_diagram
from inflate_kit.simplicial import SimplicialComplex, face_poset, is_simplicial, simplex, vertex_inflation_diagram

import pytest
from inflate_kit.errors import BaseMismatch


def test_point_completion_is_antichain():
    pt = build_poset(["*"], [])
    d = build_diagram(pt, {"*": ["x", "y", "z"]}, {})
    c = completion(pt, d)
    assert len(c.result) == 3 and not c.result.covers
    assert sorted(c.fiber("*")) == ["(*,x)", "(*,y)", "(*,z)"]


def test_edge_inflation_is_four_cycle():
    e = simplex(["1", "2"])
    d = vertex_inflation_diagram(e, [2, 2])
    assert complexity(d) == 8
    c = inflate(face_poset(e).poset, d)
    assert len(completion(d.base, d).result) == 8
    cyc = SimplicialComplex.from_facets([("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
    assert is_isomorphic(c.result, face_poset(cyc).poset)
    edges = [x for x in c.result if c.result.lower_covers(x)]
    assert len(edges) == 4 and all(len(c.result.lower_covers(x)) == 2 for x in edges)
    assert c.projection.is_monotonic()


def test_complexity_bounds_on_simplices():
    for n in range(1, 5):
        base = dual(face_poset(simplex([str(i) for i in range(n)])).poset)
        assert complexity(trivial_diagram(base)) == 2**n - 1
        d = vertex_inflation_diagram(simplex([str(i) for i in range(n)]), [2] + [1] * (n - 1))
        assert complexity(d) > 2**n - 1


def test_base_mismatch():
    e = face_poset(simplex(["1", "2"])).poset
    with pytest.raises(BaseMismatch):
        inflate(e, trivial_diagram(e))
    with pytest.raises(BaseMismatch):
        completion(e, trivial_diagram(dual(e)))


def test_etale_on_fixtures():
    e = simplex(["1", "2"])
    d = vertex_inflation_diagram(e, [2, 2])
    assert etale_check(d.base, d) and brute_etale(d)
    base = dual(face_poset(simplex(["1", "2", "3"])).poset)
    assert etale_check(base, trivial_diagram(base))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 7))
def test_completion_invariants(seed, n):
    rng = random.Random(seed)
    p = random_poset(rng, n)
    d = random_diagram(rng, p, omega=3, empty_ok=True)
    c = completion(p, d)
    r = c.result
    assert len(r) == complexity(d)
    assert c.projection.is_monotonic()
    for s in p:
        assert len(c.fiber(s)) == len(d.stalk(s))
    for a in r:
        for b in r:
            (s1, x1), (s2, x2) = c.pairs[a], c.pairs[b]
            assert r.leq(a, b) == (p.leq(s1, s2) and d.apply(s1, s2, x1) == x2)
    assert etale_check(p, d)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_inflation_of_simplicial_is_simplicial(seed):
    rng = random.Random(seed)
    k = random_connected_complex(rng, max_faces=10)
    d = random_flabby_diagram(rng, k)
    assert is_simplicial(inflate(face_poset(k).poset, d).result)
