import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_opens, random_poset
from inflate_kit import limits
from inflate_kit.errors import CycleDetected, TooLarge, UnknownElement
from inflate_kit.poset import (
    PosetMap,
    build_poset,
    chains,
    down_set,
    dual,
    enumerate_opens,
    find_isomorphism,
    is_open,
    order_complex,
    up_set,
)
from inflate_kit.simplicial import face_poset, simplex


def edge_poset():
    return build_poset(["1", "2", "12"], [("1", "12"), ("2", "12")])


def test_fan_is_edge_face_poset():
    p = edge_poset()
    assert p.leq("1", "12") and p.leq("2", "12") and not p.leq("1", "2")
    assert find_isomorphism(p, face_poset(simplex(["1", "2"])).poset) is not None


def test_two_cycle_is_rejected():
    with pytest.raises(CycleDetected) as exc:
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])
    assert set(exc.value.witness) == {"a", "b"}


def test_longer_cycle_names_the_cycle():
    with pytest.raises(CycleDetected) as exc:
        build_poset(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")])
    cyc = exc.value.witness
    assert cyc[0] == cyc[-1] and set(cyc) == {"a", "b", "c"}


def test_unknown_and_duplicate_elements():
    with pytest.raises(UnknownElement):
        build_poset(["a"], [("a", "z")])
    with pytest.raises(UnknownElement):
        build_poset(["a", "a"], [])


def test_transitivity_and_reduction():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.leq("a", "c")
    q = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert q.reduced_input and q.covers == p.covers


def test_dual_reverses_and_is_involution():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    d = dual(p)
    assert d.leq("c", "a") and not d.leq("a", "c")
    assert dual(d) == p and dual(d).covers == p.covers


def test_up_sets():
    e = face_poset(simplex(["1", "2"])).poset
    assert up_set(e, "{1}") == frozenset({"{1}", "{1,2}"})
    assert up_set(e, "{1,2}") == frozenset({"{1,2}"})
    t = face_poset(simplex(["1", "2", "3"])).poset
    assert up_set(t, "{1}") == frozenset({"{1}", "{1,2}", "{1,3}", "{1,2,3}"})


def test_opens_of_small_posets():
    chain = build_poset(["a", "b"], [("a", "b")])
    assert enumerate_opens(chain) == [frozenset(), frozenset({"b"}), frozenset({"a", "b"})]
    anti = build_poset(list("abcd"), [])
    assert len(enumerate_opens(anti)) == 16
    edge_dual = dual(face_poset(simplex(["1", "2"])).poset)
    assert len(enumerate_opens(edge_dual)) == 5


def test_open_enumeration_is_bounded():
    anti = build_poset([f"x{i}" for i in range(21)], [])
    with pytest.raises(TooLarge):
        enumerate_opens(anti)
    with limits.override(limits.Limits(max_open_elements=4)):
        with pytest.raises(TooLarge):
            enumerate_opens(build_poset(list("abcde"), []))


def test_order_complexes():
    chain = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    k = order_complex(chain)
    assert k.f_vector() == [3, 3, 1]
    assert order_complex(build_poset(["a", "b"], [])).f_vector() == [2]
    assert order_complex(edge_poset()).f_vector() == [3, 2]


def test_poset_map_checks():
    p = edge_poset()
    pt = build_poset(["*"], [])
    f = PosetMap(p, pt, {x: "*" for x in p})
    assert f.is_monotonic() and not f.is_injective()
    with pytest.raises(UnknownElement):
        PosetMap(p, pt, {"1": "*"})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8))
def test_opens_match_brute_force(seed, n):
    p = random_poset(random.Random(seed), n)
    assert set(enumerate_opens(p)) == set(all_opens(p))
    assert len(enumerate_opens(p)) == len(all_opens(p))
    for u in enumerate_opens(p):
        assert is_open(p, u)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 9))
def test_order_axioms_and_duality(seed, n):
    p = random_poset(random.Random(seed), n)
    els = p.elements
    for a in els:
        assert p.leq(a, a)
        assert up_set(p, a) == down_set(dual(p), a)
        for b in els:
            if a != b and p.leq(a, b):
                assert not p.leq(b, a)
            for c in els:
                if p.leq(a, b) and p.leq(b, c):
                    assert p.leq(a, c)
    # covers are irredundant
    for a, b in p.covers:
        assert not any(p.lt(a, c) and p.lt(c, b) for c in els)
    assert len(order_complex(p)) == len(chains(p))
