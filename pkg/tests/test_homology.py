import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_complex, random_connected_complex, random_flabby_diagram, sympy_invariants
from inflate_kit import limits
from inflate_kit.errors import NotSimplicial, TooLarge
from inflate_kit.homology import (
    HomologyReport,
    betti_vector,
    cell_reduced_euler,
    cellular_chain_complex,
    chain_complex,
    chain_count,
    cm_check,
    complex_homology,
    euler_characteristic,
    homology,
    poset_homology,
    poset_reduced_euler,
    sum_reports,
    wedge_certificate,
)
from inflate_kit.inflation import inflate
from inflate_kit.io import read
from inflate_kit.poset import build_poset, order_complex
from inflate_kit.simplicial import (
    SimplicialComplex,
    face_poset,
    forbidden_subcomplex,
    multiclique_diagram,
    build_multigraph,
    simplex,
    simplex_boundary,
)

DATA = Path(__file__).parent / "data"


def v(n):
    return [str(i) for i in range(1, n + 1)]


def test_small_chain_complexes():
    c = chain_complex(simplex(["1"]))
    assert c.boundaries[0] == [[(0, 1)]]
    assert homology(c).nonzero() == {}
    c = chain_complex(simplex(["1", "2"]))
    assert sorted(c.boundaries[1][0]) == [(0, -1), (1, 1)]  # ∂[1,2] = [2] - [1]
    empty = SimplicialComplex([], [])
    assert complex_homology(empty).betti == {-1: 1}
    assert euler_characteristic(empty) == -1


def test_known_homology():
    assert complex_homology(order_complex(face_poset(simplex_boundary(v(3))).poset)).nonzero() == {1: 1}
    assert complex_homology(SimplicialComplex.from_facets([["a"], ["b"]])).nonzero() == {0: 1}
    for k in range(0, 6):
        r = complex_homology(simplex_boundary(v(k + 1)))
        assert r.nonzero() == {k - 1: 1} and r.is_free


def test_rp2_fixture_against_recorded_oracle():
    k = read(str(DATA / "rp2.json"), "complex")
    oracle = json.loads((DATA / "rp2_oracle.json").read_text())
    assert k.f_vector() == oracle["f_vector"]
    for method in ("auto", "order", "cellular"):
        r = poset_homology(face_poset(k), method=method)
        assert r.torsion == {1: (2,)}
        assert all(r.at(int(d)) == b for d, b in oracle["betti"].items())
    c = chain_complex(k)
    for deg, rank in oracle["boundary_ranks"].items():
        deg = int(deg)
        dense = [[0] * len(c.boundaries[deg]) for _ in range(c.rank_of(deg - 1))]
        for j, col in enumerate(c.boundaries[deg]):
            for r_, val in col:
                dense[r_][j] = val
        assert sympy_invariants(dense) == oracle["nonunit_invariant_factors"][str(deg)]


def test_euler_conventions():
    # reduced Euler characteristic of a circle is -1
    assert euler_characteristic(simplex_boundary(v(3))) == -1
    g = build_multigraph(v(3), [("1", "2", 2), ("1", "3", 1), ("2", "3", 1)])
    k, d = multiclique_diagram(g)
    res = face_poset(SimplicialComplex.from_facets([["1", "2", "3"]]))
    infl = inflate(res.poset, d).result
    assert poset_reduced_euler(infl) == 0 == poset_homology(infl).reduced_euler()


def test_wedge_certificates():
    assert wedge_certificate(HomologyReport({2: 3}), 2) == wedge_certificate(HomologyReport({2: 3}), 2)
    c = wedge_certificate(HomologyReport({2: 3}), 2)
    assert c.passed and c.count == 3
    c = wedge_certificate(HomologyReport({1: 0}, {1: (2,)}), 2)
    assert not c.passed and "torsion" in c.failure_reason
    c = wedge_certificate(HomologyReport({0: 0, 1: 0}), 1)
    assert c.passed and c.count == 0
    assert wedge_certificate(HomologyReport({-1: 1}), -1).passed


def test_cm():
    for n in range(1, 5):
        assert cm_check(face_poset(simplex(v(n))))
        assert cm_check(face_poset(simplex_boundary(v(n))))
    two = face_poset(SimplicialComplex.from_facets([["1", "2"], ["3", "4"]]))
    verdict = cm_check(two)
    assert not verdict and verdict.failure.element is None and verdict.failure.degree == 1
    assert "degree 0" in verdict.failure.reason
    impure = face_poset(SimplicialComplex.from_facets([["1", "2", "3"], ["3", "4"]]))
    assert "not pure" in cm_check(impure).failure.reason
    # a bowtie: two triangles sharing a vertex, the shared vertex has a disconnected link
    bow = face_poset(SimplicialComplex.from_facets([["1", "2", "3"], ["3", "4", "5"]]))
    verdict = cm_check(bow)
    assert not verdict and verdict.failure.element == "{3}"
    with pytest.raises(NotSimplicial):
        cm_check(build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")]))


def test_size_guard():
    with limits.override(limits.Limits(max_faces=10)):
        with pytest.raises(TooLarge):
            complex_homology(simplex_boundary(v(5)))
        with pytest.raises(TooLarge):
            poset_homology(face_poset(simplex(v(4))).poset, method="order")


def test_sum_reports():
    a = HomologyReport({-1: 0, 0: 0, 1: 1})
    b = HomologyReport({-1: 0, 0: 1})
    s = sum_reports([a, b])
    assert s.betti == {-1: 0, 0: 2, 1: 1}
    assert sum_reports([]).betti == {-1: 1}
    assert betti_vector(s) == [0, 2, 1]


def test_poset_routes_on_non_simplicial():
    p = build_poset(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])
    assert poset_homology(p).nonzero() == {1: 1}
    with pytest.raises(NotSimplicial):
        diamond = build_poset(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
        poset_homology(diamond, method="cellular")
    with pytest.raises(ValueError):
        poset_homology(p, method="bogus")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_routes_agree_and_boundaries_square_to_zero(seed):
    rng = random.Random(seed)
    k = random_complex(rng, rng.randint(1, 6), rng.randint(1, 5), max_dim=3)
    sp = face_poset(k)
    direct = complex_homology(k)
    cell = poset_homology(sp, method="cellular")
    order = poset_homology(sp.poset, method="order")
    assert direct == cell == order
    chain_complex(k).check()
    cellular_chain_complex(sp).check()
    chi = euler_characteristic(k)
    assert chi == direct.reduced_euler() == cell_reduced_euler(sp) == poset_reduced_euler(sp.poset)
    assert chain_count(sp.poset) == len(order_complex(sp.poset))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_inflations_agree_across_routes(seed):
    rng = random.Random(seed)
    k = random_connected_complex(rng, max_faces=8)
    res = inflate(face_poset(k).poset, random_flabby_diagram(rng, k)).result
    assert poset_homology(res, method="cellular") == poset_homology(res, method="order")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_torsion_matches_sympy(seed):
    from inflate_kit._kernels import rank_and_torsion

    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    dense = [[rng.choice([0, 0, 1, -1, 2, 3, -4]) for _ in range(cols)] for _ in range(rows)]
    columns = [[(r, dense[r][c]) for r in range(rows) if dense[r][c]] for c in range(cols)]
    rank, tors = rank_and_torsion(rows, columns)
    from sympy import Matrix

    assert rank == Matrix(dense).rank()
    assert sorted(tors) == sympy_invariants(dense)


def test_subdivision_invariance():
    for k in (simplex_boundary(v(4)), forbidden_subcomplex(4, ["1", "2"]), read(str(DATA / "rp2.json"), "complex")):
        sd = order_complex(face_poset(k).poset)
        assert complex_homology(sd) == complex_homology(k)
