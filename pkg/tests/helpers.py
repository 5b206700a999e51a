"""Random fixtures and brute-force oracles shared by the test modules.

The oracles deliberately avoid the package's kernels: sections are plain
products filtered by the cover maps, opens are all subsets filtered by
up-closure.
"""
from __future__ import annotations

import itertools
import random

from inflate_kit.poset import Poset, dual
from inflate_kit.sheaf import Diagram, build_diagram
from inflate_kit.simplicial import (
    SimplicialComplex,
    build_simplicial_map,
    face_poset,
    simplex,
    wachs_inflation,
)

# ---------------------------------------------------------------------------
# posets and diagrams


def random_poset(rng: random.Random, n: int, p: float = 0.35) -> Poset:
    """Random order on ``n`` elements: a random DAG compatible with a shuffled labelling."""
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Poset([f"p{i}" for i in range(n)], pairs)


def random_diagram(rng: random.Random, base: Poset, omega: int = 4, empty_ok: bool = False) -> Diagram:
    """A random functor built from nested partitions of a universe ``{0..omega-1}``.

    Going down the order, each element gets a subset of the universe inside
    the subsets above it and a partition refining theirs; stalks are the
    blocks and maps send a block to the block containing it.  Functoriality is
    automatic, and maps can be non-injective and non-surjective.
    """
    n = len(base)
    support: list[frozenset[int] | None] = [None] * n
    label: list[dict[int, int] | None] = [None] * n  # universe point -> block id
    for i in reversed(base.topological_order):
        ups = base.upper_cover_idx(i)
        allowed = set(range(omega))
        for t in ups:
            allowed &= support[t]
        pts = [x for x in sorted(allowed) if rng.random() < 0.8]
        if not pts and not empty_ok and allowed:
            pts = [rng.choice(sorted(allowed))]
        # common refinement of the blocks above, then split a little more
        key = {x: tuple(label[t][x] for t in ups) for x in pts}
        blocks: dict[tuple, int] = {}
        lab = {}
        for x in pts:
            k = key[x] + ((rng.randrange(2),) if rng.random() < 0.4 else (0,))
            lab[x] = blocks.setdefault(k, len(blocks))
        support[i] = frozenset(pts)
        label[i] = lab
    stalks, maps = {}, {}
    for i, e in enumerate(base.elements):
        ids = sorted(set(label[i].values()))
        stalks[e] = [f"b{k}" for k in ids]
    for a, b in base.covers:
        i, j = base.index(a), base.index(b)
        m = {}
        for x, blk in label[i].items():
            m[f"b{blk}"] = f"b{label[j][x]}"
        maps[a, b] = m
    return build_diagram(base, stalks, maps)


def random_complex(rng: random.Random, nverts: int, nfacets: int, max_dim: int = 2) -> SimplicialComplex:
    verts = [str(i + 1) for i in range(nverts)]
    facets = []
    for _ in range(nfacets):
        size = rng.randint(1, min(max_dim + 1, nverts))
        facets.append(tuple(sorted(rng.sample(verts, size), key=int)))
    used = sorted({v for f in facets for v in f}, key=int)
    return SimplicialComplex.from_facets(facets, vertices=used)


def random_connected_complex(rng: random.Random, max_faces: int = 8, max_dim: int = 2) -> SimplicialComplex:
    while True:
        k = random_complex(rng, rng.randint(1, 4), rng.randint(1, 3), max_dim)
        sp = face_poset(k)
        if len(sp.poset) <= max_faces and sp.poset.is_connected():
            return k


def random_subinflation_map(rng: random.Random, k: SimplicialComplex, max_count: int = 2):
    """A nondegenerate surjective map onto ``k``: a random subcomplex of a vertex inflation.

    Every facet of ``k`` keeps at least one lift, so the projection stays
    surjective; projections of inflations never collapse a face.
    """
    counts = {v: rng.randint(1, max_count) for v in k.vertices}
    big = wachs_inflation(k, counts)
    by_target: dict[tuple, list] = {}
    for f in big.facets:
        by_target.setdefault(tuple(v.split(".")[0] for v in f), []).append(f)
    keep = []
    for lifts in by_target.values():
        keep.append(rng.choice(lifts))
        keep.extend(f for f in lifts if rng.random() < 0.5 and f not in keep)
    used = sorted({v for f in keep for v in f})
    src = SimplicialComplex.from_facets(keep, vertices=used)
    return build_simplicial_map(src, k, {v: v.split(".")[0] for v in used})


# ---------------------------------------------------------------------------
# brute-force oracles


def all_opens(p: Poset) -> list[frozenset[str]]:
    out = []
    els = p.elements
    for r in range(len(els) + 1):
        for sub in itertools.combinations(els, r):
            s = set(sub)
            if all(b in s for a, b in p.covers if a in s):
                out.append(frozenset(s))
    return out


def brute_sections(d: Diagram, u: frozenset[str]) -> list[dict[str, str]]:
    b = d.base
    order = [e for e in b.elements if e in u]
    out = []
    for choice in itertools.product(*(d.stalk(e) for e in order)):
        sec = dict(zip(order, choice))
        if all(d.edge_map(a, c)[sec[a]] == sec[c] for a, c in b.covers if a in u and c in u):
            out.append(sec)
    return out


def brute_inhabited(d: Diagram) -> bool:
    return all(brute_sections(d, u) for u in all_opens(d.base) if u)


def brute_flabby(d: Diagram) -> bool:
    """Every section on every nonempty open ``V`` extends to every open ``U`` containing it."""
    opens = [u for u in all_opens(d.base) if u]
    secs = {u: brute_sections(d, u) for u in opens}
    for v in opens:
        for u in opens:
            if not v < u:
                continue
            restricted = {tuple(sorted((e, s[e]) for e in v)) for s in secs[u]}
            for s in secs[v]:
                if tuple(sorted(s.items())) not in restricted:
                    return False
    return True


def brute_etale(d: Diagram) -> bool:
    """Unions of section graphs are exactly the up-sets of the completion."""
    b = d.base
    points = [(e, x) for e in b.elements for x in d.stalk(e)]
    idx = {pt: i for i, pt in enumerate(points)}
    basis = set()
    for u in all_opens(b):
        if u:
            for s in brute_sections(d, u):
                basis.add(sum(1 << idx[e, x] for e, x in s.items()))
    unions = {0}
    for m in basis:
        unions |= {m | w for w in unions}
    ups = set()
    for r in range(len(points) + 1):
        for sub in itertools.combinations(range(len(points)), r):
            s = set(sub)
            ok = True
            for i in s:
                e, x = points[i]
                for t in b.elements:
                    if b.lt(e, t) and idx[t, d.apply(e, t, x)] not in s:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                ups.add(sum(1 << i for i in s))
    return unions == ups


def sympy_invariants(rows: list[list[int]]) -> list[int]:
    """Invariant factors > 1 via sympy's Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    if not rows or not rows[0]:
        return []
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return sorted(x for x in diag if x > 1)


def path_complex(n: int) -> SimplicialComplex:
    """The path 1 - 2 - ... - n."""
    return SimplicialComplex.from_facets([(str(i), str(i + 1)) for i in range(1, n)])


def dual_face_base(k: SimplicialComplex) -> Poset:
    return dual(face_poset(k).poset)


def generator_product_diagram(rng: random.Random, k: SimplicialComplex, max_mult: int = 3) -> Diagram:
    """Pick generating faces with multiplicities; the stalk over ``I`` is the product over generators inside ``I``.

    Vertex generators give vertex inflations, edge generators give multiclique
    diagrams.  A section is a free choice per generator in its domain, so these
    diagrams are always inhabited and flabby.
    """
    sp = face_poset(k)
    faces = list(sp.poset.elements)
    gens = [f for f in faces if rng.random() < 0.4] or [rng.choice(faces)]
    mult = {g: rng.randint(1, max_mult) for g in gens}
    if all(m == 1 for m in mult.values()):
        mult[rng.choice(gens)] = 2
    below = {f: [g for g in gens if sp.poset.leq(g, f)] for f in faces}

    def name(f, choice):
        return "(" + ",".join(map(str, choice)) + ")"

    stalks = {f: [name(f, c) for c in itertools.product(*(range(mult[g]) for g in below[f]))] for f in faces}
    base = dual(sp.poset)
    maps = {}
    for a, b in base.covers:  # a is a face of larger dimension than b
        pick = [below[a].index(g) for g in below[b]]
        maps[a, b] = {
            name(a, c): name(b, tuple(c[i] for i in pick))
            for c in itertools.product(*(range(mult[g]) for g in below[a]))
        }
    return build_diagram(base, stalks, maps)


def random_flabby_diagram(rng: random.Random, k: SimplicialComplex, tries: int = 200) -> Diagram:
    """An inhabited flabby diagram on the dual face poset of ``k`` with some stalk of size >= 2.

    Mostly rejection-sampled from preimage diagrams and generic random
    diagrams; the generator-product family is mixed in and is the fallback.
    """
    from inflate_kit.sheaf import is_flabby, is_inhabited
    from inflate_kit.simplicial import diagram_from_map

    base = dual_face_base(k)
    for _ in range(tries):
        r = rng.random()
        if r < 0.25:
            return generator_product_diagram(rng, k)
        if r < 0.6:
            d = diagram_from_map(random_subinflation_map(rng, k, 3))
        else:
            d = random_diagram(rng, base, omega=rng.randint(2, 5))
        if d.base == base and is_inhabited(d) and is_flabby(d) and any(len(s) > 1 for s in d._stalks):
            return d
    return generator_product_diagram(rng, k)


__all__ = [
    "random_poset",
    "random_diagram",
    "random_complex",
    "random_connected_complex",
    "random_subinflation_map",
    "random_flabby_diagram",
    "generator_product_diagram",
    "all_opens",
    "brute_sections",
    "brute_inhabited",
    "brute_flabby",
    "brute_etale",
    "sympy_invariants",
    "path_complex",
    "dual_face_base",
    "simplex",
]
