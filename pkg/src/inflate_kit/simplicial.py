"""Simplicial complexes, simplicial posets, multigraphs, and the canonical diagrams.

Face posets label a face by its vertices in braces, e.g. ``"{1,2}"``.  Product
stalks (vertex and edge inflation) name their elements by the tuple of chosen
copies, e.g. ``"(0,1)"``; the preimage diagram of a simplicial map names them by
source face labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateMap,
    EmptySimplex,
    InvariantViolation,
    MissingCount,
    NonPositiveCount,
    NotSimplicial,
    NotSurjective,
    UnknownElement,
)
from .poset import Poset, _bits, dual, natural_key
from .sheaf import Diagram


def face_label(vertices: Iterable[str]) -> str:
    return "{" + ",".join(vertices) + "}"


class SimplicialComplex:
    """Downward-closed family of nonempty vertex sets.

    Faces are stored as increasing tuples of vertex indices, sorted by size
    then lexicographically.  Every listed vertex is a 0-face.
    """

    def __init__(self, vertices: Sequence[str], faces: Iterable[tuple[int, ...]]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        fs = set(faces) | {(i,) for i in range(len(self.vertices))}
        self.faces: tuple[tuple[int, ...], ...] = tuple(sorted(fs, key=lambda f: (len(f), f)))
        self._index = {f: k for k, f in enumerate(self.faces)}

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable], vertices: Iterable | None = None) -> "SimplicialComplex":
        facets = [sorted({str(v) for v in f}, key=natural_key) for f in facets]
        used = {v for f in facets for v in f}
        if vertices is None:
            verts = sorted(used, key=natural_key)
        else:
            verts = [str(v) for v in vertices]
            if len(set(verts)) != len(verts):
                raise InvariantViolation("repeated vertex in the vertex list")
            missing = used - set(verts)
            if missing:
                raise UnknownElement(f"facets use unlisted vertices {sorted(missing, key=natural_key)}")
        pos = {v: i for i, v in enumerate(verts)}
        faces: set[tuple[int, ...]] = set()
        for f in facets:
            if not f:
                continue
            idx = tuple(sorted(pos[v] for v in f))
            if idx in faces:
                continue
            for r in range(1, len(idx) + 1):
                faces.update(combinations(idx, r))
        return cls(verts, faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, names) -> bool:
        try:
            return self.face_index(names) is not None
        except KeyError:
            return False

    def face_index(self, names: Iterable[str]) -> int:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return self._index[tuple(sorted(pos[v] for v in names))]

    def names(self, face: tuple[int, ...]) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in face)

    def label(self, face: tuple[int, ...]) -> str:
        return face_label(self.names(face))

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    @property
    def facets(self) -> list[tuple[str, ...]]:
        fs = set(self.faces)
        out = []
        for f in self.faces:
            extendable = any(
                tuple(sorted(f + (v,))) in fs for v in range(len(self.vertices)) if v not in f
            )
            if not extendable:
                out.append(self.names(f))
        return out

    def f_vector(self) -> list[int]:
        out = [0] * (self.dim + 1)
        for f in self.faces:
            out[len(f) - 1] += 1
        return out

    def face_sets(self) -> set[frozenset[str]]:
        return {frozenset(self.names(f)) for f in self.faces}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.face_sets() == other.face_sets()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, f={self.f_vector()})"


def simplex(vertices: Iterable) -> SimplicialComplex:
    vs = [str(v) for v in vertices]
    return SimplicialComplex.from_facets([vs] if vs else [], vertices=vs)


def simplex_boundary(vertices: Iterable) -> SimplicialComplex:
    """Proper faces of the simplex on ``vertices``; the boundary of a point is empty."""
    vs = [str(v) for v in vertices]
    n = len(vs)
    return _from_faces(vs, [f for r in range(1, n) for f in combinations(range(n), r)])


def forbidden_subcomplex(n: int, i: Iterable) -> SimplicialComplex:
    """Faces of the simplex on ``1..n`` that do not contain all of ``i``.

    Vertices in no remaining face (``i`` a single vertex) are not listed.
    """
    forb = {str(v) for v in i}
    if not forb:
        raise EmptySimplex("the forbidden face must be nonempty")
    verts = [str(v) for v in range(1, n + 1)]
    if not forb <= set(verts):
        raise UnknownElement(f"{sorted(forb - set(verts))} are not vertices of the simplex on 1..{n}")
    pos = {v: k for k, v in enumerate(verts)}
    forb_idx = {pos[v] for v in forb}
    faces = [
        f for r in range(1, n + 1) for f in combinations(range(n), r) if not forb_idx <= set(f)
    ]
    return _from_faces(verts, faces)


def _from_faces(verts: list[str], faces: list[tuple[int, ...]]) -> SimplicialComplex:
    # reindex onto the vertices that occur, keeping their order
    used = sorted({v for f in faces for v in f})
    new = {v: k for k, v in enumerate(used)}
    return SimplicialComplex([verts[v] for v in used], [tuple(new[v] for v in f) for f in faces])


# ---------------------------------------------------------------------------
# simplicial posets

class SimplicialPoset:
    """A geometric simplicial poset: every lower cone is a Boolean lattice minus its bottom.

    ``rank(x)`` is the number of vertices (minimal elements) below ``x``.
    """

    def __init__(self, poset: Poset):
        self.poset = poset
        atoms = 0
        for i in range(len(poset)):
            if not poset.lower_cover_idx(i):
                atoms |= 1 << i
        self.atom_mask = atoms
        self._atoms = [poset.down_mask(i) & atoms for i in range(len(poset))]
        for i in range(len(poset)):
            self._check_boolean(i)
        self.rank = {poset.elements[i]: bin(self._atoms[i]).count("1") for i in range(len(poset))}

    def _check_boolean(self, i: int) -> None:
        # By induction on rank: the lower covers of x must be exactly one
        # element per vertex v of x, with vertex set A(x) - {v}.  Their cones
        # then realize every proper subset, and the cone of x is Boolean iff
        # it has no further elements, i.e. exactly 2^r - 1 of them.
        p = self.poset
        atoms = self._atoms
        a = atoms[i]
        r = a.bit_count()
        lower = p.lower_cover_idx(i)
        if r > 1:
            drops = set()
            for y in lower:
                missing = a & ~atoms[y]
                if missing.bit_count() != 1 or atoms[y] | missing != a or missing in drops:
                    raise NotSimplicial(
                        f"lower cone of {p.elements[i]!r} is not Boolean at {p.elements[y]!r}",
                        witness=p.elements[i],
                    )
                drops.add(missing)
            if len(drops) != r:
                raise NotSimplicial(f"{p.elements[i]!r} has {len(drops)} facets, not {r}", witness=p.elements[i])
        size = p.down_mask(i).bit_count()
        if size != 2**r - 1:
            raise NotSimplicial(f"lower cone of {p.elements[i]!r} has {size} elements, not {2**r - 1}",
                                witness=p.elements[i])

    @property
    def elements(self) -> tuple[str, ...]:
        return self.poset.elements

    def __len__(self) -> int:
        return len(self.poset)

    def atoms_of(self, i: int) -> int:
        return self._atoms[i]

    def dim_of(self, x: str) -> int:
        return self.rank[x] - 1

    @property
    def dim(self) -> int:
        return max(self.rank.values(), default=0) - 1

    def is_pure(self) -> bool:
        return len({self.rank[x] for x in self.poset.maximal()}) <= 1

    def vertices_of(self, x: str) -> list[str]:
        return self.poset.sorted_names(self._atoms[self.poset.index(x)])

    def __repr__(self) -> str:
        return f"SimplicialPoset({len(self)} simplices, dim {self.dim})"


def as_simplicial_poset(p: Poset) -> SimplicialPoset:
    return SimplicialPoset(p)


def is_simplicial(p: Poset) -> bool:
    try:
        SimplicialPoset(p)
    except NotSimplicial:
        return False
    return True


def face_poset(k: SimplicialComplex) -> SimplicialPoset:
    """Nonempty faces ordered by inclusion."""
    labels = [k.label(f) for f in k.faces]
    covers = []
    for j, f in enumerate(k.faces):
        if len(f) < 2:
            continue
        for drop in range(len(f)):
            covers.append((k._index[f[:drop] + f[drop + 1:]], j))
    return SimplicialPoset(Poset(labels, covers))


def link(sp: SimplicialPoset, i: str) -> SimplicialPoset:
    """The subposet strictly above ``i``; ranks drop by ``rank(i)``."""
    p = sp.poset
    k = p.index(i)
    return SimplicialPoset(p.induced(p.names(p.up_mask(k) & ~(1 << k))))


# ---------------------------------------------------------------------------
# multigraphs and clique complexes

@dataclass(frozen=True)
class Multigraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    def multiplicity(self, u: str, v: str) -> int:
        a, b = sorted((u, v), key=natural_key)
        for x, y, m in self.edges:
            if (x, y) == (a, b):
                return m
        return 0


def build_multigraph(vertices: Iterable, edges: Iterable[tuple]) -> Multigraph:
    verts = tuple(str(v) for v in vertices)
    if len(set(verts)) != len(verts):
        raise InvariantViolation("repeated vertex in the vertex list")
    seen = set()
    out = []
    for u, v, m in edges:
        u, v = str(u), str(v)
        for x in (u, v):
            if x not in verts:
                raise UnknownElement(f"edge ({u}, {v}) uses unknown vertex {x!r}", witness=(u, v))
        if u == v:
            raise InvariantViolation(f"loop at {u!r}; multigraphs have no loops", witness=(u, v))
        if not isinstance(m, int) or m < 1:
            raise InvariantViolation(f"edge ({u}, {v}) has multiplicity {m!r}; need an integer >= 1", witness=(u, v))
        a, b = sorted((u, v), key=natural_key)
        if (a, b) in seen:
            raise InvariantViolation(f"edge ({a}, {b}) listed twice", witness=(a, b))
        seen.add((a, b))
        out.append((a, b, m))
    out.sort(key=lambda e: (natural_key(e[0]), natural_key(e[1])))
    return Multigraph(verts, tuple(out))


def clique_complex(vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> SimplicialComplex:
    verts = sorted((str(v) for v in vertices), key=natural_key)
    pos = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for u, v in edges:
        a, b = pos[str(u)], pos[str(v)]
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    faces: list[tuple[int, ...]] = []

    def grow(clique: tuple[int, ...], cand: int) -> None:
        faces.append(clique)
        for j in _bits(cand):
            grow(clique + (j,), cand & adj[j] & ~((1 << (j + 1)) - 1))

    for i in range(len(verts)):
        grow((i,), adj[i] & ~((1 << (i + 1)) - 1))
    return SimplicialComplex(verts, faces)


# ---------------------------------------------------------------------------
# canonical diagrams

def _product_diagram(sp: SimplicialPoset, factors: Sequence[Sequence[tuple[object, int]]]) -> Diagram:
    """Diagram on ``dual(sp)``: stalk at a face is the product of its factor ranges, maps are projections.

    ``factors[i]`` lists ``(key, size)`` for face ``i``; a face's keys must
    contain the keys of each of its faces.
    """
    p = sp.poset
    d = dual(p)
    n = len(p)
    tuples = [list(product(*(range(s) for _, s in factors[i]))) for i in range(n)]
    names = [["(" + ",".join(map(str, t)) + ")" for t in tuples[i]] for i in range(n)]
    emap = []
    for i in range(n):
        row = []
        keys_i = [key for key, _ in factors[i]]
        for j in d.upper_cover_idx(i):
            # itertools.product order: index of a tuple is mixed radix, last factor fastest
            sizes_j = [size for _, size in factors[j]]
            strides = [1] * len(sizes_j)
            for q in range(len(sizes_j) - 2, -1, -1):
                strides[q] = strides[q + 1] * sizes_j[q + 1]
            at = [(keys_i.index(key), st) for (key, _), st in zip(factors[j], strides)]
            row.append([sum(t[a] * st for a, st in at) for t in tuples[i]])
        emap.append(row)
    return Diagram(d, names, emap)


def _resolve_counts(k: SimplicialComplex, counts) -> dict[str, int]:
    if isinstance(counts, Mapping):
        out = {str(v): c for v, c in counts.items()}
    else:
        counts = list(counts)
        if len(counts) != len(k.vertices):
            raise MissingCount(f"{len(counts)} counts for {len(k.vertices)} vertices")
        out = dict(zip(k.vertices, counts))
    for v in k.vertices:
        if v not in out:
            raise MissingCount(f"no count for vertex {v!r}", witness=v)
        if not isinstance(out[v], int) or out[v] < 1:
            raise NonPositiveCount(f"count for vertex {v!r} is {out[v]!r}", witness=v)
    return out


def vertex_inflation_diagram(k: SimplicialComplex, counts) -> Diagram:
    """Product over the vertices of each face of ``counts[v]`` copies, with projections.

    ``counts`` is a mapping vertex -> int or a sequence in ``k.vertices`` order.
    """
    c = _resolve_counts(k, counts)
    sp = face_poset(k)
    factors = [[(v, c[v]) for v in _face_vertices(sp, x)] for x in sp.elements]
    return _product_diagram(sp, factors)


def _face_vertices(sp: SimplicialPoset, x: str) -> list[str]:
    # atoms of a face poset are labelled "{v}"
    return sorted((a[1:-1] for a in sp.vertices_of(x)), key=natural_key)


def wachs_inflation(k: SimplicialComplex, counts) -> SimplicialComplex:
    """The vertex-inflated complex built directly: copies ``v.j`` spanning a face iff their originals do."""
    c = _resolve_counts(k, counts)
    verts = [f"{v}.{j}" for v in k.vertices for j in range(c[v])]
    facets = []
    for f in k.faces:
        names = k.names(f)
        for choice in product(*(range(c[v]) for v in names)):
            facets.append([f"{v}.{j}" for v, j in zip(names, choice)])
    return SimplicialComplex.from_facets(facets, vertices=verts)


def multiclique_diagram(g: Multigraph) -> tuple[SimplicialComplex, Diagram]:
    """Clique complex of the underlying simple graph and the edge-product diagram on its dual."""
    k = clique_complex(g.vertices, [(u, v) for u, v, _ in g.edges])
    mult = {(u, v): m for u, v, m in g.edges}
    sp = face_poset(k)
    factors = []
    for x in sp.elements:
        vs = _face_vertices(sp, x)
        factors.append([((a, b), mult[a, b]) for a, b in combinations(vs, 2)])
    return k, _product_diagram(sp, factors)


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Mapping[str, str]

    def image(self, face: tuple[int, ...]) -> frozenset[str]:
        return frozenset(self.vertex_map[v] for v in self.source.names(face))

    def degenerate_face(self) -> tuple[str, ...] | None:
        for f in self.source.faces:
            if len(self.image(f)) != len(f):
                return self.source.names(f)
        return None

    def uncovered_face(self) -> tuple[str, ...] | None:
        hit = {self.image(f) for f in self.source.faces}
        for f in self.target.faces:
            if frozenset(self.target.names(f)) not in hit:
                return self.target.names(f)
        return None

    def is_nondegenerate(self) -> bool:
        return self.degenerate_face() is None

    def is_surjective(self) -> bool:
        return self.uncovered_face() is None


def build_simplicial_map(source: SimplicialComplex, target: SimplicialComplex,
                         vertex_map: Mapping) -> SimplicialMap:
    vm = {str(a): str(b) for a, b in vertex_map.items()}
    for v in source.vertices:
        if v not in vm:
            raise UnknownElement(f"vertex {v!r} of the source is not mapped", witness=v)
        if vm[v] not in target.vertices:
            raise UnknownElement(f"vertex {v!r} maps to {vm[v]!r}, not a target vertex", witness=v)
    tfaces = target.face_sets()
    f = SimplicialMap(source, target, vm)
    for face in source.faces:
        if f.image(face) not in tfaces:
            raise InvariantViolation(
                f"image of face {source.label(face)} is not a face of the target", witness=source.names(face)
            )
    return f


def diagram_from_map(f: SimplicialMap) -> Diagram:
    """Preimage diagram on the dual face poset of the target.

    The stalk at a target face ``I`` is the set of source faces mapped onto
    ``I``; a preimage of ``J`` goes to its unique face lying over ``I``.
    """
    bad = f.degenerate_face()
    if bad is not None:
        raise DegenerateMap(f"face {face_label(bad)} collapses under the map", witness=bad)
    miss = f.uncovered_face()
    if miss is not None:
        raise NotSurjective(f"target face {face_label(miss)} has empty preimage", witness=miss)
    src, tgt = f.source, f.target
    sp = face_poset(tgt)
    d = dual(sp.poset)
    pre: list[list[tuple[int, ...]]] = [[] for _ in range(len(d))]
    for face in src.faces:
        img = f.image(face)
        pre[tgt.face_index(img)].append(face)
    src_pos = {fc: k for k, fc in enumerate(src.faces)}
    emap = []
    for i in range(len(d)):
        row = []
        for j in d.upper_cover_idx(i):
            sub = set(tgt.names(tgt.faces[j]))
            where = {src_pos[fc]: k for k, fc in enumerate(pre[j])}
            arr = []
            for face in pre[i]:
                low = tuple(v for v in face if f.vertex_map[src.vertices[v]] in sub)
                arr.append(where[src_pos[low]])
            row.append(arr)
        emap.append(row)
    return Diagram(d, [[src.label(fc) for fc in pre[i]] for i in range(len(d))], emap)
