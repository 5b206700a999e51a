"""Finite posets and their Alexandrov topology.

Elements are opaque strings.  Internally every poset keeps the elements in a
fixed order together with bitmasks of upper and lower cones, so order queries
are a single ``&``.  Open sets of the Alexandrov topology are the upward-closed
subsets; they are handed around as ``frozenset`` of element names.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from . import limits
from .errors import CycleDetected, TooLarge, UnknownElement

log = logging.getLogger(__name__)

OpenSet = frozenset


def natural_key(label: str):
    """Sort key placing numeric labels in numeric order before other strings."""
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """A validated finite poset.

    Build instances through :func:`build_poset`; the constructor trusts its
    input apart from cycle detection.  ``reduced_input`` is set when the given
    cover list was not transitively reduced and redundant pairs were dropped.
    """

    __slots__ = ("elements", "_covers", "reduced_input", "_index", "_ucov", "_lcov", "_up", "_down", "_topo", "_opens")

    def __init__(self, elements: Sequence[str], cover_idx: Iterable[tuple[int, int]], reduced: bool = False):
        self.elements: tuple[str, ...] = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        ucov: list[set[int]] = [set() for _ in range(n)]
        for a, b in cover_idx:
            ucov[a].add(b)
        self._ucov = [sorted(c) for c in ucov]
        self._topo = _topological_order(self.elements, self._ucov)
        up = [0] * n
        for i in reversed(self._topo):
            m = 1 << i
            for c in self._ucov[i]:
                m |= up[c]
            up[i] = m
        # drop covers implied by a longer path
        self.reduced_input = False
        for i in range(0 if reduced else n):
            keep = [c for c in self._ucov[i] if not any(o != c and (up[o] >> c) & 1 for o in self._ucov[i])]
            if len(keep) != len(self._ucov[i]):
                self.reduced_input = True
                self._ucov[i] = keep
        lcov: list[list[int]] = [[] for _ in range(n)]
        for i in range(n):
            for c in self._ucov[i]:
                lcov[c].append(i)
        self._lcov = lcov
        down = [0] * n
        for i in self._topo:
            m = 1 << i
            for c in lcov[i]:
                m |= down[c]
            down[i] = m
        self._up, self._down = up, down
        self._opens = None
        self._covers: frozenset[tuple[str, str]] | None = None

    @property
    def covers(self) -> frozenset[tuple[str, str]]:
        """Cover pairs ``(a, b)`` with ``a`` below ``b``, by name."""
        if self._covers is None:
            el = self.elements
            self._covers = frozenset((el[a], el[b]) for a in range(len(el)) for b in self._ucov[a])
        return self._covers

    # -- basic protocol -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.covers == other.covers

    def __hash__(self) -> int:
        return hash((frozenset(self.elements), self.covers))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    # -- index level ----------------------------------------------------
    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}", witness=x) from None

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def upper_cover_idx(self, i: int) -> list[int]:
        return self._ucov[i]

    def lower_cover_idx(self, i: int) -> list[int]:
        return self._lcov[i]

    @property
    def topological_order(self) -> list[int]:
        """Indices listed so that every element precedes everything above it."""
        return self._topo

    def mask_of(self, subset: Iterable[str]) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.index(x)
        return m

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in _bits(mask))

    def sorted_names(self, mask: int) -> list[str]:
        return [self.elements[i] for i in _bits(mask)]

    # -- order queries --------------------------------------------------
    def leq(self, a: str, b: str) -> bool:
        return bool((self._up[self.index(a)] >> self.index(b)) & 1)

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def upper_covers(self, a: str) -> list[str]:
        return [self.elements[c] for c in self._ucov[self.index(a)]]

    def lower_covers(self, a: str) -> list[str]:
        return [self.elements[c] for c in self._lcov[self.index(a)]]

    def minimal(self) -> list[str]:
        return [self.elements[i] for i in range(len(self)) if not self._lcov[i]]

    def maximal(self) -> list[str]:
        return [self.elements[i] for i in range(len(self)) if not self._ucov[i]]

    def induced(self, subset: Iterable[str]) -> "Poset":
        """Subposet on ``subset`` with the inherited order."""
        subset = set(subset)
        keep = [i for i in range(len(self)) if self.elements[i] in subset]
        unknown = subset - set(self.elements)
        if unknown:
            raise UnknownElement(f"unknown elements {sorted(unknown)}", witness=sorted(unknown))
        pos = {i: k for k, i in enumerate(keep)}
        kmask = sum(1 << i for i in keep)
        pairs = []
        for i in keep:
            above = (self._up[i] & kmask) & ~(1 << i)
            for j in _bits(above):
                pairs.append((pos[i], pos[j]))
        return Poset([self.elements[i] for i in keep], pairs)

    def components(self) -> list[frozenset[str]]:
        """Connected components of the comparability graph, in element order."""
        seen = 0
        out = []
        for i in range(len(self)):
            if (seen >> i) & 1:
                continue
            comp, frontier = 0, 1 << i
            while frontier:
                comp |= frontier
                nxt = 0
                for j in _bits(frontier):
                    nxt |= self._up[j] | self._down[j]
                frontier = nxt & ~comp
            seen |= comp
            out.append(self.names(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def _topological_order(elements: Sequence[str], ucov: list[list[int]]) -> list[int]:
    n = len(elements)
    indeg = [0] * n
    for i in range(n):
        for c in ucov[i]:
            indeg[c] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        i = ready.pop(0)
        order.append(i)
        for c in ucov[i]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if len(order) < n:
        cycle = _find_cycle(elements, ucov, set(range(n)) - set(order))
        raise CycleDetected(f"cover relation has a directed cycle: {' < '.join(cycle)}", witness=cycle)
    return order


def _find_cycle(elements, ucov, remaining: set[int]) -> list[str]:
    start = min(remaining)
    path, pos, cur = [], {}, start
    while cur not in pos:
        pos[cur] = len(path)
        path.append(cur)
        cur = next(c for c in ucov[cur] if c in remaining)
    cyc = path[pos[cur]:] + [cur]
    return [elements[i] for i in cyc]


def build_poset(elements: Iterable, covers: Iterable[Sequence]) -> Poset:
    """Validate and build a poset from an element list and cover pairs ``(a, b)``, a < b.

    Non-reduced cover lists are reduced; ``Poset.reduced_input`` records it.
    """
    elements = [str(e) for e in elements]
    if len(set(elements)) != len(elements):
        dup = sorted({e for e in elements if elements.count(e) > 1})
        raise UnknownElement(f"duplicate element identifiers {dup}", witness=dup)
    index = {e: i for i, e in enumerate(elements)}
    pairs = []
    for pair in covers:
        a, b = (str(x) for x in pair)
        for x in (a, b):
            if x not in index:
                raise UnknownElement(f"cover ({a}, {b}) mentions unknown element {x!r}", witness=(a, b))
        if a == b:
            raise CycleDetected(f"cover ({a}, {b}) is a loop", witness=[a, a])
        pairs.append((index[a], index[b]))
    p = Poset(elements, pairs)
    if p.reduced_input:
        log.warning("cover relation was not transitively reduced; redundant pairs dropped")
    return p


def dual(p: Poset) -> Poset:
    q = Poset.__new__(Poset)
    q.elements, q._index, q.reduced_input = p.elements, p._index, False
    q._ucov, q._lcov = p._lcov, p._ucov
    q._up, q._down = p._down, p._up
    q._topo = p._topo[::-1]
    q._opens = None
    q._covers = None
    return q


def up_set(p: Poset, s: str) -> OpenSet:
    """The upper cone of ``s``, i.e. its minimal open neighbourhood."""
    return p.names(p.up_mask(p.index(s)))


def down_set(p: Poset, s: str) -> frozenset[str]:
    return p.names(p.down_mask(p.index(s)))


def is_open(p: Poset, subset: Iterable[str]) -> bool:
    m = p.mask_of(subset)
    return all(p.up_mask(i) & ~m == 0 for i in _bits(m))


# shared between equal posets built separately, e.g. repeated face posets
_OPEN_CACHE: dict[tuple, list[int]] = {}


def open_masks(p: Poset, limit: int | None = None) -> list[int]:
    """All up-closed subsets as bitmasks, sorted by size then by their sorted index lists."""
    bound = limits.current().max_open_elements if limit is None else limit
    if len(p) > bound:
        raise TooLarge(f"open-set enumeration over {len(p)} elements exceeds the bound {bound}")
    if p._opens is None:
        p._opens = _OPEN_CACHE.get((p.elements, tuple(map(tuple, p._ucov))))
    if p._opens is None:
        # add elements maximal-first: an element may join once all its upper covers have
        out = [0]
        for i in reversed(p.topological_order):
            need = p.up_mask(i) & ~(1 << i)
            bit = 1 << i
            out += [m | bit for m in out if m & need == need]
        n = len(p)
        flip = str.maketrans("01", "10")
        # equal sizes: lexicographic on index lists = reversed-bit string with bits inverted
        out.sort(key=lambda m: (m.bit_count(), format(m, f"0{n}b")[::-1].translate(flip)))
        p._opens = out
        if len(_OPEN_CACHE) > 64:
            _OPEN_CACHE.clear()
        _OPEN_CACHE[p.elements, tuple(map(tuple, p._ucov))] = out
    return list(p._opens)


def enumerate_opens(p: Poset, limit: int | None = None) -> list[OpenSet]:
    """All open sets of the Alexandrov topology, including the empty set."""
    return [p.names(m) for m in open_masks(p, limit)]


def chains(p: Poset) -> list[tuple[int, ...]]:
    """Nonempty chains as increasing index tuples."""
    out: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...]) -> None:
        out.append(chain)
        for j in _bits(p.up_mask(chain[-1]) & ~(1 << chain[-1])):
            extend(chain + (j,))

    for i in range(len(p)):
        extend((i,))
    return out


def order_complex(p: Poset):
    """Simplicial complex of nonempty chains.  Vertices follow a linear extension."""
    from .simplicial import SimplicialComplex

    rank = {i: k for k, i in enumerate(p.topological_order)}
    vertices = [p.elements[i] for i in p.topological_order]
    faces = [tuple(sorted(rank[i] for i in c)) for c in chains(p)]
    return SimplicialComplex(vertices, faces)


@dataclass(frozen=True)
class PosetMap:
    source: Poset
    target: Poset
    mapping: Mapping[str, str]

    def __post_init__(self):
        for s in self.source:
            if s not in self.mapping:
                raise UnknownElement(f"map undefined on {s!r}", witness=s)
            self.target.index(self.mapping[s])

    def __call__(self, s: str) -> str:
        return self.mapping[s]

    def is_monotonic(self) -> bool:
        return all(self.target.leq(self(a), self(b)) for a, b in self.source.covers)

    def is_injective(self) -> bool:
        return len(set(self.mapping[s] for s in self.source)) == len(self.source)

    def is_exact_embedding(self) -> bool:
        """Injective and order-reflecting: f(a) <= f(b) implies a <= b."""
        if not self.is_injective():
            return False
        src, tgt = self.source, self.target
        return all(
            src.leq(a, b) == tgt.leq(self(a), self(b)) for a in src for b in src
        )

    def is_isomorphism(self) -> bool:
        return len(self.source) == len(self.target) and self.is_exact_embedding() and self.is_monotonic()

    def preimage(self, subset: Iterable[str]) -> frozenset[str]:
        sub = set(subset)
        return frozenset(s for s in self.source if self(s) in sub)


def identity_map(p: Poset) -> PosetMap:
    return PosetMap(p, p, {s: s for s in p})


def _hasse_digraph(p: Poset):
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(p.elements)
    g.add_edges_from(p.covers)
    return g


def find_isomorphism(p: Poset, q: Poset) -> dict[str, str] | None:
    """An order isomorphism ``p -> q`` if one exists.

    Posets are isomorphic iff their Hasse diagrams are isomorphic as digraphs.
    """
    if len(p) != len(q) or len(p.covers) != len(q.covers):
        return None
    from networkx.algorithms.isomorphism import DiGraphMatcher

    matcher = DiGraphMatcher(_hasse_digraph(p), _hasse_digraph(q))
    for iso in matcher.isomorphisms_iter():
        return dict(iso)
    return None


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None
