"""Set-valued diagrams on finite posets and the sheaves they define.

A diagram assigns a finite set (stalk) to every element and a map to every
cover ``s1 < s2``.  Its sheaf on the Alexandrov topology sends an open set to
the compatible families of stalk elements over it, so every operation here
works directly with diagrams and compatible families.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import _kernels
from .errors import (
    BadPartition,
    EmptyOpenSet,
    InvariantViolation,
    MinimalityViolated,
    MissingStalk,
    NotFunctorial,
    NotOpen,
    NotSubset,
    PartialMap,
    UnknownElement,
)
from .poset import OpenSet, Poset, PosetMap, _bits, is_open, open_masks


class Diagram:
    """A functor from a finite poset to finite sets, validated on construction.

    Stalk elements are strings scoped per base element.  Canonical maps
    ``D(s <= t)`` for all comparable pairs are composed once and memoized;
    construction fails with :class:`NotFunctorial` if two cover paths disagree.
    """

    def __init__(self, base: Poset, stalks: Sequence[Sequence[str]], emap: Sequence[Sequence[Sequence[int]]]):
        self.base = base
        self._stalks = [tuple(s) for s in stalks]
        self._sidx = [{x: k for k, x in enumerate(s)} for s in self._stalks]
        self._emap = [[list(m) for m in row] for row in emap]
        self._canon = self._compose_all()
        self._kargs = None

    def _compose_all(self) -> dict[tuple[int, int], list[int]]:
        b = self.base
        canon: dict[tuple[int, int], list[int]] = {}
        for s in range(len(b)):
            canon[s, s] = list(range(len(self._stalks[s])))
            path = {s: [s]}
            above = b.up_mask(s)
            for t in b.topological_order:
                if t == s or not (above >> t) & 1:
                    continue
                first_u = None
                for u in b.lower_cover_idx(t):
                    if not (above >> u) & 1:
                        continue
                    em = self._emap[u][b.upper_cover_idx(u).index(t)]
                    comp = [em[v] for v in canon[s, u]]
                    if first_u is None:
                        first_u = u
                        canon[s, t] = comp
                        path[t] = path[u] + [t]
                    elif comp != canon[s, t]:
                        e = b.elements
                        witness = {
                            "pair": (e[s], e[t]),
                            "paths": ([e[i] for i in path[first_u] + [t]], [e[i] for i in path[u] + [t]]),
                            "composites": (self._render_map(s, t, canon[s, t]), self._render_map(s, t, comp)),
                        }
                        raise NotFunctorial(
                            f"composites from {e[s]!r} to {e[t]!r} disagree along different cover paths",
                            witness=witness,
                        )
        return canon

    def _render_map(self, s: int, t: int, arr: Sequence[int]) -> dict[str, str]:
        return {self._stalks[s][k]: self._stalks[t][v] for k, v in enumerate(arr)}

    # -- accessors ------------------------------------------------------
    def stalk(self, s: str) -> tuple[str, ...]:
        return self._stalks[self.base.index(s)]

    def stalk_sizes(self) -> dict[str, int]:
        return {e: len(self._stalks[i]) for i, e in enumerate(self.base.elements)}

    def edge_map(self, s: str, t: str) -> dict[str, str]:
        i, j = self.base.index(s), self.base.index(t)
        if j not in self.base.upper_cover_idx(i):
            raise InvariantViolation(f"({s}, {t}) is not a cover")
        return self._render_map(i, j, self._emap[i][self.base.upper_cover_idx(i).index(j)])

    def canonical_map(self, s: str, t: str) -> dict[str, str]:
        """``D(s <= t)`` as a dict on stalk elements."""
        i, j = self.base.index(s), self.base.index(t)
        if (i, j) not in self._canon:
            raise InvariantViolation(f"{s!r} is not below {t!r}")
        return self._render_map(i, j, self._canon[i, j])

    def apply(self, s: str, t: str, x: str) -> str:
        i, j = self.base.index(s), self.base.index(t)
        return self._stalks[j][self._canon[i, j][self._sidx[i][x]]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        if self.base != other.base:
            return False
        for s in self.base:
            if set(self.stalk(s)) != set(other.stalk(s)):
                return False
        return all(self.edge_map(a, b) == other.edge_map(a, b) for a, b in self.base.covers)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Diagram(base={self.base!r}, stalk sizes={list(self.stalk_sizes().values())})"

    # kernel calling convention, built lazily
    def _kernel_args(self):
        if self._kargs is None:
            b = self.base
            n = len(b)
            self._kargs = (
                n,
                list(reversed(b.topological_order)),
                [list(b.upper_cover_idx(i)) for i in range(n)],
                self._emap,
                [len(s) for s in self._stalks],
                [b.up_mask(i) for i in range(n)],
                [b.down_mask(i) for i in range(n)],
                self._canon,
            )
        return self._kargs


def build_diagram(base: Poset, stalks: Mapping[str, Iterable], edge_maps: Mapping[tuple, Mapping]) -> Diagram:
    """Validate stalks and cover maps, then check functoriality on every pair of cover paths."""
    stalks = {str(k): [str(x) for x in v] for k, v in stalks.items()}
    for k in stalks:
        base.index(k)
    missing = [e for e in base if e not in stalks]
    if missing:
        raise MissingStalk(f"no stalk given for {missing}", witness=missing)
    for e, st in stalks.items():
        if len(set(st)) != len(st):
            raise InvariantViolation(f"stalk of {e!r} repeats an element", witness=e)
    maps = {(str(a), str(b)): {str(x): str(y) for x, y in m.items()} for (a, b), m in edge_maps.items()}
    for a, b in maps:
        if (a, b) not in base.covers:
            raise InvariantViolation(f"map given for ({a}, {b}), which is not a cover of the base", witness=(a, b))
    emap = []
    for i, s in enumerate(base.elements):
        row = []
        for t in base.upper_covers(s):
            if (s, t) not in maps:
                raise PartialMap(f"no map given for cover ({s}, {t})", witness=(s, t))
            m = maps[s, t]
            tgt = {x: k for k, x in enumerate(stalks[t])}
            arr = []
            for x in stalks[s]:
                if x not in m:
                    raise PartialMap(f"map on cover ({s}, {t}) is undefined at {x!r}", witness=(s, t, x))
                if m[x] not in tgt:
                    raise PartialMap(
                        f"map on cover ({s}, {t}) sends {x!r} outside the stalk of {t!r}", witness=(s, t, x)
                    )
                arr.append(tgt[m[x]])
            extra = set(m) - set(stalks[s])
            if extra:
                raise PartialMap(f"map on cover ({s}, {t}) mentions unknown {sorted(extra)}", witness=(s, t))
            row.append(arr)
        emap.append(row)
    return Diagram(base, [stalks[e] for e in base.elements], emap)


def trivial_diagram(base: Poset, point: str = "*") -> Diagram:
    n = len(base)
    return Diagram(base, [(point,)] * n, [[[0] for _ in base.upper_cover_idx(i)] for i in range(n)])


# ---------------------------------------------------------------------------
# sections

@dataclass(frozen=True, eq=False)
class Section:
    """A compatible family: one stalk element for every point of an open set."""

    domain: frozenset[str]
    choice: Mapping[str, str]

    def __getitem__(self, s: str) -> str:
        return self.choice[s]

    def _key(self):
        return frozenset(self.choice.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Section) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def _check_open(d: Diagram, u: Iterable[str]) -> int:
    u = frozenset(u)
    if not u:
        raise EmptyOpenSet("sections are only defined on nonempty open sets")
    mask = d.base.mask_of(u)
    if not is_open(d.base, u):
        raise NotOpen(f"{sorted(u)} is not upward closed", witness=sorted(u))
    return mask


def _section_tuples(d: Diagram, mask: int, limit: int = -1):
    n, order, ucov, emap, sizes, *_ = d._kernel_args()
    vorder = [e for e in order if (mask >> e) & 1]
    return vorder, _kernels.enumerate_sections(vorder, ucov, emap, sizes, limit)


def _to_section(d: Diagram, vorder: list[int], tup: Sequence[int]) -> Section:
    el = d.base.elements
    choice = {el[e]: d._stalks[e][x] for e, x in zip(vorder, tup)}
    return Section(frozenset(choice), choice)


def sections(d: Diagram, u: Iterable[str]) -> list[Section]:
    """All sections over the nonempty open set ``u``, in a fixed order."""
    mask = _check_open(d, u)
    vorder, tuples = _section_tuples(d, mask)
    return [_to_section(d, vorder, t) for t in tuples]


def restrict_section(d: Diagram, s: Section, v: Iterable[str]) -> Section:
    v = frozenset(v)
    if not v <= s.domain:
        raise NotSubset(f"{sorted(v - s.domain)} lie outside the section's domain")
    _check_open(d, v)
    choice = {x: s.choice[x] for x in v}
    return Section(v, choice)


def uninhabited_open(d: Diagram, limit: int | None = None) -> OpenSet | None:
    """A nonempty open set without sections, or ``None``.

    Sections restrict, so one section over the whole base settles every open;
    the scan over open sets runs only to find the first empty one.
    """
    full = (1 << len(d.base)) - 1
    if full and _section_tuples(d, full, limit=1)[1]:
        return None
    for m in open_masks(d.base, limit):
        if m and not _section_tuples(d, m, limit=1)[1]:
            return d.base.names(m)
    return None


def is_inhabited(d: Diagram, limit: int | None = None) -> bool:
    return uninhabited_open(d, limit) is None


@dataclass(frozen=True)
class FlabbinessWitness:
    """Nested opens ``v`` inside ``u`` and a section on ``v`` that does not extend to ``u``."""

    u: OpenSet
    v: OpenSet
    section: Section


@dataclass(frozen=True)
class FlabbinessVerdict:
    flabby: bool
    witness: FlabbinessWitness | None = None

    def __bool__(self) -> bool:
        return self.flabby


def is_flabby(d: Diagram, limit: int | None = None) -> FlabbinessVerdict:
    """Decide flabbiness with the single-step extension criterion.

    It is enough to check, for every nonempty open ``V`` and every element ``s``
    outside it, that sections on ``V`` extend to ``V`` plus the upper cone of
    ``s``: any nested pair of opens is joined by a chain of such steps.  Sections
    live on nonempty opens only, so flabby does not imply inhabited.
    """
    opens = [m for m in open_masks(d.base, limit) if m]
    args = d._kernel_args()
    b = d.base
    # one-element extensions decide the verdict quickly; the full scan then
    # finds the first failing (V, s) for the witness
    if _kernels.flabby_scan(*args, opens, True) is None:
        return FlabbinessVerdict(True)
    n, order, ucov, emap, sizes, up, down, canon = args
    V, s, tup = _kernels.flabby_scan(*args, opens)
    vorder = [e for e in order if (V >> e) & 1]
    return FlabbinessVerdict(
        False, FlabbinessWitness(b.names(V | up[s]), b.names(V), _to_section(d, vorder, tup))
    )


def is_trivial(d: Diagram) -> bool:
    return all(len(s) == 1 for s in d._stalks)


# ---------------------------------------------------------------------------
# functors

def _restrict_to_subset(d: Diagram, subset: Iterable[str]) -> Diagram:
    sub = d.base.induced(subset)
    idx = [d.base.index(e) for e in sub.elements]
    emap = [
        [d._canon[idx[i], idx[j]] for j in sub.upper_cover_idx(i)]
        for i in range(len(sub))
    ]
    return Diagram(sub, [d._stalks[i] for i in idx], emap)


def restrict_to_open(d: Diagram, a: Iterable[str]) -> Diagram:
    """The restricted sheaf on an open subset, as a diagram on the induced subposet."""
    a = frozenset(a)
    _check_open(d, a)
    return _restrict_to_subset(d, a)


def inverse_image(f: PosetMap, g: Diagram) -> Diagram:
    """Pull back ``g`` along a monotone map: stalks ``g(f(s))`` and maps ``g(f(s1) <= f(s2))``."""
    if g.base != f.target:
        raise InvariantViolation("diagram is not based on the map's target")
    if not f.is_monotonic():
        raise InvariantViolation("map is not monotonic")
    src, tgt = f.source, g.base
    img = [tgt.index(f(s)) for s in src.elements]
    emap = [[g._canon[img[i], img[j]] for j in src.upper_cover_idx(i)] for i in range(len(src))]
    return Diagram(src, [g._stalks[k] for k in img], emap)


def render_section(s: Section, order: Sequence[str]) -> str:
    return "{" + ",".join(f"{e}:{s.choice[e]}" for e in order if e in s.choice) + "}"


class DirectImage:
    """Values ``U -> sections(d, f^-1(U))`` over the opens of the target.

    When ``f^-1(U)`` is empty the value is the one-element set holding the
    empty family (the limit over an empty index).
    """

    def __init__(self, f: PosetMap, d: Diagram, limit: int | None = None):
        if d.base != f.source:
            raise InvariantViolation("diagram is not based on the map's source")
        self.map = f
        self.diagram = d
        self.values: dict[OpenSet, list[Section]] = {}
        for m in open_masks(f.target, limit):
            if not m:
                continue
            u = f.target.names(m)
            pre = f.preimage(u)
            self.values[u] = sections(d, pre) if pre else [Section(frozenset(), {})]

    def restriction(self, u: Iterable[str], v: Iterable[str]) -> dict[Section, Section]:
        u, v = frozenset(u), frozenset(v)
        if not v <= u:
            raise NotSubset("restriction needs v inside u")
        pv = self.map.preimage(v)
        return {s: Section(pv, {x: s.choice[x] for x in pv}) for s in self.values[u]}

    def as_diagram(self) -> Diagram:
        """Collapse onto the target: stalk at ``t`` is the value on the upper cone of ``t``."""
        tgt = self.map.target
        order = self.diagram.base.elements
        names, cones = [], []
        for i, t in enumerate(tgt.elements):
            cone = tgt.names(tgt.up_mask(i))
            cones.append(cone)
            names.append([render_section(s, order) for s in self.values[cone]])
        emap = []
        for i in range(len(tgt)):
            row = []
            lookup_src = self.values[cones[i]]
            for j in tgt.upper_cover_idx(i):
                res = self.restriction(cones[i], cones[j])
                pos = {render_section(s, order): k for k, s in enumerate(self.values[cones[j]])}
                row.append([pos[render_section(res[s], order)] for s in lookup_src])
            emap.append(row)
        return Diagram(tgt, names, emap)


def direct_image(f: PosetMap, d: Diagram, limit: int | None = None) -> DirectImage:
    return DirectImage(f, d, limit)


# ---------------------------------------------------------------------------
# splitting at a minimal multi-valued element

def split_diagram(d: Diagram, i0: str, partition: tuple[Iterable[str], Iterable[str]]):
    """Split ``d`` along ``stalk(i0) = A1 + A2``.

    ``d`` lives on a dual face poset, so "J contains i0" reads ``J <= i0`` in
    the base.  Below ``i0`` the stalks are cut down to preimages of ``A1`` and
    ``A2``; elsewhere they are kept.  The third diagram is the restriction to
    the open set of elements not below ``i0``.
    """
    b = d.base
    k0 = b.index(i0)
    a1, a2 = (frozenset(str(x) for x in part) for part in partition)
    st0 = set(d._stalks[k0])
    if not a1 or not a2 or a1 & a2 or (a1 | a2) != st0:
        raise BadPartition(f"({sorted(a1)}, {sorted(a2)}) is not a partition of the stalk of {i0!r} into nonempty parts")
    for j in _bits(b.up_mask(k0) & ~(1 << k0)):
        if len(d._stalks[j]) != 1:
            raise MinimalityViolated(
                f"{b.elements[j]!r}, a proper face of {i0!r}, has {len(d._stalks[j])} stalk elements",
                witness=b.elements[j],
            )
    below = b.down_mask(k0)

    def part(keep: frozenset[str]) -> Diagram:
        stalks, remap = [], []
        for j in range(len(b)):
            st = d._stalks[j]
            if (below >> j) & 1:
                cm = d._canon[j, k0]
                kept = [x for x in range(len(st)) if d._stalks[k0][cm[x]] in keep]
            else:
                kept = list(range(len(st)))
            stalks.append([st[x] for x in kept])
            remap.append({x: k for k, x in enumerate(kept)})
        emap = []
        for j in range(len(b)):
            row = []
            kept = list(remap[j])
            for c, arr in zip(b.upper_cover_idx(j), d._emap[j]):
                row.append([remap[c][arr[x]] for x in kept])
            emap.append(row)
        return Diagram(b, stalks, emap)

    d12 = _restrict_to_subset(d, b.names(((1 << len(b)) - 1) & ~below))
    return part(a1), part(a2), d12
