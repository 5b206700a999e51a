"""Completion of a poset along a diagram, and inflation.

The completion of ``S`` along ``D`` has one element per pair ``(s, x)`` with
``x`` in the stalk at ``s``, ordered by ``(s1, x1) <= (s2, x2)`` iff ``s1 <= s2``
and ``D(s1 <= s2)(x1) = x2``.  Inflating ``P`` along a diagram on ``P*`` is
completion of the dual followed by reversing the order again.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BaseMismatch, InvariantViolation
from .poset import Poset, PosetMap, _bits, dual, open_masks
from .sheaf import Diagram, _section_tuples


def pair_name(s: str, x: str) -> str:
    return f"({s},{x})"


@dataclass(frozen=True)
class CompletedPoset:
    base: Poset
    diagram: Diagram
    result: Poset
    projection: PosetMap
    pairs: dict[str, tuple[str, str]] = field(repr=False)

    def fiber(self, s: str) -> list[str]:
        return [e for e in self.result.elements if self.pairs[e][0] == s]


def completion(s: Poset, d: Diagram) -> CompletedPoset:
    if d.base != s:
        raise BaseMismatch("diagram is not based on this poset")
    names, pairs, first = [], {}, []
    for i, e in enumerate(d.base.elements):
        first.append(len(names))
        for x in d._stalks[i]:
            nm = pair_name(e, x)
            if nm in pairs:
                raise InvariantViolation(f"element name {nm!r} is ambiguous; rename stalk elements", witness=nm)
            pairs[nm] = (e, x)
            names.append(nm)
    b = d.base
    covers = []
    for i in range(len(b)):
        for k, j in enumerate(b.upper_cover_idx(i)):
            arr = d._emap[i][k]
            for x in range(len(d._stalks[i])):
                covers.append((first[i] + x, first[j] + arr[x]))
    # lifted covers are covers: anything strictly between would project strictly between
    result = Poset(names, covers, reduced=True)
    proj = PosetMap(result, s, {nm: pairs[nm][0] for nm in names})
    return CompletedPoset(s, d, result, proj, pairs)


def inflate(p: Poset, d: Diagram) -> CompletedPoset:
    """Inflation of ``p`` along a diagram on ``dual(p)``; ``projection`` lands in ``p``."""
    pd = dual(p)
    if d.base != pd:
        raise BaseMismatch("inflation needs a diagram on the dual poset")
    c = completion(d.base, d)
    result = dual(c.result)
    return CompletedPoset(p, d, result, PosetMap(result, p, dict(c.projection.mapping)), c.pairs)


def complexity(d: Diagram) -> int:
    """Total number of stalk elements, which is the size of the completion."""
    return sum(len(s) for s in d._stalks)


def etale_base_masks(s: Poset, d: Diagram, c: CompletedPoset | None = None, limit: int | None = None) -> list[int]:
    """The étale base sets ``U_v`` as bitmasks over ``completion(s, d).result``."""
    c = c or completion(s, d)
    res = c.result
    idx = {c.pairs[nm]: k for k, nm in enumerate(res.elements)}
    el = s.elements
    out = []
    for m in open_masks(s, limit):
        if not m:
            continue
        vorder, tuples = _section_tuples(d, m)
        for tup in tuples:
            mask = 0
            for e, x in zip(vorder, tup):
                mask |= 1 << idx[el[e], d._stalks[e][x]]
            out.append(mask)
    return out


def etale_check(s: Poset, d: Diagram, limit: int | None = None) -> bool:
    """Does the étale topology coincide with the Alexandrov topology of the completion?

    Both are finite topologies on the completion's elements, so they agree iff
    every point has the same minimal open neighbourhood: the intersection of
    the base sets containing it on one side, its upper cone on the other.
    """
    c = completion(s, d)
    res = c.result
    full = (1 << len(res)) - 1
    mins = [full] * len(res)
    seen = [False] * len(res)
    for mask in etale_base_masks(s, d, c, limit):
        for k in _bits(mask):
            mins[k] &= mask
            seen[k] = True
    return all(seen[k] and mins[k] == res.up_mask(k) for k in range(len(res)))
