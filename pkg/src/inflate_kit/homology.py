"""Reduced integer homology, Euler characteristics, wedge certificates, Cohen–Macaulay checks.

Chains live in degrees ``-1..dim``; degree ``-1`` holds the empty face and
``∂_0`` is the augmentation, so every report is reduced homology and the empty
complex has ``betti[-1] == 1``.  Ranks and torsion come from exact integer
elimination (see ``_kernels``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import _kernels, limits
from .errors import InvariantViolation, NotSimplicial, TooLarge
from .poset import Poset, _bits, order_complex
from .simplicial import SimplicialComplex, SimplicialPoset, link

Column = list[tuple[int, int]]


@dataclass
class ChainComplex:
    """``basis[k]`` labels the k-cells; ``boundaries[k]`` is ∂_k as sparse columns into degree k-1."""

    basis: dict[int, list]
    boundaries: dict[int, list[Column]]

    @property
    def top(self) -> int:
        return max(self.basis)

    def size(self) -> int:
        return sum(len(b) for b in self.basis.values())

    def rank_of(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def check(self) -> None:
        """Raise unless ∂_{k-1} ∘ ∂_k = 0 in every degree."""
        for k in range(1, self.top + 1):
            lower = self.boundaries[k - 1]
            for j, col in enumerate(self.boundaries[k]):
                acc: dict[int, int] = {}
                for r, v in col:
                    for rr, vv in lower[r]:
                        acc[rr] = acc.get(rr, 0) + v * vv
                bad = [rr for rr, vv in acc.items() if vv]
                if bad:
                    raise InvariantViolation(
                        f"boundary of a boundary is nonzero at degree {k}, cell {self.basis[k][j]!r}",
                        witness=self.basis[k][j],
                    )


def _guard(nfaces: int) -> None:
    bound = limits.current().max_faces
    if nfaces > bound:
        raise TooLarge(f"chain complex with {nfaces} cells exceeds the bound {bound}")


def chain_complex(k: SimplicialComplex) -> ChainComplex:
    """Simplicial chains with signs from the vertex order of ``k``."""
    _guard(len(k.faces))
    basis: dict[int, list] = {-1: [()]}
    where: dict[tuple[int, ...], int] = {(): 0}
    for f in k.faces:
        b = basis.setdefault(len(f) - 1, [])
        where[f] = len(b)
        b.append(f)
    bd: dict[int, list[Column]] = {}
    for deg in range(0, max(basis) + 1):
        cols = []
        for f in basis[deg]:
            cols.append([(where[f[:i] + f[i + 1:]], -1 if i % 2 else 1) for i in range(len(f))])
        bd[deg] = cols
    return ChainComplex({d: [k.label(f) if f else "{}" for f in b] for d, b in basis.items()}, bd)


def cellular_chain_complex(sp: SimplicialPoset) -> ChainComplex:
    """Cellular chains of a simplicial poset, one cell per element.

    The cell of ``x`` has the vertices below ``x`` in index order; its face
    opposite vertex ``v`` is the unique lower cover missing ``v`` and carries
    sign ``(-1)^(position of v)``.
    """
    p = sp.poset
    _guard(len(p))
    atoms = [sp.atoms_of(i) for i in range(len(p))]
    basis: dict[int, list] = {-1: ["{}"]}
    where: dict[int, int] = {}
    for i in p.topological_order:
        b = basis.setdefault(atoms[i].bit_count() - 1, [])
        where[i] = len(b)
        b.append(p.elements[i])
    bd: dict[int, list[Column]] = {d: [] for d in range(0, max(basis) + 1)}
    for i in p.topological_order:
        a = atoms[i]
        if a.bit_count() == 1:
            bd[0].append([(0, 1)])
            continue
        col = []
        for y in p.lower_cover_idx(i):
            missing = a & ~atoms[y]
            pos = (a & (missing - 1)).bit_count()
            col.append((where[y], -1 if pos % 2 else 1))
        bd[a.bit_count() - 1].append(col)
    return ChainComplex(basis, bd)


@dataclass(frozen=True)
class HomologyReport:
    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def at(self, k: int) -> int:
        return self.betti.get(k, 0)

    @property
    def is_free(self) -> bool:
        return not any(self.torsion.values())

    def reduced_euler(self) -> int:
        return sum((-1) ** k * b for k, b in self.betti.items())

    def nonzero(self) -> dict[int, int]:
        return {k: b for k, b in self.betti.items() if b}


def homology(c: ChainComplex) -> HomologyReport:
    """Reduced Betti numbers and torsion: betti(k) = nullity(∂_k) - rank(∂_{k+1})."""
    _guard(c.size())
    ranks = {-1: 0}
    factors: dict[int, list[int]] = {}
    for k in range(0, c.top + 1):
        r, tors = _kernels.rank_and_torsion(c.rank_of(k - 1), c.boundaries[k])
        ranks[k] = r
        if tors:
            factors[k - 1] = sorted(tors)
    ranks[c.top + 1] = 0
    betti = {k: c.rank_of(k) - ranks[k] - ranks[k + 1] for k in range(-1, c.top + 1)}
    return HomologyReport(betti, {k: tuple(v) for k, v in factors.items()})


def complex_homology(k: SimplicialComplex) -> HomologyReport:
    return homology(chain_complex(k))


def chain_count(p: Poset) -> int:
    """Number of nonempty chains, i.e. faces of the order complex, without listing them."""
    count = [0] * len(p)
    # chains starting at i = 1 + chains starting strictly above i
    for i in reversed(p.topological_order):
        count[i] = 1 + sum(count[j] for j in _bits(p.up_mask(i) & ~(1 << i)))
    return sum(count)


def poset_homology(p: Poset | SimplicialPoset, method: str = "auto") -> HomologyReport:
    """Homology of the realization of ``p``.

    ``method="order"`` uses the order complex; ``"cellular"`` needs a simplicial
    poset and uses one cell per element; ``"auto"`` picks cellular whenever it
    applies.  Both routes give the same report.
    """
    if method not in ("auto", "order", "cellular"):
        raise ValueError(f"unknown homology method {method!r}")
    sp = p if isinstance(p, SimplicialPoset) else None
    base = p.poset if isinstance(p, SimplicialPoset) else p
    if method != "order" and sp is None:
        try:
            sp = SimplicialPoset(base)
        except NotSimplicial:
            if method == "cellular":
                raise
    if method != "order" and sp is not None:
        return homology(cellular_chain_complex(sp))
    _guard(chain_count(base))
    return complex_homology(order_complex(base))


def euler_characteristic(k: SimplicialComplex) -> int:
    """Reduced Euler characteristic from face counts; -1 for the empty complex."""
    return -1 + sum((-1) ** i * f for i, f in enumerate(k.f_vector()))


def poset_reduced_euler(p: Poset) -> int:
    """Reduced Euler characteristic of the order complex via signed chain counts."""
    g = [0] * len(p)
    for i in p.topological_order:
        g[i] = 1 - sum(g[j] for j in _bits(p.down_mask(i) & ~(1 << i)))
    return sum(g) - 1


def cell_reduced_euler(sp: SimplicialPoset) -> int:
    """Reduced Euler characteristic of a simplicial poset from its cell counts."""
    return sum(1 if r % 2 else -1 for r in sp.rank.values()) - 1


@dataclass(frozen=True)
class WedgeCertificate:
    dimension: int
    count: int
    passed: bool
    failure_reason: str | None = None


def wedge_certificate(r: HomologyReport, d: int) -> WedgeCertificate:
    """Free homology concentrated in degree ``d``; ``count`` is the number of spheres.

    ``d = -1`` is allowed: the empty space is the wedge of one (-1)-sphere.
    Acyclic input passes with count 0.
    """
    count = r.at(d)
    for k in sorted(r.torsion):
        if r.torsion[k]:
            return WedgeCertificate(d, count, False, f"torsion {list(r.torsion[k])} in degree {k}")
    for k in sorted(r.betti):
        if k != d and r.betti[k]:
            return WedgeCertificate(d, count, False, f"betti {r.betti[k]} in degree {k}, expected 0")
    return WedgeCertificate(d, count, True)


@dataclass(frozen=True)
class CMFailure:
    element: str | None  # None: the whole poset
    degree: int
    reason: str


@dataclass(frozen=True)
class CMVerdict:
    cohen_macaulay: bool
    dimension: int
    links_checked: int
    failure: CMFailure | None = None

    def __bool__(self) -> bool:
        return self.cohen_macaulay


def cm_check(sp: SimplicialPoset | Poset) -> CMVerdict:
    """Homological Cohen–Macaulay test: pure, and ``|P|`` and every link are top-degree wedges."""
    if not isinstance(sp, SimplicialPoset):
        sp = SimplicialPoset(sp)
    p = sp.poset
    dim = sp.dim if len(p) else -1
    tops = {sp.rank[x] - 1 for x in p.maximal()}
    if len(tops) > 1:
        low = min(p.maximal(), key=lambda x: (sp.rank[x], p.index(x)))
        return CMVerdict(False, dim, 0, CMFailure(low, dim, f"not pure: maximal simplex of dimension {sp.rank[low] - 1}"))
    cert = wedge_certificate(poset_homology(sp), dim)
    if not cert.passed:
        return CMVerdict(False, dim, 0, CMFailure(None, dim, cert.failure_reason or ""))
    checked = 0
    for i in p.topological_order:
        x = p.elements[i]
        deg = dim - 1 - sp.dim_of(x)
        cert = wedge_certificate(poset_homology(link(sp, x)), deg)
        checked += 1
        if not cert.passed:
            return CMVerdict(False, dim, checked, CMFailure(x, deg, f"link: {cert.failure_reason}"))
    return CMVerdict(True, dim, checked)


def betti_vector(r: HomologyReport, lo: int = -1, hi: int | None = None) -> list[int]:
    hi = max(r.betti) if hi is None else hi
    return [r.at(k) for k in range(lo, hi + 1)]


def sum_reports(parts: Sequence[HomologyReport]) -> HomologyReport:
    """Homology of a disjoint union of nonempty spaces: degree 0 gains one per extra component."""
    betti: dict[int, int] = {}
    torsion: dict[int, list[int]] = {}
    for r in parts:
        for k, b in r.betti.items():
            if k >= 0:
                betti[k] = betti.get(k, 0) + b
        for k, t in r.torsion.items():
            torsion.setdefault(k, []).extend(t)
    betti[-1] = 0 if parts else 1
    if parts:
        betti[0] = betti.get(0, 0) + len(parts) - 1
    return HomologyReport(dict(sorted(betti.items())), {k: tuple(sorted(v)) for k, v in sorted(torsion.items())})
