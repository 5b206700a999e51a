"""Sphere counts of inflations over a simplex and the wedge-decomposition check.

Over a simplex of dimension n-1 an inhabited flabby diagram inflates to a
wedge of (n-1)-spheres; ``n(D)`` is their number.  Over a connected simplicial
poset ``P`` the inflation then has reduced Betti numbers

    β̃_k(P_D) = β̃_k(P) + Σ_I n(D_I) · β̃_{k - dim I - 1}(link I)

where ``D_I`` is ``D`` restricted to the simplices of ``I``.  Facet links are
empty and contribute in degree ``-1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BaseMismatch,
    CertificateFailed,
    HypothesisViolated,
    NotConnected,
    NotSimplicial,
)
from .homology import (
    CMVerdict,
    HomologyReport,
    cell_reduced_euler,
    cm_check,
    poset_homology,
    poset_reduced_euler,
    sum_reports,
    wedge_certificate,
)
from .inflation import inflate
from .poset import Poset, down_set, dual
from .sheaf import Diagram, is_flabby, restrict_to_open, uninhabited_open
from .simplicial import SimplicialPoset, link


def _simplex_dimension(base: Poset) -> int:
    """Dimension of the simplex whose dual face poset is ``base``; raises if it is not one."""
    try:
        sp = SimplicialPoset(dual(base))
    except NotSimplicial as exc:
        raise BaseMismatch("diagram base is not the dual of a simplicial poset", witness=exc.witness) from exc
    tops = sp.poset.maximal()
    if len(tops) != 1 or len(sp) != 2 ** sp.rank[tops[0]] - 1:
        raise BaseMismatch("diagram base is not the dual face poset of a single simplex")
    return sp.rank[tops[0]] - 1


def _check_hypotheses(d: Diagram) -> None:
    u = uninhabited_open(d)
    if u is not None:
        raise HypothesisViolated(f"diagram has no section over the open set {sorted(u)}", witness=sorted(u))
    verdict = is_flabby(d)
    if not verdict:
        w = verdict.witness
        raise HypothesisViolated(
            f"diagram is not flabby: a section over {sorted(w.v)} does not extend to {sorted(w.u)}", witness=w
        )


def sphere_count_over_simplex(d: Diagram) -> int:
    """Number of top-dimensional spheres in the inflation over a simplex.

    Requires an inhabited flabby diagram.  The homology must be free and
    concentrated in the top degree, and the count must agree with the Euler
    characteristic; otherwise :class:`CertificateFailed` is raised.
    """
    dim = _simplex_dimension(d.base)
    _check_hypotheses(d)
    result = inflate(dual(d.base), d).result
    try:
        target = SimplicialPoset(result)
    except NotSimplicial:
        target = None
    cert = wedge_certificate(poset_homology(target or result), dim)
    if not cert.passed:
        raise CertificateFailed(
            f"inflation over a {dim}-simplex is not a wedge of {dim}-spheres: {cert.failure_reason}",
            witness=cert,
        )
    chi = cell_reduced_euler(target) if target is not None else poset_reduced_euler(result)
    euler = (-1) ** dim * chi
    if euler != cert.count:
        raise CertificateFailed(
            f"sphere count {cert.count} disagrees with the Euler characteristic count {euler}", witness=cert
        )
    return cert.count


@dataclass(frozen=True)
class SimplexTerm:
    element: str
    dim: int
    count: int
    link_betti: dict[int, int]


def _as_simplicial(p) -> SimplicialPoset:
    return p if isinstance(p, SimplicialPoset) else SimplicialPoset(p)


def _predicted_connected(sp: SimplicialPoset, d: Diagram) -> tuple[dict[int, int], list[SimplexTerm]]:
    p = sp.poset
    base = poset_homology(sp)
    out = {k: b for k, b in base.betti.items()}
    terms = []
    for i in p.topological_order:
        x = p.elements[i]
        n_i = sphere_count_over_simplex(restrict_to_open(d, down_set(p, x)))
        lk = poset_homology(link(sp, x))
        dim = sp.dim_of(x)
        terms.append(SimplexTerm(x, dim, n_i, lk.nonzero()))
        if n_i:
            for k, b in lk.betti.items():
                if b:
                    out[k + dim + 1] = out.get(k + dim + 1, 0) + n_i * b
    return dict(sorted(out.items())), terms


def predicted_betti(p: SimplicialPoset | Poset, d: Diagram) -> dict[int, int]:
    sp = _as_simplicial(p)
    if d.base != dual(sp.poset):
        raise BaseMismatch("diagram must be based on the dual of the simplicial poset")
    if not sp.poset.is_connected():
        comps = sp.poset.components()
        raise NotConnected(f"base has {len(comps)} components", witness=[sorted(c) for c in comps])
    _check_hypotheses(d)
    return _predicted_connected(sp, d)[0]


@dataclass
class DecompositionReport:
    base_betti: HomologyReport | None
    per_simplex: list[SimplexTerm]
    predicted_betti: dict[int, int] | None
    actual_betti: HomologyReport | None
    match: bool
    applicable: bool
    hypothesis_flags: dict[str, bool]
    components: int = 1
    witness: object = None
    base_cm: CMVerdict | None = None
    inflation_cm: CMVerdict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not-applicable"
        return "verified" if self.match else "mismatch"


def _same_betti(a: dict[int, int], b: dict[int, int]) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, 0) == b.get(k, 0) for k in keys)


def verify_inflation(p: SimplicialPoset | Poset, d: Diagram, check_cm: bool = True) -> DecompositionReport:
    """Check hypotheses, then compare predicted and actual Betti numbers of the inflation.

    Disconnected bases are split into components; reduced degree 0 then gains
    one per extra component.  When the base is Cohen–Macaulay the inflation is
    checked too.
    """
    poset = p.poset if isinstance(p, SimplicialPoset) else p
    flags = {"simplicial": True, "inhabited": True, "flabby": True, "connected": poset.is_connected()}
    witness = None
    sp = None
    try:
        sp = _as_simplicial(p)
    except NotSimplicial as exc:
        flags["simplicial"] = False
        witness = {"not_simplicial": exc.witness}
    if d.base != dual(poset):
        raise BaseMismatch("diagram must be based on the dual of the base poset")
    u = uninhabited_open(d)
    if u is not None:
        flags["inhabited"] = False
        witness = witness or {"uninhabited_open": sorted(u)}
    fv = is_flabby(d)
    if not fv:
        flags["flabby"] = False
        witness = witness or {"flabby": fv.witness}
    applicable = flags["simplicial"] and flags["inhabited"] and flags["flabby"]
    actual = poset_homology(inflate(poset, d).result)
    base = poset_homology(sp) if sp is not None else poset_homology(poset)
    comps = poset.components()
    report = DecompositionReport(base, [], None, actual, False, applicable, flags, len(comps), witness)
    if not applicable:
        report.notes.append("hypotheses not met; no prediction")
        return report
    predicted_parts = []
    for comp in sorted(comps, key=lambda c: min(poset.index(x) for x in c)):
        sub = SimplicialPoset(poset.induced(comp))
        pred, terms = _predicted_connected(sub, restrict_to_open(d, comp))
        report.per_simplex.extend(terms)
        predicted_parts.append(HomologyReport(pred))
    if len(comps) > 1:
        report.notes.append(f"{len(comps)} components verified separately")
    assembled = sum_reports(predicted_parts)
    report.predicted_betti = {k: v for k, v in assembled.betti.items()}
    report.match = _same_betti(report.predicted_betti, actual.betti) and actual.is_free
    if check_cm:
        report.base_cm = cm_check(sp)
        if report.base_cm:
            report.inflation_cm = cm_check(inflate(poset, d).result)
            if not report.inflation_cm:
                # a CM base must inflate to a CM poset
                report.match = False
                report.notes.append("base is Cohen-Macaulay but the inflation is not")
    return report
