"""Command-line entry point: ``inflate-kit VERB [options]``.

Exit codes: 0 success or verified, 1 a false verdict, 2 bad input, 3 a size
bound was exceeded.  Reports are canonical JSON on stdout or ``--out``.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import __version__, io, limits
from .errors import (
    CertificateFailed,
    HypothesisViolated,
    InflateKitError,
    ParseError,
    TooLarge,
)
from .homology import cm_check, complex_homology, poset_homology
from .inflation import complexity, completion, etale_check, inflate
from .poset import dual, find_isomorphism
from .sheaf import is_flabby, is_trivial, uninhabited_open
from .simplicial import (
    SimplicialComplex,
    face_poset,
    multiclique_diagram,
    vertex_inflation_diagram,
)
from .verify import sphere_count_over_simplex, verify_inflation

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_TOO_LARGE = 0, 1, 2, 3


def _counts(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"--counts expects comma-separated integers, got {text!r}", path="--counts") from None


def _complex_or_poset(args):
    if args.complex:
        return face_poset(io.read(args.complex, "complex"))
    return io.read(args.poset, "poset")


def _hypotheses(d) -> dict:
    u = uninhabited_open(d)
    fv = is_flabby(d)
    flags = {"inhabited": u is None, "flabby": bool(fv)}
    wit = {}
    if u is not None:
        wit["uninhabited_open"] = io.to_jsonable(u)
    if not fv:
        wit["not_flabby"] = io.to_jsonable(fv.witness)
    return {"flags": flags, "witness": wit}


# ---------------------------------------------------------------------------
# verbs: each returns (exit status, report)

def cmd_check_sheaf(args):
    d = io.read(args.diagram, "diagram")
    h = _hypotheses(d)
    report = {"hypotheses": h["flags"], "trivial": is_trivial(d), "complexity": complexity(d)}
    if h["witness"]:
        report["witness"] = h["witness"]
    ok = all(h["flags"].values())
    return (EXIT_OK if ok else EXIT_FALSE), report


def cmd_inflate(args):
    d = io.read(args.diagram, "diagram")
    if args.completion:
        c = completion(d.base, d)
        key = "completion"
    else:
        c = inflate(dual(d.base), d)
        key = "inflation"
    return EXIT_OK, {
        key: io.poset_to_json(c.result),
        "projection": {e: c.projection(e) for e in c.result.elements},
        "complexity": complexity(d),
    }


def cmd_homology(args):
    if args.complex:
        k = io.read(args.complex, "complex")
        r = complex_homology(k)
    else:
        r = poset_homology(io.read(args.poset, "poset"), method=args.method)
    return EXIT_OK, {"homology": io.homology_to_json(r), "reduced_euler": r.reduced_euler()}


def cmd_verify_wedge(args):
    k = io.read(args.complex, "complex")
    sp = face_poset(k)
    if args.counts:
        d = vertex_inflation_diagram(k, _counts(args.counts))
    elif args.diagram:
        d = io.read(args.diagram, "diagram")
    else:
        raise ParseError("verify-wedge needs --counts or --diagram", path="argv")
    rep = verify_inflation(sp, d, check_cm=not args.no_cm)
    out = io.decomposition_to_json(rep)
    return (EXIT_OK if rep.status == "verified" else EXIT_FALSE), out


def cmd_cm_check(args):
    p = _complex_or_poset(args)
    v = cm_check(p)
    return (EXIT_OK if v else EXIT_FALSE), {"cohen_macaulay": io.to_jsonable(v)}


def cmd_from_map(args):
    f = io.read(args.map, "map")
    from .simplicial import diagram_from_map

    d = diagram_from_map(f)
    report = {
        "diagram": io.diagram_to_json(d),
        "map": {"nondegenerate": f.is_nondegenerate(), "surjective": f.is_surjective()},
    }
    if not args.verify:
        return EXIT_OK, report
    result = inflate(face_poset(f.target).poset, d).result
    iso = find_isomorphism(result, face_poset(f.source).poset)
    report["isomorphic_to_source"] = iso is not None
    if iso is not None:
        report["isomorphism"] = {k: iso[k] for k in result.elements}
    return (EXIT_OK if iso is not None else EXIT_FALSE), report


def cmd_vertex_inflate(args):
    k = io.read(args.complex, "complex")
    d = vertex_inflation_diagram(k, _counts(args.counts))
    sp = face_poset(k)
    c = inflate(sp.poset, d)
    report = {
        "diagram": io.diagram_to_json(d),
        "inflation": io.poset_to_json(c.result),
        "hypotheses": {"inhabited": True, "flabby": True},
    }
    if len(sp.poset.maximal()) == 1:
        report["spheres"] = sphere_count_over_simplex(d)
    return EXIT_OK, report


def cmd_multiclique(args):
    g = io.read(args.graph, "multigraph")
    k, d = multiclique_diagram(g)
    c = inflate(face_poset(k).poset, d)
    return EXIT_OK, {
        "clique_complex": io.complex_to_json(k),
        "diagram": io.diagram_to_json(d),
        "inflation": io.poset_to_json(c.result),
        "hypotheses": {"inhabited": True, "flabby": True},
    }


def cmd_etale_check(args):
    d = io.read(args.diagram, "diagram")
    ok = etale_check(d.base, d)
    return (EXIT_OK if ok else EXIT_FALSE), {"etale_matches_alexandrov": ok}


VERBS: dict[str, tuple[Callable, str]] = {
    "check-sheaf": (cmd_check_sheaf, "inhabited / flabby / trivial verdicts for a diagram"),
    "inflate": (cmd_inflate, "inflation (or completion) along a diagram"),
    "homology": (cmd_homology, "reduced integer homology of a complex or poset"),
    "verify-wedge": (cmd_verify_wedge, "predicted vs actual Betti numbers of an inflation"),
    "cm-check": (cmd_cm_check, "homological Cohen-Macaulay test"),
    "from-map": (cmd_from_map, "preimage diagram of a simplicial map"),
    "vertex-inflate": (cmd_vertex_inflate, "vertex inflation of a complex"),
    "multiclique": (cmd_multiclique, "edge inflation of a multigraph"),
    "etale-check": (cmd_etale_check, "compare the étale and Alexandrov topologies"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="inflate-kit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"inflate-kit {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, (_, help_) in VERBS.items():
        sp = sub.add_parser(verb, help=help_)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--unsafe-limits", action="store_true", help="lift the size bounds")
        if verb in ("check-sheaf", "inflate", "etale-check"):
            sp.add_argument("--diagram", required=True)
        if verb == "inflate":
            sp.add_argument("--completion", action="store_true", help="complete the base instead of inflating its dual")
        if verb in ("homology", "cm-check"):
            g = sp.add_mutually_exclusive_group(required=True)
            g.add_argument("--complex")
            g.add_argument("--poset")
        if verb == "homology":
            sp.add_argument("--method", choices=["auto", "order", "cellular"], default="auto")
        if verb in ("verify-wedge", "vertex-inflate"):
            sp.add_argument("--complex", required=True)
            sp.add_argument("--counts", required=verb == "vertex-inflate", help="e.g. 2,2")
        if verb == "verify-wedge":
            sp.add_argument("--diagram", help="diagram on the dual face poset, instead of --counts")
            sp.add_argument("--no-cm", action="store_true", help="skip the Cohen-Macaulay checks")
        if verb == "from-map":
            sp.add_argument("--map", required=True)
            sp.add_argument("--verify", action="store_true", help="check the inflation against the source")
        if verb == "multiclique":
            sp.add_argument("--graph", required=True)
    return ap


def _emit(report: dict, out: str | None) -> None:
    text = io.dumps(report)
    if out:
        io.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    func = VERBS[args.verb][0]
    header = {"tool": {"name": "inflate-kit", "version": __version__}, "verb": args.verb}
    bound = limits.Limits.unlimited() if args.unsafe_limits else limits.current()
    try:
        with limits.override(bound):
            status, report = func(args)
    except TooLarge as exc:
        status, report = EXIT_TOO_LARGE, {"error": {"kind": "TooLarge", "message": str(exc)}}
    except (HypothesisViolated, CertificateFailed) as exc:
        status, report = EXIT_FALSE, {
            "error": {"kind": type(exc).__name__, "message": str(exc), "witness": io.to_jsonable(exc.witness)}
        }
    except InflateKitError as exc:
        status, report = EXIT_INPUT, {
            "error": {"kind": type(exc).__name__, "message": str(exc), "witness": io.to_jsonable(exc.witness)}
        }
    report = {**header, "exit": status, **report}
    _emit(report, args.out)
    if "error" in report:
        print(f"inflate-kit: {report['error']['message']}", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
