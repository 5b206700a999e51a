"""Compiled vs pure-Python kernels on the workloads that dominate the test suite.

    python benchmarks/bench_kernels.py [--repeat N]

Each row times the same call on both backends and checks the results agree.
"""
from __future__ import annotations

import argparse
import random
import timeit

from inflate_kit import _kernels
from inflate_kit.homology import cellular_chain_complex, chain_complex
from inflate_kit.inflation import inflate
from inflate_kit.poset import open_masks, order_complex
from inflate_kit.simplicial import SimplicialPoset, face_poset, simplex, simplex_boundary, vertex_inflation_diagram


def _rank_workload(k, counts):
    d = vertex_inflation_diagram(k, counts)
    res = SimplicialPoset(inflate(face_poset(k).poset, d).result)
    c = cellular_chain_complex(res)
    return [(c.rank_of(deg - 1), c.boundaries[deg]) for deg in range(0, c.top + 1)]


def _order_rank_workload(k, counts):
    d = vertex_inflation_diagram(k, counts)
    c = chain_complex(order_complex(inflate(face_poset(k).poset, d).result))
    return [(c.rank_of(deg - 1), c.boundaries[deg]) for deg in range(0, c.top + 1)]


def _flabby_workload(k, counts):
    d = vertex_inflation_diagram(k, counts)
    opens = [m for m in open_masks(d.base) if m]
    return d._kernel_args(), opens


def bench_rank(backend, work):
    return [backend.rank_and_torsion(n, cols) for n, cols in work]


def bench_flabby(backend, work):
    args, opens = work
    return backend.flabby_scan(*args, opens), backend.flabby_scan(*args, opens, True)


def bench_sections(backend, work):
    args, opens = work
    n, order, ucov, emap, sizes = args[:5]
    return [backend.enumerate_sections([e for e in order if (m >> e) & 1], ucov, emap, sizes) for m in opens]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run `python setup.py build_ext --inplace`")
    py, cy = _kernels.python_backend, _kernels.compiled_backend
    rng = random.Random(0)
    cases = [
        ("rank/torsion  Δ³(3,3,2,2) inflation", bench_rank, _rank_workload(simplex("1234"), [3, 3, 2, 2])),
        ("rank/torsion  ∂Δ⁴(2,2,2,2,2)", bench_rank, _rank_workload(simplex_boundary("12345"), [2] * 5)),
        ("rank/torsion  order complex of ∂Δ³(2,2,2,2)", bench_rank,
         _order_rank_workload(simplex_boundary("1234"), [2, 2, 2, 2])),
        ("rank/torsion  random ±1 40x60", bench_rank,
         [(40, [[(r, rng.choice((1, -1))) for r in range(40) if rng.random() < 0.15] for _ in range(60)])]),
        ("flabby scan   Δ³(2,2,2,2)", bench_flabby, _flabby_workload(simplex("1234"), [2, 2, 2, 2])),
        ("flabby scan   ∂Δ³(2,1,3,2)", bench_flabby, _flabby_workload(simplex_boundary("1234"), [2, 1, 3, 2])),
        ("sections      Δ³(3,2,2,2), all opens", bench_sections, _flabby_workload(simplex("1234"), [3, 2, 2, 2])),
    ]
    print(f"{'workload':42} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn, work in cases:
        assert fn(py, work) == fn(cy, work), name
        t_py = min(timeit.repeat(lambda: fn(py, work), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(cy, work), number=1, repeat=args.repeat))
        print(f"{name:42} {t_py * 1e3:9.1f}ms {t_cy * 1e3:9.1f}ms {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
