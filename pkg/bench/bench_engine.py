"""Compare the compiled search kernel with the pure-Python fallback.

Usage: python bench/bench_engine.py [--repeat N]

Three workloads: random weighted clause sets solved to optimality, the
3-colourability instances of small graphs, and the oracle-check harness
(entailment only).  Timings are best-of-N wall clock seconds.
"""

import argparse
import itertools
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from costlite import engine  # noqa: E402
from costlite import reductions as R  # noqa: E402
from costlite.cli import oracle_instances  # noqa: E402
from costlite.solver import SearchConfig, entails_bounded, k_satisfiable  # noqa: E402


def clause_workload(backend):
    rng = random.Random(1)
    for _ in range(40):
        nv = 40
        clauses, weights = [], []
        for _ in range(160):
            clauses.append([rng.choice((1, -1)) * rng.randint(1, nv) for _ in range(3)])
            weights.append(rng.choice((-1, 1, 2, 3)))
        s = engine.make_search(nv, clauses, weights, backend)
        s.run(10 ** 9, True, list(range(1, nv + 1)), [0] * (nv + 1))


def coloring_workload(backend):
    cfg = SearchConfig(backend=backend)
    graphs = [
        R.Graph.from_edges(list(itertools.combinations(range(1, 5), 2))),
        R.Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 3)]),
        R.Graph.from_edges([(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3), (2, 5)]),
    ]
    for g in graphs:
        kb, k = R.gen_3col(g)
        k_satisfiable(kb, k, cfg)


def oracle_workload(backend):
    cfg = SearchConfig(backend=backend)
    for mode, semantics in (("p", "possible"), ("c", "certain")):
        for kb, q, k in oracle_instances(7, 60, mode):
            entails_bounded(kb, q, k, semantics, cfg)


WORKLOADS = [
    ("random clauses (40 x 160 clauses)", clause_workload),
    ("3-col instances", coloring_workload),
    ("oracle harness entailment (120)", oracle_workload),
]


def best_of(fn, backend, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = engine.available_backends()
    if "cython" not in backends:
        print("compiled core not built; run: python setup.py build_ext --inplace")
    print(f"{'workload':40} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, fn in WORKLOADS:
        times = {b: best_of(fn, b, args.repeat) for b in backends}
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "       -"
        print(f"{name:40} " + " ".join(f"{times[b]:10.3f}" for b in backends) + "  " + speed)


if __name__ == "__main__":
    main()
