"""Time the solver and verifier under both kernel backends.

    python benchmarks/bench_kernels.py --sizes 10000 30000 100000

Each size is a random bipartite m=4 graph with 3|V| edges solved over S4.
The numba column excludes compilation (one warm-up run per process).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from switchcol import MixedGraph, closure, decide_2col, verify_certificate
from switchcol.group import SwitchElement


def random_instance(nv: int, ne: int, seed: int = 0) -> MixedGraph:
    rng = np.random.default_rng(seed)
    left = np.arange(1, nv + 1, 2)
    right = np.arange(2, nv + 1, 2)
    u = rng.choice(left, 2 * ne)
    v = rng.choice(right, 2 * ne)
    pairs = np.unique(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1), axis=0)
    rng.shuffle(pairs)
    pairs = pairs[:ne]
    cols = rng.integers(1, 5, len(pairs))
    return MixedGraph(4, 0, nv, tuple(zip(pairs[:, 0].tolist(), pairs[:, 1].tolist(), cols.tolist())))


def s4():
    return closure([SwitchElement.build(4, 0, alpha=[(1, 2)]), SwitchElement.build(4, 0, alpha=[(1, 2, 3, 4)])])


def run(sizes):
    grp = s4()
    warm = random_instance(200, 600)  # warm-up: compile / load the kernels
    verify_certificate(warm, grp, decide_2col(warm, grp))
    rows = []
    for nv in sizes:
        g = random_instance(nv, 3 * nv)
        t0 = time.perf_counter()
        decide_2col(g, grp, certificate=False)
        t1 = time.perf_counter()
        cert = decide_2col(g, grp)
        t2 = time.perf_counter()
        ok = verify_certificate(g, grp, cert).ok
        t3 = time.perf_counter()
        rows.append((nv, t1 - t0, t2 - t1, t3 - t2, ok))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10_000, 30_000, 100_000])
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.child:
        for row in run(args.sizes):
            print(*row)
        return
    print(f"{'backend':8} {'|V|':>8} {'verdict':>9} {'certify':>9} {'verify':>9}")
    for backend in ("numba", "numpy"):
        env = dict(os.environ, SWITCHCOL_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, __file__, "--child", "--sizes", *map(str, args.sizes)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout
        for line in out.splitlines():
            nv, tv, tc, tr, ok = line.split()
            flag = "" if ok == "True" else "  VERIFY FAILED"
            print(f"{backend:8} {int(nv):8d} {float(tv):8.2f}s {float(tc):8.2f}s {float(tr):8.2f}s{flag}")


if __name__ == "__main__":
    main()
