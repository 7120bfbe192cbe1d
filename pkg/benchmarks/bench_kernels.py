"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from projlens import _kernels as K
from projlens.fingeo import ProjectiveGeometry, chamber_graph
from projlens.perm import PermGroup


def best(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    mats = [rng.integers(0, 3, size=(6, 8)).astype(np.int64) for _ in range(2000)]
    cs = chamber_graph(ProjectiveGeometry(3, 3))
    G = PermGroup([rng.permutation(200).astype(np.int64) for _ in range(2)], seed=0)
    base = np.array(G.base, dtype=np.int64)
    elems = [rng.permutation(200).astype(np.int64) for _ in range(500)]
    which = np.arange(len(G._G), dtype=np.int64)

    cases = {
        "rref 6x8 over F3 (x2000)": lambda f: [f(m, 3) for m in mats],
        "bfs on PG(3,3) chambers": lambda f: f(cs.adj, 0),
        "schreier vector, degree 200": lambda f: f(G._G, which, 0),
        "sift, degree 200 (x500)": lambda f: [f(g, base, G._sv, G._Ginv, 0) for g in elems],
    }
    pairs = {
        "rref 6x8 over F3 (x2000)": (K.rref_jit, K.rref_numpy),
        "bfs on PG(3,3) chambers": (K.bfs_jit, K.bfs_numpy),
        "schreier vector, degree 200": (K.schreier_vector_jit, K.schreier_vector_numpy),
        "sift, degree 200 (x500)": (K.sift_jit, K.sift_numpy),
    }
    print(f"{'kernel':32s} {'numba':>10s} {'numpy':>10s} {'ratio':>7s}")
    for name, run in cases.items():
        jit, npy = pairs[name]
        run(jit)  # compile
        tj = best(lambda: run(jit), args.repeat)
        tn = best(lambda: run(npy), args.repeat)
        print(f"{name:32s} {tj * 1e3:9.2f}ms {tn * 1e3:9.2f}ms {tn / tj:6.1f}x")


if __name__ == "__main__":
    main()
