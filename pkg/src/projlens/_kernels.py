"""Hot inner loops: modular row reduction, chamber-graph BFS, Schreier vectors
and permutation sifting.

Every kernel exists twice: a loop version compiled with numba ``@njit`` and a
vectorised pure-numpy version.  ``PROJLENS_NO_JIT=1`` in the environment (read
at import time) selects the numpy path everywhere; both paths are exported
under explicit names so tests and ``benchmarks/bench_kernels.py`` can compare
them directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and os.environ.get("PROJLENS_NO_JIT", "") not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# loop versions (numba-compatible)
# ---------------------------------------------------------------------------


def _rref_loops(m, q):
    a = m.copy()
    rows, cols = a.shape
    for i in range(rows):
        for j in range(cols):
            a[i, j] = a[i, j] % q
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        # a^(q-2) is the inverse mod a prime q
        inv = 1
        for _ in range(q - 2):
            inv = (inv * a[r, c]) % q
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % q
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % q
        r += 1
    return a, r


def _bfs_loops(adj, src):
    n, k = adj.shape
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[src] = 0
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        dx = dist[x] + 1
        for t in range(k):
            y = adj[x, t]
            if y >= 0 and dist[y] < 0:
                dist[y] = dx
                queue[tail] = y
                tail += 1
    return dist


def _schreier_vector_loops(gens, which, root):
    n = gens.shape[1]
    sv = np.full(n, -1, dtype=np.int64)
    orbit = np.empty(n, dtype=np.int64)
    sv[root] = -2
    orbit[0] = root
    head = 0
    tail = 1
    while head < tail:
        x = orbit[head]
        head += 1
        for t in range(which.shape[0]):
            k = which[t]
            y = gens[k, x]
            if sv[y] == -1:
                sv[y] = k
                orbit[tail] = y
                tail += 1
    return sv, orbit[:tail].copy()


def _sift_loops(g, base, sv, ginv, start):
    h = g.copy()
    n = h.shape[0]
    tmp = np.empty(n, dtype=np.int64)
    nlev = base.shape[0]
    for lev in range(start, nlev):
        b = base[lev]
        x = h[b]
        if x == b:
            continue
        if sv[lev, x] == -1:
            return h, lev
        while x != b:
            k = sv[lev, x]
            for i in range(n):
                tmp[i] = ginv[k, h[i]]
            for i in range(n):
                h[i] = tmp[i]
            x = h[b]
    return h, nlev


# ---------------------------------------------------------------------------
# numpy versions
# ---------------------------------------------------------------------------


def rref_numpy(m, q):
    a = np.asarray(m, dtype=np.int64) % q
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), q - 2, q)) % q
        f = a[:, c].copy()
        f[r] = 0
        a = (a - np.outer(f, a[r])) % q
        r += 1
    return a, r


def bfs_numpy(adj, src):
    n = adj.shape[0]
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    d = 0
    while frontier.size:
        nb = adj[frontier].ravel()
        nb = nb[nb >= 0]
        nb = np.unique(nb[dist[nb] < 0])
        d += 1
        dist[nb] = d
        frontier = nb
    return dist


def schreier_vector_numpy(gens, which, root):
    n = gens.shape[1]
    sv = np.full(n, -1, dtype=np.int64)
    sv[root] = -2
    frontier = np.array([root], dtype=np.int64)
    parts = [frontier]
    while frontier.size:
        new_parts = []
        for k in which:
            img = gens[k, frontier]
            img = img[sv[img] == -1]
            if img.size:
                img = np.unique(img)
                sv[img] = k
                new_parts.append(img)
        frontier = np.concatenate(new_parts) if new_parts else np.empty(0, dtype=np.int64)
        if frontier.size:
            parts.append(frontier)
    return sv, np.concatenate(parts)


def sift_numpy(g, base, sv, ginv, start):
    h = np.array(g, dtype=np.int64)
    nlev = len(base)
    for lev in range(start, nlev):
        b = base[lev]
        x = h[b]
        if x == b:
            continue
        if sv[lev, x] == -1:
            return h, lev
        while x != b:
            h = ginv[sv[lev, x]][h]
            x = h[b]
    return h, nlev


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    rref_jit = njit(cache=True)(_rref_loops)
    bfs_jit = njit(cache=True)(_bfs_loops)
    schreier_vector_jit = njit(cache=True)(_schreier_vector_loops)
    sift_jit = njit(cache=True)(_sift_loops)
else:  # pragma: no cover
    rref_jit = _rref_loops
    bfs_jit = _bfs_loops
    schreier_vector_jit = _schreier_vector_loops
    sift_jit = _sift_loops


if USE_JIT:
    rref = rref_jit
    bfs = bfs_jit
    schreier_vector = schreier_vector_jit
    sift = sift_jit
else:
    rref = rref_numpy
    bfs = bfs_numpy
    schreier_vector = schreier_vector_numpy
    sift = sift_numpy


def kernel_backend() -> str:
    return "numba" if USE_JIT else "numpy"
