"""Linear algebra over a prime field F_q on small dense matrices.

A :class:`Subspace` keeps its reduced row-echelon basis as a tuple of tuples,
so equal subspaces compare and hash equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels


def check_field(q: int) -> int:
    q = int(q)
    if q < 2 or any(q % p == 0 for p in range(2, int(q**0.5) + 1)):
        raise ValueError(f"q = {q} is not prime")
    return q


def rref(m, q: int) -> tuple[np.ndarray, int]:
    m = np.ascontiguousarray(np.asarray(m, dtype=np.int64))
    if m.ndim != 2 or m.shape[0] == 0:
        return np.zeros((0, m.shape[-1] if m.ndim == 2 else 0), dtype=np.int64), 0
    a, r = _kernels.rref(m, q)
    return a[:r], r


@dataclass(frozen=True)
class Subspace:
    rows: tuple[tuple[int, ...], ...]
    n: int  # ambient dimension
    q: int

    @classmethod
    def from_rows(cls, m, q: int, n: int | None = None) -> "Subspace":
        m = np.asarray(m, dtype=np.int64)
        if n is None:
            n = m.shape[-1]
        m = m.reshape(-1, n)
        a, _ = rref(m, q)
        return cls(tuple(tuple(int(x) for x in row) for row in a), n, q)

    @classmethod
    def zero(cls, n: int, q: int) -> "Subspace":
        return cls((), n, q)

    @classmethod
    def whole(cls, n: int, q: int) -> "Subspace":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n, q)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.n)

    def __le__(self, other: "Subspace") -> bool:
        return contains(other, self)

    def __add__(self, other: "Subspace") -> "Subspace":
        return span(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __repr__(self) -> str:
        body = ";".join("".join(str(x) for x in r) for r in self.rows)
        return f"<{self.dim}-space [{body}] over F{self.q}>"


def span(*parts) -> Subspace:
    """Span of subspaces and/or vectors (all in the same ambient space)."""
    mats, n, q = [], None, None
    for p in parts:
        if isinstance(p, Subspace):
            n, q = p.n, p.q
            if p.dim:
                mats.append(p.matrix)
        else:
            mats.append(np.asarray(p, dtype=np.int64).reshape(-1, np.shape(p)[-1]))
    if q is None:
        raise ValueError("span needs at least one Subspace to fix the field")
    if not mats:
        return Subspace.zero(n, q)
    return Subspace.from_rows(np.vstack(mats), q, n)


def nullspace(m, q: int, n: int) -> np.ndarray:
    """Basis (rows) of {x : m x = 0} in F_q^n."""
    m = np.asarray(m, dtype=np.int64).reshape(-1, n)
    a, r = rref(m, q) if m.shape[0] else (np.zeros((0, n), dtype=np.int64), 0)
    pivots = []
    for i in range(r):
        pivots.append(int(np.nonzero(a[i])[0][0]))
    free = [j for j in range(n) if j not in pivots]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, p in enumerate(pivots):
            out[k, p] = (-a[i, f]) % q
    return out


def annihilator(S: Subspace) -> Subspace:
    return Subspace.from_rows(nullspace(S.matrix, S.q, S.n), S.q, S.n) if S.dim else Subspace.whole(S.n, S.q)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(A.n, A.q)
    return annihilator(span(annihilator(A), annihilator(B)))


def contains(big: Subspace, small: Subspace) -> bool:
    if small.dim > big.dim:
        return False
    if small.dim == 0:
        return True
    return span(big, small).dim == big.dim


def perp(S: Subspace, gram: np.ndarray) -> Subspace:
    """{v : B(v, s) = 0 for all s in S} for the bilinear form with the given Gram matrix."""
    if S.dim == 0:
        return Subspace.whole(S.n, S.q)
    return Subspace.from_rows(nullspace((S.matrix @ gram) % S.q, S.q, S.n), S.q, S.n)


def complement_basis(sub: Subspace, big: Subspace) -> np.ndarray:
    """Rows of big's echelon basis that, added greedily, extend sub to big."""
    assert contains(big, sub)
    cur = sub
    out = []
    for r in big.rows:
        nxt = span(cur, np.array(r))
        if nxt.dim > cur.dim:
            out.append(r)
            cur = nxt
    return np.array(out, dtype=np.int64).reshape(len(out), big.n)


@lru_cache(maxsize=None)
def projective_coordinates(k: int, q: int) -> np.ndarray:
    """Normalised representatives (first nonzero entry 1) of PG(k-1, q)."""
    out = []
    for v in itertools.product(range(q), repeat=k):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            out.append(v)
    return np.array(out, dtype=np.int64).reshape(len(out), k)


def projective_points(S: Subspace) -> np.ndarray:
    """Normalised coordinate vectors of all 1-spaces inside S."""
    if S.dim == 0:
        return np.zeros((0, S.n), dtype=np.int64)
    return (projective_coordinates(S.dim, S.q) @ S.matrix) % S.q


def point_vectors_between(sub: Subspace, big: Subspace) -> np.ndarray:
    """Vectors v of a complement of sub in big, one per 1-space of the quotient."""
    W = complement_basis(sub, big)
    if W.shape[0] == 0:
        return W
    return (projective_coordinates(W.shape[0], sub.q) @ W) % sub.q


def normalise(v, q: int) -> tuple[int, ...]:
    v = [int(x) % q for x in v]
    for x in v:
        if x:
            inv = pow(x, q - 2, q)
            return tuple((y * inv) % q for y in v)
    return tuple(v)


@lru_cache(maxsize=None)
def all_subspaces(n: int, k: int, q: int) -> tuple[Subspace, ...]:
    """Every k-dimensional subspace of F_q^n in lexicographic order of echelon rows."""
    if k == 0:
        return (Subspace.zero(n, q),)
    out = []
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            m = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                m[i][p] = 1
            for (i, j), x in zip(free, vals):
                m[i][j] = x
            out.append(Subspace(tuple(tuple(r) for r in m), n, q))
    return tuple(sorted(out, key=lambda s: s.rows))


def matrix_inverse(M, q: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64) % q
    n = M.shape[0]
    a, r = rref(np.hstack([M, np.eye(n, dtype=np.int64)]), q)
    if r < n or not np.array_equal(a[:, :n], np.eye(n, dtype=np.int64)):
        raise ValueError("matrix is singular")
    return a[:, n:]


def det_mod(M, q: int) -> int:
    M = np.asarray(M, dtype=np.int64) % q
    n = M.shape[0]
    a = M.copy()
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i, c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det
        det = det * int(a[c, c]) % q
        inv = pow(int(a[c, c]), q - 2, q)
        for i in range(c + 1, n):
            if a[i, c]:
                a[i] = (a[i] - a[i, c] * inv * a[c]) % q
    return det % q
