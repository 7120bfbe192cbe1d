"""Permutation groups via a stabilizer chain (Schreier-Sims).

Permutations are int64 arrays ``p`` with ``p[i]`` the image of ``i``.  The
product "first g, then h" is ``h[g]``.

The chain is built by a seeded random phase (product replacement, sifting
random elements) followed by deterministic verification: every Schreier
generator of every level is sifted, deepest level first, and any nontrivial
residue is added as a strong generator before verification resumes at its
level.  Orders and membership are therefore exact.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def compose(*perms: np.ndarray) -> np.ndarray:
    """Apply the permutations left to right."""
    out = perms[0]
    for p in perms[1:]:
        out = p[out]
    return out


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> np.ndarray:
    p = identity(n)
    for c in cycles:
        for a, b in zip(c, list(c[1:]) + [c[0]]):
            p[a] = b
    return p


def is_permutation(p: np.ndarray) -> bool:
    return bool(np.array_equal(np.sort(p), np.arange(len(p))))


class PermGroup:
    def __init__(
        self,
        gens: Iterable[np.ndarray],
        degree: Optional[int] = None,
        base_prefix: Sequence[int] = (),
        seed: int = 0,
    ):
        gens = [np.ascontiguousarray(g, dtype=np.int64) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = len(gens[0])
        self.degree = degree
        self._id = identity(degree)
        self.generators: list[np.ndarray] = []
        for g in gens:
            if len(g) != degree or not is_permutation(g):
                raise ValueError("generator is not a permutation of the domain")
            if not np.array_equal(g, self._id):
                self.generators.append(g)
        self.base: list[int] = [int(b) for b in base_prefix]
        self._G = np.zeros((0, degree), dtype=np.int64)
        self._Ginv = np.zeros((0, degree), dtype=np.int64)
        self._glev: list[int] = []  # number of leading base points fixed by each strong generator
        self._sv = np.zeros((0, degree), dtype=np.int64)
        self._orbits: list[np.ndarray] = []
        self._rng = np.random.default_rng(seed)
        self._build()

    # -- construction -------------------------------------------------------
    def _fixed_prefix(self, g: np.ndarray) -> int:
        k = 0
        while k < len(self.base) and g[self.base[k]] == self.base[k]:
            k += 1
        return k

    def _add_strong(self, g: np.ndarray) -> int:
        k = self._fixed_prefix(g)
        if k == len(self.base):
            moved = np.nonzero(g != self._id)[0]
            self.base.append(int(moved[0]))
        self._G = np.vstack([self._G, g[None, :]])
        self._Ginv = np.vstack([self._Ginv, inverse(g)[None, :]])
        self._glev.append(k)
        self._refresh(0, k)
        return k

    def _refresh(self, lo: int, hi: int) -> None:
        nlev = len(self.base)
        if self._sv.shape[0] < nlev:
            pad = np.full((nlev - self._sv.shape[0], self.degree), -1, dtype=np.int64)
            self._sv = np.vstack([self._sv, pad])
            self._orbits += [None] * (nlev - len(self._orbits))
        glev = np.array(self._glev, dtype=np.int64)
        for i in range(lo, min(hi, nlev - 1) + 1):
            which = np.nonzero(glev >= i)[0].astype(np.int64)
            sv, orb = _kernels.schreier_vector(self._G, which, self.base[i])
            self._sv[i] = sv
            self._orbits[i] = orb

    def _sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        base = np.array(self.base, dtype=np.int64)
        return _kernels.sift(np.ascontiguousarray(g), base, self._sv, self._Ginv, start)

    def _insert(self, g: np.ndarray, start: int = 0) -> Optional[int]:
        """Sift g; if a nontrivial residue is left, add it and return its level."""
        h, _ = self._sift(g, start)
        if np.array_equal(h, self._id):
            return None
        return self._add_strong(h)

    def _random_phase(self, quiet_rounds: int = 24) -> None:
        if not self.generators:
            return
        pool = [g.copy() for g in self.generators]
        while len(pool) < 10:
            pool.append(pool[len(pool) % len(self.generators)].copy())
        acc = self._id.copy()
        for _ in range(50):  # burn in
            acc = self._pr_step(pool, acc)
        quiet = 0
        while quiet < quiet_rounds:
            acc = self._pr_step(pool, acc)
            quiet = 0 if self._insert(acc) is not None else quiet + 1

    def _pr_step(self, pool, acc):
        i, j = self._rng.choice(len(pool), size=2, replace=False)
        if self._rng.random() < 0.5:
            pool[i] = pool[j][pool[i]]
        else:
            pool[i] = pool[i][pool[j]]
        return pool[i][acc]

    def _transversal(self, i: int) -> dict[int, np.ndarray]:
        sv, orb = self._sv[i], self._orbits[i]
        u = {int(orb[0]): self._id}
        for x in orb[1:]:
            k = sv[x]
            y = self._Ginv[k][x]
            u[int(x)] = self._G[k][u[int(y)]]
        return u

    def _verify(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            restart = None
            u = self._transversal(i)
            strong = [k for k, lev in enumerate(self._glev) if lev >= i]
            for x, ux in u.items():
                for k in strong:
                    lev = self._insert(self._G[k][ux], start=i)
                    if lev is not None:
                        restart = max(lev, i)
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = min(restart, len(self.base) - 1)
            else:
                i -= 1

    def _build(self) -> None:
        if self.base:
            self._refresh(0, len(self.base) - 1)
        for g in self.generators:
            self._insert(g)
        self._random_phase()
        self._verify()

    def extend(self, gens: Iterable[np.ndarray]) -> bool:
        """Add generators in place; True if the group grew."""
        grew = False
        for g in gens:
            g = np.ascontiguousarray(g, dtype=np.int64)
            if np.array_equal(g, self._id):
                continue
            self.generators.append(g)
            if self._insert(g) is not None:
                grew = True
        if grew:
            self._random_phase(quiet_rounds=12)
            self._verify()
        return grew

    # -- queries --------------------------------------------------------------
    @property
    def basic_orbit_lengths(self) -> list[int]:
        return [len(o) for o in self._orbits[: len(self.base)]]

    def order(self) -> int:
        out = 1
        for k in self.basic_orbit_lengths:
            out *= int(k)
        return out

    def __len__(self) -> int:
        return self.order()

    def contains(self, g: np.ndarray) -> bool:
        g = np.asarray(g, dtype=np.int64)
        if len(g) != self.degree or not is_permutation(g):
            return False
        h, _ = self._sift(g)
        return bool(np.array_equal(h, self._id))

    __contains__ = contains

    def strong_generators(self) -> list[np.ndarray]:
        return list(self._G)

    def pointwise_stabilizer_generators(self, k: int) -> list[np.ndarray]:
        """Strong generators of the pointwise stabilizer of base[:k]."""
        return [self._G[j] for j, lev in enumerate(self._glev) if lev >= k]

    def stabilizer_of_prefix(self, k: int) -> "PermGroup":
        gens = self.pointwise_stabilizer_generators(k)
        return PermGroup(gens, degree=self.degree, base_prefix=self.base[k:])

    def orbit(self, x: int) -> np.ndarray:
        if not len(self._G):
            return np.array([x], dtype=np.int64)
        _, orb = _kernels.schreier_vector(self._G, np.arange(len(self._G), dtype=np.int64), x)
        return np.sort(orb)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.generators)

    def equals(self, other: "PermGroup") -> bool:
        return (
            self.degree == other.degree
            and self.order() == other.order()
            and self.is_subgroup_of(other)
            and other.is_subgroup_of(self)
        )

    def random_element(self) -> np.ndarray:
        """Uniform random element from the chain."""
        g = self._id
        for i in reversed(range(len(self.base))):
            u = list(self._transversal(i).values())
            g = u[int(self._rng.integers(len(u)))][g]
        return g

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_order(g: PermGroup) -> int:
    return g.order()
