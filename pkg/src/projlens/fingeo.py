"""Finite buildings of type A_r (projective spaces) and D_n (hyperbolic
quadrics, oriflamme convention) over a prime field.

A chamber is stored as its maximal chain of subspaces: vector dimensions
1..r for PG(r, q) and 1..n-1 of totally singular subspaces for the quadric of
Witt index n.  In the quadric the two generators through the top member of
the chain are the type n-1 and type n vertices; a generator M has type n iff
dim(M meet M_ref) = n mod 2 with M_ref = <e_1, ..., e_n>.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .diagram import Diagram, TypeSet, make_diagram
from .gf import (
    Subspace,
    check_field,
    contains,
    intersect,
    perp,
    point_vectors_between,
    span,
)
from .roots import opposition

Chain = tuple  # tuple[Subspace, ...], ascending dimension
SIZE_GUARD = 10**7
CACHE_VERSION = "1"


class GeometryError(ValueError):
    pass


class SizeGuardError(GeometryError):
    pass


@dataclass(frozen=True)
class Flag:
    """A simplex: type label -> subspace.  Generators of the quadric are
    stored as n-dimensional subspaces under type n-1 or n."""

    parts: tuple[tuple[int, Subspace], ...]

    @classmethod
    def of(cls, parts: Mapping[int, Subspace]) -> "Flag":
        return cls(tuple(sorted(parts.items())))

    @property
    def types(self) -> TypeSet:
        return frozenset(t for t, _ in self.parts)

    def __getitem__(self, t: int) -> Subspace:
        for k, s in self.parts:
            if k == t:
                return s
        raise KeyError(t)

    def get(self, t: int, default=None):
        return dict(self.parts).get(t, default)

    def as_dict(self) -> dict[int, Subspace]:
        return dict(self.parts)

    def restrict(self, J: Iterable[int]) -> "Flag":
        J = set(J)
        return Flag(tuple(p for p in self.parts if p[0] in J))

    def __len__(self) -> int:
        return len(self.parts)


class Geometry:
    family: str
    rank: int
    q: int
    n: int  # vector dimension
    chain_length: int

    def __init__(self):
        self.diagram: Diagram = make_diagram(self.family, self.rank)
        self.op = opposition(self.diagram)

    # -- naming -----------------------------------------------------------
    @property
    def tag(self) -> str:
        return f"{self.family}{self.rank}"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.tag}, q={self.q})"

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and (self.rank, self.q) == (other.rank, other.q)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.rank, self.q))

    # -- hooks ------------------------------------------------------------
    def _fixed_chain(self, F: Flag) -> tuple[dict[int, Subspace], Optional[Subspace]]:
        """Chain positions pinned by F and an optional upper bound for the
        free positions above the last pinned one."""
        raise NotImplementedError

    def _free_container(self, prev: Subspace) -> tuple[Subspace, bool]:
        """Where the next chain member lives when nothing above pins it, and
        whether new vectors must be singular."""
        raise NotImplementedError

    def chamber_flag(self, C: Chain) -> Flag:
        raise NotImplementedError

    def vertex_type(self, S: Subspace) -> int:
        raise NotImplementedError

    def vertices_opposite(self, X: Subspace, Y: Subspace) -> bool:
        raise NotImplementedError

    def element_map(self, F: Flag, Fp: Flag) -> Callable[[Subspace], Subspace]:
        raise NotImplementedError

    def neighbours(self, C: Chain, i: int) -> list[Chain]:
        raise NotImplementedError

    def estimated_chambers(self) -> int:
        raise NotImplementedError

    # -- chambers and residues ------------------------------------------------
    def guard(self, count: int | None = None) -> None:
        count = self.estimated_chambers() if count is None else count
        if count > SIZE_GUARD:
            raise SizeGuardError(f"{self}: about {count} chambers exceeds the guard {SIZE_GUARD}")

    def _children(self, prev: Subspace, k: int, fixed, top) -> list[Subspace]:
        if k in fixed:
            return [fixed[k]] if contains(fixed[k], prev) else []
        above = [b for b in fixed if b > k]
        if above:
            container, singular = fixed[min(above)], False
        elif top is not None:
            container, singular = top, False
        else:
            container, singular = self._free_container(prev)
        vecs = point_vectors_between(prev, container)
        if singular:
            vecs = vecs[self._singular_mask(vecs)]
        return [span(prev, v) for v in vecs]

    def _singular_mask(self, vecs: np.ndarray) -> np.ndarray:
        return np.ones(len(vecs), dtype=bool)

    def residue_chambers(self, F: Flag | None = None, guard: bool = True) -> list[Chain]:
        """All chambers containing F (all chambers for F = None), sorted."""
        fixed, top = self._fixed_chain(F) if F is not None and len(F) else ({}, None)
        if guard and F is None:
            self.guard()
        out: list[Chain] = []
        zero = Subspace.zero(self.n, self.q)

        def rec(prev, k, acc):
            if k > self.chain_length:
                out.append(tuple(acc))
                return
            for X in self._children(prev, k, fixed, top):
                acc.append(X)
                rec(X, k + 1, acc)
                acc.pop()
                if guard and len(out) > SIZE_GUARD:
                    raise SizeGuardError("chamber enumeration exceeded the guard")

        rec(zero, 1, [])
        out.sort(key=lambda c: [x.rows for x in c])
        return out

    def random_chamber(self, rng: np.random.Generator, F: Flag | None = None) -> Chain:
        """Uniform random chamber (containing F) by random extension."""
        fixed, top = self._fixed_chain(F) if F is not None and len(F) else ({}, None)
        prev = Subspace.zero(self.n, self.q)
        acc = []
        for k in range(1, self.chain_length + 1):
            kids = self._children(prev, k, fixed, top)
            if not kids:
                raise GeometryError("flag has empty residue")
            prev = kids[int(rng.integers(len(kids)))]
            acc.append(prev)
        return tuple(acc)

    def random_flag(self, J: Iterable[int], rng: np.random.Generator) -> Flag:
        return self.chamber_flag(self.random_chamber(rng)).restrict(J)

    def contains_flag(self, C: Chain, F: Flag) -> bool:
        V = self.chamber_flag(C)
        return all(V.get(t) == S for t, S in F.parts)

    def enumerate_flags(self, J: Iterable[int]) -> list[Flag]:
        J = frozenset(J)
        seen = {}
        for C in self.residue_chambers():
            f = self.chamber_flag(C).restrict(J)
            seen.setdefault(f, None)
        return sorted(seen, key=lambda f: [(t, s.rows) for t, s in f.parts])

    # -- opposition ---------------------------------------------------------
    def opposite_type(self, J: Iterable[int]) -> TypeSet:
        return frozenset(self.op[i] for i in J)

    def is_opposite(self, F: Flag, Fp: Flag) -> bool:
        if Fp.types != self.opposite_type(F.types):
            raise GeometryError(f"type {sorted(Fp.types)} is not opposite to {sorted(F.types)}")
        return all(self.vertices_opposite(S, Fp[self.op[t]]) for t, S in F.parts)

    def random_opposite(
        self, flags: Sequence[Flag], rng: np.random.Generator, max_tries: int = 10000
    ) -> Flag:
        """Random flag opposite every flag in ``flags`` (all of one type)."""
        J = self.opposite_type(flags[0].types)
        for _ in range(max_tries):
            G = self.random_flag(J, rng)
            if all(self.is_opposite(F, G) for F in flags):
                return G
        raise GeometryError("no opposite flag found by rejection sampling")

    # -- perspectivities ----------------------------------------------------
    def perspectivity(self, F: Flag, Fp: Flag, check: bool = True) -> Callable[[Chain], Chain]:
        if check and not self.is_opposite(F, Fp):
            raise GeometryError("flags are not opposite")
        fixed_p, _ = self._fixed_chain(Fp)
        fixed, _ = self._fixed_chain(F)
        emap = self.element_map(F, Fp)
        cache: dict[Subspace, Subspace] = {}

        def apply(C: Chain) -> Chain:
            out = dict(fixed_p)
            for k, X in enumerate(C, start=1):
                if k in fixed:
                    continue
                Y = cache.get(X)
                if Y is None:
                    Y = cache[X] = emap(X)
                out[Y.dim] = Y
            return tuple(out[k] for k in range(1, self.chain_length + 1))

        def element(X: Subspace) -> Subspace:
            if X not in cache:
                cache[X] = emap(X)
            return cache[X]

        apply.element = element
        return apply


class ProjectiveGeometry(Geometry):
    """PG(r, q): type i vertices are the i-dimensional subspaces of F_q^(r+1)."""

    family = "A"

    def __init__(self, r: int, q: int):
        if r < 1:
            raise GeometryError("PG(r, q) needs r >= 1")
        self.rank, self.q, self.n = r, check_field(q), r + 1
        self.chain_length = r
        super().__init__()

    def __repr__(self) -> str:
        return f"PG({self.rank},{self.q})"

    def estimated_chambers(self) -> int:
        out = 1
        for k in range(1, self.rank + 2):
            out *= (self.q**k - 1) // (self.q - 1)
        return out

    def _fixed_chain(self, F):
        parts = F.as_dict()
        for t, S in parts.items():
            if S.dim != t:
                raise GeometryError(f"type {t} part has dimension {S.dim}")
        return parts, None

    def _free_container(self, prev):
        return Subspace.whole(self.n, self.q), False

    def chamber_flag(self, C):
        return Flag(tuple((k, X) for k, X in enumerate(C, start=1)))

    def vertex_type(self, S):
        if not 1 <= S.dim <= self.rank:
            raise GeometryError("not a proper nonzero subspace")
        return S.dim

    def vertices_opposite(self, X, Y):
        return X.dim + Y.dim == self.n and intersect(X, Y).dim == 0

    def element_map(self, F, Fp):
        r = self.rank
        V, zero = Subspace.whole(self.n, self.q), Subspace.zero(self.n, self.q)
        pinned = sorted(F.types)

        def Up(k):
            return V if k == r + 1 else zero if k == 0 else Fp[k]

        def emap(X):
            x = X.dim
            a = max([t for t in pinned if t < x], default=0)
            b = min([t for t in pinned if t > x], default=r + 1)
            return span(intersect(X, Up(r + 1 - a)), Up(r + 1 - b))

        return emap

    def neighbours(self, C, i):
        lo = C[i - 2] if i >= 2 else Subspace.zero(self.n, self.q)
        hi = C[i] if i < self.rank else Subspace.whole(self.n, self.q)
        out = []
        for v in point_vectors_between(lo, hi):
            X = span(lo, v)
            if X != C[i - 1]:
                out.append(C[: i - 1] + (X,) + C[i:])
        return out


class HyperbolicQuadric(Geometry):
    """Quadric Q(x) = sum x_i x_(n+i) on F_q^(2n), as a building of type D_n."""

    family = "D"

    def __init__(self, n: int, q: int):
        if n < 4:
            raise GeometryError("type D_n needs n >= 4")
        self.rank, self.q, self.n = n, check_field(q), 2 * n
        self.chain_length = n - 1
        z, I = np.zeros((n, n), dtype=np.int64), np.eye(n, dtype=np.int64)
        self.gram = np.block([[z, I], [I, z]])
        self.m_ref = Subspace.from_rows(np.hstack([I, z]), self.q)
        self._gen_cache: dict[Subspace, dict[int, Subspace]] = {}
        super().__init__()

    def __repr__(self) -> str:
        return f"Q+({2 * self.rank - 1},{self.q})"

    @property
    def witt(self) -> int:
        return self.rank

    def estimated_chambers(self) -> int:
        # Poincare polynomial of W(D_n) at q
        q, n = self.q, self.rank
        degs = [2 * k for k in range(1, n)] + [n]
        out = 1
        for d in degs:
            out *= (q**d - 1) // (q - 1)
        return out

    def Q(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        return int(v[: self.rank] @ v[self.rank :]) % self.q

    def _singular_mask(self, vecs):
        n = self.rank
        return (np.einsum("ij,ij->i", vecs[:, :n], vecs[:, n:]) % self.q) == 0

    def is_totally_singular(self, S: Subspace) -> bool:
        if S.dim == 0:
            return True
        M = S.matrix
        return bool(self._singular_mask(M).all() and not ((M @ self.gram @ M.T) % self.q).any())

    def perp(self, S: Subspace) -> Subspace:
        return perp(S, self.gram)

    def family_of(self, M: Subspace) -> int:
        n = self.rank
        return n if intersect(M, self.m_ref).dim % 2 == n % 2 else n - 1

    def vertex_type(self, S):
        if S.dim == self.rank:
            return self.family_of(S)
        if 1 <= S.dim <= self.rank - 2:
            return S.dim
        raise GeometryError("dimension n-1 subspaces are not vertices")

    def generators_through(self, X: Subspace) -> dict[int, Subspace]:
        """The two generators containing an (n-1)-dimensional singular X, by type."""
        hit = self._gen_cache.get(X)
        if hit is not None:
            return hit
        vecs = point_vectors_between(X, self.perp(X))
        vecs = vecs[self._singular_mask(vecs)]
        gens = [span(X, v) for v in vecs]
        assert len(gens) == 2, "a submaximal singular subspace lies in exactly two generators"
        out = {self.family_of(M): M for M in gens}
        assert len(out) == 2
        self._gen_cache[X] = out
        return out

    def _fixed_chain(self, F):
        n = self.rank
        fixed, gens = {}, {}
        for t, S in F.parts:
            if t >= n - 1:
                if S.dim != n or self.family_of(S) != t:
                    raise GeometryError(f"type {t} part is not a generator of that family")
                gens[t] = S
            else:
                if S.dim != t:
                    raise GeometryError(f"type {t} part has dimension {S.dim}")
                fixed[t] = S
        top = None
        if len(gens) == 2:
            fixed[n - 1] = intersect(gens[n - 1], gens[n])
            if fixed[n - 1].dim != n - 1:
                raise GeometryError("the two generators of a flag must meet in codimension 1")
        elif gens:
            (top,) = gens.values()
        return fixed, top

    def _free_container(self, prev):
        return self.perp(prev), True

    def chamber_flag(self, C):
        n = self.rank
        parts = {k: X for k, X in enumerate(C[: n - 2], start=1)}
        parts.update(self.generators_through(C[n - 2]))
        return Flag.of(parts)

    def vertices_opposite(self, X, Y):
        if X.dim != Y.dim:
            return False
        if X.dim == self.rank:
            return intersect(X, Y).dim == 0
        return intersect(X, self.perp(Y)).dim == 0

    def _top_of(self, F: Flag) -> Optional[Subspace]:
        n = self.rank
        gens = [F.get(t) for t in (n - 1, n) if F.get(t) is not None]
        if len(gens) == 2:
            return intersect(*gens)
        return gens[0] if gens else None

    def element_map(self, F, Fp):
        zero = Subspace.zero(self.n, self.q)
        pinned = sorted(t for t in F.types if t <= self.rank - 2)
        top, top_p = self._top_of(F), self._top_of(Fp)
        ends = pinned + ([top.dim] if top is not None else [])

        def Up(k):
            if k == 0:
                return zero
            if top_p is not None and k == top_p.dim:
                return top_p
            return Fp[k]

        def emap(X):
            x = X.dim
            a = max([t for t in ends if t < x], default=0)
            above = [t for t in ends if t > x]
            if above:
                b = min(above)
                return span(intersect(self.perp(X), Up(b)), Up(a))
            Ua = Up(a)
            return span(Ua, intersect(X, self.perp(Ua)))

        return emap

    def neighbours(self, C, i):
        n = self.rank
        if i <= n - 2:
            lo = C[i - 2] if i >= 2 else Subspace.zero(self.n, self.q)
            hi = C[i]
            pos = i - 1
        else:
            gens = self.generators_through(C[n - 2])
            lo, hi, pos = C[n - 3], gens[(2 * n - 1) - i], n - 2
        out = []
        for v in point_vectors_between(lo, hi):
            X = span(lo, v)
            if X != C[pos]:
                out.append(C[:pos] + (X,) + C[pos + 1 :])
        return out


def make_geometry(tag: str, q: int) -> Geometry:
    """``A2``/``A3`` -> PG(r, q); ``D4``/``D5`` -> hyperbolic quadric of that Witt index."""
    tag = tag.strip().upper()
    fam, rank = tag[0], int(tag[1:])
    if fam == "A":
        return ProjectiveGeometry(rank, q)
    if fam == "D":
        return HyperbolicQuadric(rank, q)
    raise GeometryError(f"unsupported geometry {tag!r}")


# ---------------------------------------------------------------------------
# chamber graph and the gallery-distance oracle
# ---------------------------------------------------------------------------


class ChamberSystem:
    """All chambers with vertex ids per type and the dense adjacency array
    (row c lists the chambers adjacent to c, padded with -1)."""

    def __init__(self, geom: Geometry, chambers: list[Chain]):
        self.geom = geom
        self.chambers = chambers
        self.index = {C: k for k, C in enumerate(chambers)}
        types = list(geom.diagram.nodes)
        vid: dict[Subspace, int] = {}
        vt = np.empty((len(chambers), len(types)), dtype=np.int64)
        for c, C in enumerate(chambers):
            V = geom.chamber_flag(C)
            for k, t in enumerate(types):
                vt[c, k] = vid.setdefault(V[t], len(vid))
        self.vertex_id = vid
        self.vertex_table = vt
        self.types = types
        self.adj = self._adjacency(vt)

    def _adjacency(self, vt: np.ndarray) -> np.ndarray:
        N, r = vt.shape
        q = self.geom.q
        adj = np.full((N, r * q), -1, dtype=np.int64)
        for k in range(r):
            keys = np.delete(vt, k, axis=1)
            order = np.lexsort(keys.T[::-1])
            sk = keys[order]
            brk = np.nonzero(np.any(sk[1:] != sk[:-1], axis=1))[0] + 1
            for grp in np.split(order, brk):
                for c in grp:
                    others = grp[grp != c]
                    adj[c, k * q : k * q + len(others)] = others
        return adj

    def __len__(self) -> int:
        return len(self.chambers)

    def distances(self, c: int) -> np.ndarray:
        return _kernels.bfs(self.adj, c)

    def residue_ids(self, F: Flag) -> np.ndarray:
        mask = np.ones(len(self.chambers), dtype=bool)
        for t, S in F.parts:
            v = self.vertex_id.get(S)
            if v is None:
                return np.zeros(0, dtype=np.int64)
            mask &= self.vertex_table[:, self.types.index(t)] == v
        return np.nonzero(mask)[0]

    def panel_sizes(self) -> set[int]:
        per = self.adj.reshape(len(self.chambers), len(self.types), self.geom.q)
        return set(((per >= 0).sum(axis=2) + 1).ravel().tolist())


def _cache_path(geom: Geometry) -> Optional[str]:
    d = os.environ.get("PROJLENS_CACHE_DIR")
    if not d:
        return None
    return os.path.join(d, f"chambers-{geom.tag}-q{geom.q}-v{CACHE_VERSION}.npz")


def _save_chambers(path: str, geom: Geometry, chambers: list[Chain]) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    mats = np.array([[np.array(X.rows).ravel().tolist() + [0] * ((geom.chain_length - X.dim) * geom.n) for X in C] for C in chambers], dtype=np.int8)
    np.savez_compressed(path, tag=geom.tag, q=geom.q, count=len(chambers), mats=mats)


def _load_chambers(path: str, geom: Geometry) -> Optional[list[Chain]]:
    try:
        data = np.load(path)
    except (OSError, ValueError):
        return None
    if str(data["tag"]) != geom.tag or int(data["q"]) != geom.q:
        return None
    out = []
    n = geom.n
    for row in data["mats"]:
        C = []
        for k, flat in enumerate(row, start=1):
            rows = tuple(tuple(int(x) for x in flat[i * n : (i + 1) * n]) for i in range(k))
            C.append(Subspace(rows, n, geom.q))
        out.append(tuple(C))
    return out


@lru_cache(maxsize=8)
def chamber_graph(geom: Geometry) -> ChamberSystem:
    geom.guard()
    path = _cache_path(geom)
    chambers = _load_chambers(path, geom) if path and os.path.exists(path) else None
    if chambers is None:
        chambers = geom.residue_chambers()
        if path:
            _save_chambers(path, geom, chambers)
    return ChamberSystem(geom, chambers)


def gallery_projection_oracle(geom: Geometry, Fp: Flag, C: Chain) -> Chain:
    """The unique chamber containing Fp nearest to C, found by BFS."""
    cs = chamber_graph(geom)
    ids = cs.residue_ids(Fp)
    if ids.size == 0:
        raise GeometryError("no chamber contains the flag")
    dist = cs.distances(cs.index[C])[ids]
    best = dist.min()
    winners = ids[dist == best]
    if winners.size != 1:
        raise GeometryError(f"projection not unique ({winners.size} chambers at distance {best})")
    return cs.chambers[int(winners[0])]


def all_types(geom: Geometry) -> list[TypeSet]:
    nodes = geom.diagram.nodes
    return [frozenset(c) for k in range(1, len(nodes) + 1) for c in itertools.combinations(nodes, k)]


@dataclass
class OracleReport:
    geometry: str
    q: int
    checked: int
    mismatches: int
    exhaustive: bool
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def oracle_check(geom: Geometry, samples: int, seed: int = 0) -> OracleReport:
    """Compare perspectivities with the gallery oracle on random (F, F', C),
    cycling through every nonempty type."""
    rng = np.random.default_rng(seed)
    types = all_types(geom)
    bad = 0
    for s in range(samples):
        F = geom.random_flag(types[s % len(types)], rng)
        Fp = geom.random_opposite([F], rng)
        C = geom.random_chamber(rng, F)
        bad += geom.perspectivity(F, Fp)(C) != gallery_projection_oracle(geom, Fp, C)
    return OracleReport(repr(geom), geom.q, samples, int(bad), False, seed)


def exhaustive_oracle_check(geom: Geometry) -> OracleReport:
    """Every opposite pair of flags of every type, every chamber of Res(F)."""
    checked = bad = 0
    for J in all_types(geom):
        flags = geom.enumerate_flags(J)
        opp = flags if geom.opposite_type(J) == J else geom.enumerate_flags(geom.opposite_type(J))
        for F in flags:
            res = geom.residue_chambers(F)
            for Fp in opp:
                if not geom.is_opposite(F, Fp):
                    continue
                P = geom.perspectivity(F, Fp, check=False)
                for C in res:
                    checked += 1
                    bad += P(C) != gallery_projection_oracle(geom, Fp, C)
    return OracleReport(repr(geom), geom.q, checked, int(bad), True)
