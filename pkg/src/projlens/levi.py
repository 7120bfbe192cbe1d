"""Block-matrix Levi decomposition P_F = U_F L_F in GL_{d+1}(q) for flags of
PG(d, q) with irreducible residue, and brute-force checks of the unipotent
radical's sharply transitive action on opposite flags.

Matrices act on column vectors, so a flag is standard when its part of type
t is spanned by the first t basis vectors.  Subspaces in :mod:`gf` are row
spaces; the image of S under M is therefore ``S.matrix @ M.T``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .fingeo import Flag, GeometryError, ProjectiveGeometry
from .gf import Subspace, check_field, complement_basis, det_mod, matrix_inverse

ENUM_GUARD = 2 * 10**5


class LeviError(ValueError):
    pass


@dataclass(frozen=True)
class BlockPattern:
    d1: int
    d2: int
    d3: int

    @property
    def size(self) -> int:
        return self.d1 + self.d2 + self.d3

    @property
    def d(self) -> int:
        return self.size - 1

    @property
    def types(self) -> frozenset[int]:
        d = self.d
        return frozenset(range(1, self.d1 + 1)) | frozenset(range(d - self.d3 + 1, d + 1))

    def _blocks(self):
        a, b = self.d1, self.d1 + self.d2
        return (slice(0, a), slice(a, b), slice(b, self.size))

    @property
    def p_mask(self) -> np.ndarray:
        """Entries allowed to be nonzero in P_F."""
        m = np.triu(np.ones((self.size, self.size), dtype=bool))
        _, s2, _ = self._blocks()
        m[s2, s2] = True
        return m

    @property
    def u_mask(self) -> np.ndarray:
        """Free off-diagonal entries of U_F (its diagonal is 1)."""
        m = np.triu(np.ones((self.size, self.size), dtype=bool), 1)
        _, s2, _ = self._blocks()
        m[s2, s2] = False
        return m

    @property
    def l_mask(self) -> np.ndarray:
        m = np.eye(self.size, dtype=bool)
        _, s2, _ = self._blocks()
        m[s2, s2] = True
        return m

    def in_P(self, M: np.ndarray, q: int) -> bool:
        return not (M % q)[~self.p_mask].any() and det_mod(M, q) != 0

    def in_U(self, M: np.ndarray, q: int) -> bool:
        M = M % q
        off = ~self.u_mask & ~np.eye(self.size, dtype=bool)
        return not M[off].any() and bool((np.diag(M) == 1).all())

    def in_L(self, M: np.ndarray, q: int) -> bool:
        return not (M % q)[~self.l_mask].any() and det_mod(M, q) != 0


def parabolic_masks(d: int, J: Iterable[int]) -> BlockPattern:
    """Pattern for J = {1..d1} u {d-d3+1..d}; d1 is taken as large as possible."""
    J = frozenset(int(j) for j in J)
    if not J or not J <= set(range(1, d + 1)):
        raise LeviError(f"J must be a nonempty subset of 1..{d}")
    d1 = 0
    while d1 + 1 in J:
        d1 += 1
    d3 = len(J) - d1
    pat = BlockPattern(d1, d + 1 - d1 - d3, d3)
    if pat.types != J:
        raise LeviError(f"J = {sorted(J)} is not of the form {{1..d1}} u {{d-d3+1..d}}")
    return pat


def levi_factorization(M, pattern: BlockPattern, q: int) -> tuple[np.ndarray, np.ndarray]:
    """The unique M = U L with U in U_F and L in L_F."""
    M = np.asarray(M, dtype=np.int64) % q
    if M.shape != (pattern.size, pattern.size) or not pattern.in_P(M, q):
        raise LeviError("matrix is not in P_F")
    L = np.where(pattern.l_mask, M, 0)
    U = (M @ matrix_inverse(L, q)) % q
    return U, L


# ---------------------------------------------------------------------------
# enumeration


def enumerate_masked(mask: np.ndarray, q: int, diag_one: bool = False) -> Iterator[np.ndarray]:
    """All matrices supported on ``mask`` (diagonal forced to 1 if asked)."""
    n = mask.shape[0]
    free = [(i, j) for i in range(n) for j in range(n) if mask[i, j] and not (diag_one and i == j)]
    if q ** len(free) > ENUM_GUARD:
        raise LeviError("enumeration above guard")
    base = np.eye(n, dtype=np.int64) if diag_one else np.zeros((n, n), dtype=np.int64)
    for vals in itertools.product(range(q), repeat=len(free)):
        M = base.copy()
        for (i, j), v in zip(free, vals):
            M[i, j] = v
        yield M


def unipotent_radical(pattern: BlockPattern, q: int) -> list[np.ndarray]:
    return list(enumerate_masked(pattern.u_mask, q, diag_one=True))


def levi_subgroup(pattern: BlockPattern, q: int) -> list[np.ndarray]:
    return [M for M in enumerate_masked(pattern.l_mask, q) if det_mod(M, q)]


def general_linear(n: int, q: int) -> list[np.ndarray]:
    full = np.ones((n, n), dtype=bool)
    return [M for M in enumerate_masked(full, q) if det_mod(M, q)]


def standard_flag(d: int, J: Iterable[int], q: int) -> Flag:
    I = np.eye(d + 1, dtype=np.int64)
    return Flag.of({t: Subspace.from_rows(I[:t], q) for t in J})


def act(M: np.ndarray, S: Subspace) -> Subspace:
    return Subspace.from_rows((S.matrix @ M.T) % S.q, S.q, S.n)


def act_flag(M: np.ndarray, F: Flag) -> Flag:
    return Flag(tuple((t, act(M, S)) for t, S in F.parts))


def adapted_basis(F: Flag) -> np.ndarray:
    """Matrix E whose first t columns span the type t part of F, for t in typ(F)."""
    parts = [S for _, S in F.parts]
    n, q = parts[0].n, parts[0].q
    cols = []
    prev = Subspace.zero(n, q)
    for S in parts + [Subspace.whole(n, q)]:
        for v in complement_basis(prev, S):
            cols.append(v)
        prev = S
    return np.array(cols, dtype=np.int64).T


def stabiliser_by_enumeration(F: Flag, q: int) -> list[np.ndarray]:
    n = F.parts[0][1].n
    return [M for M in general_linear(n, q) if act_flag(M, F) == F]


@dataclass
class LeviReport:
    d: int
    q: int
    types: list[int]
    blocks: tuple[int, int, int]
    p_order: int
    u_order: int
    l_order: int
    opposite_flags: int
    orbit_hits_once: bool
    fixes_residue: bool
    factorization_ok: bool
    mask_matches_stabiliser: bool

    @property
    def ok(self) -> bool:
        return (
            self.u_order == self.opposite_flags
            and self.orbit_hits_once
            and self.fixes_residue
            and self.factorization_ok
            and self.mask_matches_stabiliser
            and self.p_order == self.u_order * self.l_order
        )

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["blocks"] = list(self.blocks)
        out["ok"] = self.ok
        return out


def unipotent_transitivity_check(geom: ProjectiveGeometry, q: int, F: Flag) -> LeviReport:
    """Brute-force checks that U_F is regular on flags opposite F and fixes Res(F)."""
    if not isinstance(geom, ProjectiveGeometry):
        raise GeometryError("type A geometries only")
    q = check_field(q)
    if q != geom.q:
        raise GeometryError("field does not match the geometry")
    d = geom.rank
    pat = parabolic_masks(d, F.types)
    E = adapted_basis(F)
    Einv = matrix_inverse(E, q)

    def conj(M):
        return (E @ M @ Einv) % q

    U = [conj(u) for u in unipotent_radical(pat, q)]
    L = levi_subgroup(pat, q)
    # P_F from its mask, against the stabiliser found by brute force
    P_std = [M for M in enumerate_masked(pat.p_mask, q) if det_mod(M, q)]
    std = standard_flag(d, F.types, q)
    stab = stabiliser_by_enumeration(std, q)
    key = lambda M: M.tobytes()
    mask_ok = {key(M) for M in P_std} == {key(M) for M in stab}
    # factorization exists, recomposes and is unique
    fact_ok = True
    products = set()
    U_std = unipotent_radical(pat, q)
    for M in P_std:
        u, l = levi_factorization(M, pat, q)
        fact_ok &= pat.in_U(u, q) and pat.in_L(l, q) and np.array_equal((u @ l) % q, M)
    for u in U_std:
        for l in L:
            products.add(key((u @ l) % q))
    fact_ok &= len(products) == len(U_std) * len(L) == len(P_std)
    # opposite flags and the orbit of one of them
    oppJ = geom.opposite_type(F.types)
    opposite = [G for G in geom.enumerate_flags(oppJ) if geom.is_opposite(F, G)]
    G0 = opposite[0]
    images = [act_flag(u, G0) for u in U]
    hits = {}
    for Gi in images:
        hits[Gi] = hits.get(Gi, 0) + 1
    once = set(hits) == set(opposite) and all(v == 1 for v in hits.values())
    # pointwise fixing of the residue
    fixes = all(act(u, X) == X for u in U for C in geom.residue_chambers(F) for X in C)
    return LeviReport(
        d, q, sorted(F.types), (pat.d1, pat.d2, pat.d3), len(P_std), len(U), len(L),
        len(opposite), once, fixes, bool(fact_ok), mask_ok,
    )
