"""Projectivity groups of a flag in a finite building, as permutation groups
on the chambers of its residue, and the induced action of the flag
stabiliser in the little projective group (type A)."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .fingeo import Chain, Flag, Geometry, GeometryError, ProjectiveGeometry
from .gf import Subspace, all_subspaces
from .perm import PermGroup, identity, inverse

MAX_DOMAIN = 10**4


@dataclass
class ResidueDomain:
    """The chambers of Res(F) in a fixed order, with their free chain members
    (those not pinned by F) numbered as elements."""

    geom: Geometry
    flag: Flag
    chambers: list[Chain]
    elements: list[Subspace]
    element_id: dict[Subspace, int]
    table: np.ndarray  # (chambers, free positions) -> element id
    free_positions: list[int]
    _codes: np.ndarray = field(repr=False, default=None)
    _order: np.ndarray = field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.chambers)

    def _encode(self, rows: np.ndarray) -> np.ndarray:
        base = len(self.elements) + 1
        code = np.zeros(rows.shape[0], dtype=np.int64)
        for j in range(rows.shape[1]):
            code = code * base + rows[:, j]
        return code

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Chamber indices for rows of element ids in free-position order."""
        if self._codes is None:
            codes = self._encode(self.table)
            self._order = np.argsort(codes)
            self._codes = codes[self._order]
        c = self._encode(rows)
        pos = np.searchsorted(self._codes, c)
        if (pos >= len(self._codes)).any() or (self._codes[np.minimum(pos, len(self._codes) - 1)] != c).any():
            raise GeometryError("image is not a chamber of the residue")
        return self._order[pos]

    def index(self, C: Chain) -> int:
        row = np.array([[self.element_id[C[k - 1]] for k in self.free_positions]], dtype=np.int64)
        return int(self.lookup(row)[0])


def residue_domain(geom: Geometry, F: Flag) -> ResidueDomain:
    chambers = geom.residue_chambers(F)
    if len(chambers) > MAX_DOMAIN:
        raise GeometryError(f"residue has {len(chambers)} chambers, above the cap {MAX_DOMAIN}")
    fixed, _ = geom._fixed_chain(F)
    free = [k for k in range(1, geom.chain_length + 1) if k not in fixed]
    eid: dict[Subspace, int] = {}
    table = np.empty((len(chambers), len(free)), dtype=np.int64)
    for c, C in enumerate(chambers):
        for j, k in enumerate(free):
            table[c, j] = eid.setdefault(C[k - 1], len(eid))
    elements = [None] * len(eid)
    for X, i in eid.items():
        elements[i] = X
    return ResidueDomain(geom, F, chambers, elements, eid, table, free)


@dataclass
class ProjectivityWord:
    flags: list[Flag]
    perm: np.ndarray
    element_perm: np.ndarray  # action on the free chain members

    @property
    def length(self) -> int:
        return len(self.flags) - 1

    @property
    def parity(self) -> int:
        return self.length % 2


def _element_images(geom: Geometry, dom: ResidueDomain, word: Sequence[Flag]) -> list[Subspace]:
    images = list(dom.elements)
    for F, G in zip(word[:-1], word[1:]):
        P = geom.perspectivity(F, G)
        images = [P.element(X) for X in images]
    return images


def self_projectivity(geom: Geometry, dom: ResidueDomain, word: Sequence[Flag]) -> ProjectivityWord:
    """Compose the perspectivities along a closed word F = F_0, ..., F_l = F."""
    word = list(word)
    if word[0] != dom.flag or word[-1] != dom.flag:
        raise GeometryError("the word must start and end at the base flag")
    for F, G in zip(word[:-1], word[1:]):
        if not geom.is_opposite(F, G):
            raise GeometryError("consecutive flags of the word are not opposite")
    if len(word) == 1:
        return ProjectivityWord(word, identity(len(dom)), identity(len(dom.elements)))
    images = _element_images(geom, dom, word)
    emap = np.array([dom.element_id[Y] for Y in images], dtype=np.int64)
    dims = np.array([X.dim for X in dom.elements], dtype=np.int64)
    mapped = emap[dom.table]
    order = np.argsort(dims[mapped], axis=1, kind="stable")
    rows = np.take_along_axis(mapped, order, axis=1)
    perm = dom.lookup(rows)
    return ProjectivityWord(word, perm.astype(np.int64), emap)


def induced_type_map(geom: Geometry, dom: ResidueDomain, perm: np.ndarray) -> dict[int, int]:
    """Type map on the cotype induced by a residue permutation, read off from
    the images of one chamber and its neighbours."""
    cot = sorted(set(geom.diagram.nodes) - dom.flag.types)
    C0 = dom.chambers[0]
    V0 = geom.chamber_flag(dom.chambers[int(perm[0])])
    out = {}
    for i in cot:
        C1 = geom.neighbours(C0, i)[0]
        V1 = geom.chamber_flag(dom.chambers[int(perm[dom.index(C1)])])
        diff = [t for t in cot if V0[t] != V1[t]]
        assert len(diff) == 1
        out[i] = diff[0]
    return out


@dataclass
class ProjectivityGroups:
    pi_plus: PermGroup
    pi: PermGroup
    odd_exists: bool
    odd_duality: bool
    walks: int
    seed: int
    budget: int
    domain: int
    type_maps: list[dict[int, int]] = field(default_factory=list)
    triangle: Optional[ProjectivityWord] = None

    @property
    def index(self) -> int:
        return self.pi.order() // self.pi_plus.order()

    def report(self) -> dict:
        return {
            "domain": self.domain,
            "pi_plus_order": self.pi_plus.order(),
            "pi_order": self.pi.order(),
            "index": self.index,
            "odd_duality": self.odd_duality,
            "seed": self.seed,
            "budget": self.budget,
        }

    def to_json(self) -> str:
        return json.dumps(self.report(), sort_keys=True)


def generate_projectivity_groups(
    geom: Geometry,
    F: Flag,
    budget: int = 200,
    seed: int = 0,
    batch: int = 8,
    patience: int = 5,
    dom: Optional[ResidueDomain] = None,
) -> ProjectivityGroups:
    """Sample closed walks of lengths 3 and 4 through random opposite flags.

    Pi is generated by every sampled walk.  Pi+ is generated by the length-4
    walks and by rho_0^-1 rho_i for the length-3 walks rho_i.  Sampling stops
    once both orders survive ``patience`` batches unchanged, or after
    ``budget`` walks.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    rng = np.random.default_rng(seed)
    dom = dom or residue_domain(geom, F)
    N = len(dom)
    odd_ok = geom.opposite_type(F.types) == F.types
    pi_plus = PermGroup([], degree=N, seed=seed)
    pi = PermGroup([], degree=N, seed=seed)
    rho0_inv = None
    triangle = None
    type_maps: list[dict[int, int]] = []
    odd_duality = False
    walks = 0
    quiet = 0
    last = (1, 1)
    while walks < budget and quiet < patience:
        plus_gens, all_gens = [], []
        for _ in range(min(batch, budget - walks)):
            if odd_ok and walks % 2 == 0:
                F1 = geom.random_opposite([F], rng)
                F2 = geom.random_opposite([F1, F], rng)
                w = self_projectivity(geom, dom, [F, F1, F2, F])
                tm = induced_type_map(geom, dom, w.perm)
                type_maps.append(tm)
                odd_duality |= any(k != v for k, v in tm.items())
                if rho0_inv is None:
                    rho0_inv = inverse(w.perm)
                    triangle = w
                else:
                    plus_gens.append(w.perm[rho0_inv])  # rho0^-1 then rho_i
            else:
                F1 = geom.random_opposite([F], rng)
                F2 = geom.random_opposite([F1], rng)
                F3 = geom.random_opposite([F2, F], rng)
                w = self_projectivity(geom, dom, [F, F1, F2, F3, F])
                plus_gens.append(w.perm)
            all_gens.append(w.perm)
            walks += 1
        pi_plus.extend(plus_gens)
        pi.extend(all_gens)
        cur = (pi_plus.order(), pi.order())
        quiet = quiet + 1 if cur == last else 0
        last = cur
    return ProjectivityGroups(
        pi_plus, pi, odd_ok, odd_duality, walks, seed, budget, N, type_maps, triangle
    )


# ---------------------------------------------------------------------------
# stabiliser of a flag in the little projective group (type A)
# ---------------------------------------------------------------------------


def elementary_transvections(n: int, q: int) -> list[np.ndarray]:
    out = []
    for i, j in itertools.permutations(range(n), 2):
        M = np.eye(n, dtype=np.int64)
        M[i, j] = 1
        out.append(M)
    return out


def subspace_universe(geom: ProjectiveGeometry) -> list[Subspace]:
    return [S for k in range(1, geom.rank + 1) for S in all_subspaces(geom.n, k, geom.q)]


def matrix_action(mats: Sequence[np.ndarray], points: Sequence[Subspace], q: int) -> list[np.ndarray]:
    """Permutations induced by M (acting on row vectors) on a list of subspaces."""
    idx = {S: k for k, S in enumerate(points)}
    out = []
    for M in mats:
        p = np.empty(len(points), dtype=np.int64)
        for k, S in enumerate(points):
            p[k] = idx[Subspace.from_rows((S.matrix @ M) % q, q, S.n)]
        out.append(p)
    return out


def induced_stabiliser_group(geom: Geometry, F: Flag, dom: Optional[ResidueDomain] = None) -> PermGroup:
    """Stabiliser of F in the group generated by elementary transvections,
    acting on the chambers of Res(F)."""
    if not isinstance(geom, ProjectiveGeometry) or geom.rank > 3 or geom.q not in (2, 3):
        raise GeometryError("supported for PG(r, q) with r <= 3 and q in {2, 3}")
    dom = dom or residue_domain(geom, F)
    universe = subspace_universe(geom)
    idx = {S: k for k, S in enumerate(universe)}
    gens = matrix_action(elementary_transvections(geom.n, geom.q), universe, geom.q)
    prefix = [idx[S] for _, S in F.parts]
    G = PermGroup(gens, degree=len(universe), base_prefix=prefix)
    stab = G.pointwise_stabilizer_generators(len(prefix))
    # element id -> universe index, and back
    to_u = np.array([idx[X] for X in dom.elements], dtype=np.int64)
    from_u = np.full(len(universe), -1, dtype=np.int64)
    from_u[to_u] = np.arange(len(to_u))
    induced = []
    for g in stab:
        e = from_u[g[to_u]]
        if (e < 0).any():
            raise GeometryError("stabiliser element leaves the residue")
        induced.append(dom.lookup(e[dom.table]))
    return PermGroup(induced, degree=len(dom))


def is_absolute_duality(dom: ResidueDomain, word: ProjectivityWord) -> bool:
    """True if the word swaps the lowest and highest free members and every
    lowest one is incident with its image ("each point is absolute")."""
    dims = [X.dim for X in dom.elements]
    lo, hi = min(dims), max(dims)
    if lo == hi:
        return False
    for k, X in enumerate(dom.elements):
        if X.dim != lo:
            continue
        Y = dom.elements[int(word.element_perm[k])]
        if Y.dim != hi or not X <= Y:
            return False
    return True
