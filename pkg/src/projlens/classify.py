"""Diagram-level decisions: self-opposition, polar-closed types, the residual
duality map and the index n(J) = [Pi : Pi+]."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .diagram import Diagram, DiagramError, DiagramMap, TypeSet, components, induced
from .roots import opposition, polar_type

NOT_SELF_OPPOSITE = "NOT_SELF_OPPOSITE"
POLAR_CLOSED = "POLAR_CLOSED"
DUALITY = "DUALITY"
PANEL = "PANEL"
UNRESOLVED = "UNRESOLVED"

FILTERS = (
    "all-proper-nonempty",
    "self-opposite",
    "polar-closed",
    "self-opposite-with-big-component",
    "n-equals-2",
)


@dataclass(frozen=True)
class Verdict:
    n: int | str  # 1, 2 or "unresolved"
    decided_by: str
    delta: Optional[DiagramMap]
    self_opposite: bool
    polar_closed: bool
    witness: Optional[tuple[TypeSet, ...]] = None

    @property
    def resolved(self) -> bool:
        return self.n != "unresolved"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "decided_by": self.decided_by,
            "delta": None if self.delta is None else {str(k): v for k, v in sorted(self.delta.items())},
            "self_opposite": self.self_opposite,
            "polar_closed": self.polar_closed,
            "witness": None if self.witness is None else [sorted(p) for p in self.witness],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        delta = None if d["delta"] is None else {int(k): v for k, v in d["delta"].items()}
        witness = None if d["witness"] is None else tuple(frozenset(p) for p in d["witness"])
        return cls(d["n"], d["decided_by"], delta, d["self_opposite"], d["polar_closed"], witness)


def _as_set(d: Diagram, J: Iterable[int]) -> TypeSet:
    J = frozenset(J)
    if not J <= set(d.nodes):
        raise DiagramError(f"types {sorted(J - set(d.nodes))} not in the diagram")
    return J


def self_opposite(d: Diagram, J: Iterable[int]) -> bool:
    J = _as_set(d, J)
    op = opposition(d)
    return frozenset(op[i] for i in J) == J


def polar_types_of(d: Diagram) -> set[TypeSet]:
    return {polar_type(induced(d, comp)) for comp in components(d)}


@lru_cache(maxsize=None)
def _polar_closed_search(d: Diagram, J: TypeSet) -> Optional[tuple[TypeSet, ...]]:
    nodes = frozenset(d.nodes)
    memo: dict[TypeSet, Optional[tuple[TypeSet, ...]]] = {}

    def search(removed: TypeSet):
        if removed == J:
            return ()
        if removed in memo:
            return memo[removed]
        memo[removed] = None
        residue = induced(d, nodes - removed)
        for p in sorted(polar_types_of(residue), key=lambda s: sorted(s)):
            if p <= J - removed:
                rest = search(removed | p)
                if rest is not None:
                    memo[removed] = (p,) + rest
                    break
        return memo[removed]

    return search(frozenset())


def is_polar_closed(d: Diagram, J: Iterable[int]) -> tuple[bool, Optional[tuple[TypeSet, ...]]]:
    """Exhaustive search for an ordered partition J_1, ..., J_k of J in which
    every J_l is a polar type of the residue left after removing the earlier
    parts.  Returns the partition as witness."""
    J = _as_set(d, J)
    w = _polar_closed_search(d, J)
    return w is not None, w


def residual_opposition(d: Diagram, J: Iterable[int]) -> DiagramMap:
    J = _as_set(d, J)
    rest = [v for v in d.nodes if v not in J]
    if not rest:
        return {}
    return opposition(induced(d, rest))


def delta_map(d: Diagram, J: Iterable[int]) -> DiagramMap:
    """Type map on the cotype induced by one perspectivity: i -> (i^op)^op_F."""
    J = _as_set(d, J)
    if not self_opposite(d, J):
        raise DiagramError(f"{sorted(J)} is not self-opposite")
    op = opposition(d)
    res = residual_opposition(d, J)
    return {i: res[op[i]] for i in d.nodes if i not in J}


def n_of(d: Diagram, J: Iterable[int]) -> Verdict:
    J = _as_set(d, J)
    if not J or J == frozenset(d.nodes):
        raise DiagramError("J must be nonempty and proper")
    so = self_opposite(d, J)
    pc, witness = is_polar_closed(d, J)
    if not so:
        return Verdict(1, NOT_SELF_OPPOSITE, None, False, pc, witness)
    delta = delta_map(d, J)
    if pc:
        return Verdict(1, POLAR_CLOSED, delta, True, True, witness)
    if any(delta[i] != i for i in delta):
        return Verdict(2, DUALITY, delta, True, False, None)
    if len(delta) == 1:
        return Verdict(1, PANEL, delta, True, False, None)
    return Verdict("unresolved", UNRESOLVED, delta, True, False, None)


def type_from_mask(d: Diagram, mask: int) -> TypeSet:
    return frozenset(v for k, v in enumerate(d.nodes) if mask >> k & 1)


def has_big_cotype_component(d: Diagram, J: Iterable[int]) -> bool:
    J = frozenset(J)
    rest = induced(d, [v for v in d.nodes if v not in J])
    return any(len(c) >= 2 for c in components(rest))


def enumerate_types(d: Diagram, filter: str = "all-proper-nonempty") -> tuple[int, list[TypeSet]]:
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; choose from {', '.join(FILTERS)}")
    out = []
    for mask in range(1, (1 << d.rank) - 1):
        J = type_from_mask(d, mask)
        if filter == "all-proper-nonempty":
            keep = True
        elif filter == "self-opposite":
            keep = self_opposite(d, J)
        elif filter == "polar-closed":
            keep = is_polar_closed(d, J)[0]
        elif filter == "self-opposite-with-big-component":
            keep = self_opposite(d, J) and has_big_cotype_component(d, J)
        else:
            keep = n_of(d, J).n == 2
        if keep:
            out.append(J)
    return len(out), out


def _kernel_holds(d: Diagram, J: TypeSet, op: DiagramMap, mode: str) -> bool:
    K = [v for v in d.nodes if v not in J]
    res = induced(d, K)
    if mode == "overline":
        K = [v for c in components(res) if len(c) >= 2 for v in c]
        if not K:
            return True
        res = induced(d, K)
    elif not K:
        return True
    op_res = opposition(res)
    return all(op_res[i] == op[i] for i in K)


def smallest_opposition_kernel(d: Diagram, mode: str = "cotype") -> tuple[TypeSet, bool]:
    """Smallest nonempty J (ascending size, then bitmask) such that opposition of
    the cotype diagram agrees with the ambient opposition.

    ``mode="cotype"`` compares on the whole cotype, so isolated cotype nodes must
    be fixed by the ambient opposition.  ``mode="overline"`` compares only on the
    union of cotype components of size at least 2.
    """
    if mode not in ("cotype", "overline"):
        raise ValueError(mode)
    op = opposition(d)
    for size in range(1, d.rank + 1):
        hits = [
            J
            for mask in range(1, 1 << d.rank)
            if bin(mask).count("1") == size
            for J in [type_from_mask(d, mask)]
            if _kernel_holds(d, J, op, mode)
        ]
        if hits:
            return hits[0], len(hits) == 1
    raise AssertionError("J = I always qualifies")
