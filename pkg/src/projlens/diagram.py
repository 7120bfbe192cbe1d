"""Simply laced Coxeter diagrams with Bourbaki labels.

Node labels are arbitrary positive integers; only :func:`make_diagram` emits
the canonical Bourbaki labelling.  Subdiagrams keep the labels of the ambient
diagram, so a residue of ``E_7`` is still written in ``E_7`` labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

TypeSet = frozenset  # a set of node labels
DiagramMap = dict  # node -> node


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    family_hint: tuple[str, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        nodes = tuple(sorted(set(self.nodes)))
        edges = frozenset(tuple(sorted(e)) for e in self.edges)
        for i, j in edges:
            if i == j or i not in nodes or j not in nodes:
                raise DiagramError(f"bad edge {i}-{j}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def neighbours(self, v: int) -> set[int]:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_connected(self) -> bool:
        return len(components(self)) <= 1

    def to_json(self) -> str:
        d = {"nodes": list(self.nodes), "edges": [list(e) for e in sorted(self.edges)]}
        if self.family_hint is not None:
            d["family"], d["rank"] = self.family_hint
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        d = json.loads(text)
        hint = (d["family"], d["rank"]) if "family" in d else None
        return cls(tuple(d["nodes"]), frozenset(tuple(e) for e in d["edges"]), hint)

    def __str__(self) -> str:
        if self.family_hint:
            return f"{self.family_hint[0]}{self.family_hint[1]}"
        return f"Diagram(nodes={list(self.nodes)}, edges={sorted(self.edges)})"


def make_diagram(family: str, rank: int) -> Diagram:
    family = family.upper()
    if family == "A":
        if rank < 1:
            raise DiagramError("A_n needs n >= 1")
        edges = [(i, i + 1) for i in range(1, rank)]
    elif family == "D":
        if rank < 4:
            raise DiagramError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    elif family == "E":
        if rank not in (6, 7, 8):
            raise DiagramError("E_n needs n in {6, 7, 8}")
        edges = [(1, 3), (2, 4)] + [(i, i + 1) for i in range(3, rank)]
    else:
        raise DiagramError(f"unknown family {family!r}")
    return Diagram(tuple(range(1, rank + 1)), frozenset(edges), (family, rank))


def parse_family(token: str, rank: int | None = None) -> tuple[str, int]:
    """Accept ``E7`` or (``E``, 7)."""
    token = token.strip().upper()
    if len(token) > 1:
        return token[0], int(token[1:])
    if rank is None:
        raise DiagramError(f"family {token!r} given without a rank")
    return token, int(rank)


def induced(d: Diagram, S: Iterable[int]) -> Diagram:
    S = frozenset(S)
    if not S <= set(d.nodes):
        raise DiagramError(f"{sorted(S - set(d.nodes))} not nodes of the diagram")
    return Diagram(tuple(S), frozenset(e for e in d.edges if e[0] in S and e[1] in S))


def components(d: Diagram) -> list[TypeSet]:
    seen: set[int] = set()
    out = []
    for v in d.nodes:
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in d.neighbours(x):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return sorted(out, key=min)


def _shape(d: Diagram) -> tuple[str, int]:
    n = d.rank
    if n == 0:
        raise DiagramError("empty diagram")
    if len(d.edges) != n - 1 or len(components(d)) != 1:
        raise DiagramError("diagram is not a connected tree")
    degs = {v: d.degree(v) for v in d.nodes}
    if max(degs.values(), default=0) <= 2:
        return "A", n
    branch_nodes = [v for v, k in degs.items() if k >= 3]
    if len(branch_nodes) != 1 or degs[branch_nodes[0]] != 3:
        raise DiagramError("not an A/D/E shape")
    c = branch_nodes[0]
    lengths = []
    for start in d.neighbours(c):
        length, prev, cur = 1, c, start
        while True:
            nxt = [y for y in d.neighbours(cur) if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    lengths.sort()
    if lengths[0] == 1 and lengths[1] == 1:
        return "D", n
    if lengths[:2] == [1, 2] and lengths[2] in (2, 3, 4):
        return "E", n
    raise DiagramError(f"branch lengths {lengths} are not of A/D/E type")


def _isomorphisms(src: Diagram, dst: Diagram):
    """All graph isomorphisms src -> dst (backtracking; diagrams are tiny)."""
    order = list(src.nodes)
    # visit in BFS order so each new node has an already-mapped neighbour
    if order:
        start = order[0]
        order, seen = [start], {start}
        i = 0
        while i < len(order):
            for y in sorted(src.neighbours(order[i])):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
            i += 1
    dst_deg = {v: dst.degree(v) for v in dst.nodes}

    def extend(k, phi, used):
        if k == len(order):
            yield dict(phi)
            return
        v = order[k]
        for w in dst.nodes:
            if w in used or dst_deg[w] != src.degree(v):
                continue
            if all(src.adjacent(v, u) == dst.adjacent(w, phi[u]) for u in phi):
                phi[v] = w
                used.add(w)
                yield from extend(k + 1, phi, used)
                del phi[v]
                used.discard(w)

    yield from extend(0, {}, set())


def classify_shape(d: Diagram) -> tuple[str, int, DiagramMap]:
    """Family, rank and a relabelling onto the Bourbaki diagram.

    Among all isomorphisms the one with lexicographically smallest image
    sequence (images listed in ascending order of ``d``'s labels) is chosen.
    """
    family, rank = _shape(d)
    target = make_diagram(family, rank)
    best = min(_isomorphisms(d, target), key=lambda phi: [phi[v] for v in d.nodes])
    return family, rank, best


def restrict(m: Mapping[int, int], S: Iterable[int]) -> DiagramMap:
    return {i: m[i] for i in S}


def is_diagram_automorphism(d: Diagram, m: Mapping[int, int]) -> bool:
    if sorted(m) != list(d.nodes) or sorted(m.values()) != list(d.nodes):
        return False
    return all(d.adjacent(m[i], m[j]) for i, j in d.edges)
