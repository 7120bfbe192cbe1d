"""Root systems of simply laced diagrams, the longest Weyl element, opposition
of types and polar types.

Everything is exact integer arithmetic in the simple-root basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .diagram import Diagram, DiagramMap, TypeSet, classify_shape, components, induced

Root = tuple[int, ...]


def cartan_matrix(d: Diagram) -> np.ndarray:
    idx = {v: k for k, v in enumerate(d.nodes)}
    A = 2 * np.eye(d.rank, dtype=np.int64)
    for i, j in d.edges:
        A[idx[i], idx[j]] = A[idx[j], idx[i]] = -1
    return A


def reflection_matrix(d: Diagram, i: int) -> np.ndarray:
    """Matrix of s_i on coefficient column vectors: s_i(b) = b - (b, a_i) a_i."""
    k = d.nodes.index(i)
    A = cartan_matrix(d)
    S = np.eye(d.rank, dtype=np.int64)
    S[k, :] -= A[k, :]
    return S


def _check_connected_ade(d: Diagram) -> None:
    # raises DiagramError for anything that is not a connected A/D/E shape
    classify_shape(d)


@lru_cache(maxsize=None)
def _positive_roots(d: Diagram) -> tuple[Root, ...]:
    _check_connected_ade(d)
    n = d.rank
    A = cartan_matrix(d)
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            b = np.array(beta)
            pair = b @ A
            for j in range(n):
                img = b.copy()
                img[j] -= pair[j]
                t = tuple(int(x) for x in img)
                if all(x >= 0 for x in t) and any(t) and t not in found:
                    found.add(t)
                    new.append(t)
        frontier = new
    return tuple(sorted(found, key=lambda r: (sum(r), r)))


def positive_roots(d: Diagram) -> list[Root]:
    return list(_positive_roots(d))


def highest_root(d: Diagram) -> Root:
    return max(_positive_roots(d), key=sum)


@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]
    matrix: np.ndarray

    def __len__(self) -> int:
        return len(self.word)

    def apply(self, root: Root) -> Root:
        return tuple(int(x) for x in self.matrix @ np.array(root))


def weyl_element(d: Diagram, word) -> WeylElement:
    M = np.eye(d.rank, dtype=np.int64)
    for i in word:
        M = M @ reflection_matrix(d, i)
    return WeylElement(tuple(word), M)


@lru_cache(maxsize=None)
def _longest_word(d: Diagram) -> tuple[int, ...]:
    _check_connected_ade(d)
    refl = {i: reflection_matrix(d, i) for i in d.nodes}
    M = np.eye(d.rank, dtype=np.int64)
    word = []
    while True:
        # columns of M are the images w(alpha_i)
        for k, i in enumerate(d.nodes):
            if (M[:, k] >= 0).all():
                M = M @ refl[i]
                word.append(i)
                break
        else:
            return tuple(word)


def longest_element(d: Diagram) -> WeylElement:
    return weyl_element(d, _longest_word(d))


@lru_cache(maxsize=None)
def _opposition_connected(d: Diagram) -> tuple[tuple[int, int], ...]:
    w0 = longest_element(d)
    out = []
    for k, i in enumerate(d.nodes):
        col = -w0.matrix[:, k]
        (j,) = np.nonzero(col)[0]
        assert col[j] == 1 and col.sum() == 1
        out.append((i, d.nodes[j]))
    return tuple(out)


def opposition(d: Diagram) -> DiagramMap:
    """``i -> j`` with ``w0(a_i) = -a_j``, componentwise on reducible diagrams."""
    m: DiagramMap = {}
    for comp in components(d):
        sub = induced(d, comp) if len(comp) < d.rank else d
        m.update(_opposition_connected(sub))
    return m


def polar_type(d: Diagram) -> TypeSet:
    theta = np.array(highest_root(d))
    pair = theta @ cartan_matrix(d)
    return frozenset(d.nodes[k] for k in np.nonzero(pair)[0])
