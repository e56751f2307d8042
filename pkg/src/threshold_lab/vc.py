"""Exact VC-dimension of the open-neighbourhood set system of a graph."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional

from .graph import Graph, GraphError, iter_bits, mask_of


@dataclass(frozen=True)
class VcResult:
    dimension: int
    witness: tuple[int, ...]


def traces(G: Graph, S: Iterable[int]) -> set[int]:
    """Distinct masks N(v) & S over all vertices v."""
    mask = mask_of(S)
    return {row & mask for row in G.rows}


def is_shattered(G: Graph, S: Iterable[int]) -> bool:
    S = list(S)
    if any(not 0 <= v < G.n for v in S):
        raise GraphError("shattered-set candidate leaves the vertex set")
    if len(set(S)) != len(S):
        raise GraphError("candidate set has repeated vertices")
    if 2 ** len(S) > G.n:
        return False
    return len(traces(G, S)) == 2 ** len(S)


def _splitters(G: Graph, classes: list[int], pool: int) -> int:
    """Vertices of ``pool`` having a neighbour and a non-neighbour in every class.

    By symmetry, w meets C iff w lies in the union of the rows of C, and w
    misses part of C iff w lies outside the intersection of those rows.
    """
    rows = G.rows
    ok = pool
    for C in classes:
        union, inter = 0, -1
        for c in iter_bits(C):
            union |= rows[c]
            inter &= rows[c]
        ok &= union & ~inter
        if not ok:
            break
    return ok


class _Search:
    """Depth-first search over shattered sets in increasing vertex order.

    Classes are the vertex groups sharing a trace on the current set; a
    vertex extends the set exactly when it splits every class.
    """

    def __init__(self, G: Graph):
        self.G = G
        self.best: tuple[int, ...] = ()

    def run(self, target: Optional[int]) -> tuple[int, ...]:
        G = self.G
        root = _splitters(G, [G.full_mask], G.full_mask)
        self.target = target
        self._dfs([], [G.full_mask], root)
        return self.best

    def _dfs(self, S: list[int], classes: list[int], cands: int) -> bool:
        if len(S) > len(self.best):
            self.best = tuple(S)
            if self.target is not None and len(S) >= self.target:
                return True
        # need 2^(|S|+1) distinct traces among n rows
        if 2 ** (len(S) + 1) > self.G.n:
            return False
        goal = len(self.best) if self.target is None else self.target - 1
        rows = self.G.rows
        for w in iter_bits(cands):
            higher = cands & ~((1 << (w + 1)) - 1)
            if len(S) + 1 + higher.bit_count() <= goal:
                break
            row = rows[w]
            split = []
            for C in classes:
                split.append(C & row)
                split.append(C & ~row)
            S.append(w)
            if self._dfs(S, split, _splitters(self.G, split, higher)):
                return True
            S.pop()
        return False


def vc_dimension(G: Graph) -> VcResult:
    """Largest shattered set size, with the lexicographically least witness."""
    best = _Search(G).run(None)
    return VcResult(len(best), best)


def vc_at_least(G: Graph, d: int) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether some set of size ``d`` is shattered; returns the least witness if so."""
    if d < 0:
        raise GraphError("dimension must be non-negative")
    if d == 0:
        return True, ()
    found = _Search(G).run(d)
    if len(found) >= d:
        return True, found[:d]
    return False, None


def stated_vc_bound(k: int) -> int:
    """(2k-1)^3 * C(2k-2, k-1) * 2^((2k-1)^(2k-2)) as an exact integer."""
    if k < 2:
        raise GraphError("bound is stated for k >= 2")
    return (2 * k - 1) ** 3 * comb(2 * k - 2, k - 1) * 2 ** ((2 * k - 1) ** (2 * k - 2))
