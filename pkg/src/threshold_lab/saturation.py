"""Maximal C_l-free graphs: recognition via (l-1)-paths and greedy saturation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, GraphError, bfs_distances, find_cycle_of_length, iter_bits


def path_of_length_between(G: Graph, u: int, v: int, length: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least simple u-v path with exactly ``length`` edges."""
    if u == v:
        raise GraphError("path endpoints must differ")
    if length < 1:
        raise GraphError("path length must be positive")
    if length > G.n - 1:
        return None
    rows = G.rows
    if length == 1:
        return (u, v) if G.has_edge(u, v) else None
    dist = bfs_distances(G, v)
    if dist[u] > length:
        return None
    target = 1 << v
    path = [u]

    def extend(x: int, visited: int) -> bool:
        depth = len(path) - 1
        if depth == length - 1:
            if rows[x] & target:
                path.append(v)
                return True
            return False
        remaining = length - depth - 1
        for w in iter_bits(rows[x] & ~visited & ~target):
            if dist[w] > remaining:
                continue
            path.append(w)
            if extend(w, visited | (1 << w)):
                return True
            path.pop()
        return False

    return tuple(path) if extend(u, 1 << u) else None


def non_edges(G: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u in range(G.n) for v in range(u + 1, G.n) if not G.has_edge(u, v)]


def is_maximal_free(G: Graph, length: int) -> tuple[bool, Optional[tuple[int, int]]]:
    """Every non-edge closes a C_length; otherwise the least non-edge that does not.

    Raises GraphError if G already contains a C_length.
    """
    if length < 3:
        raise GraphError("cycles have length at least 3")
    if find_cycle_of_length(G, length) is not None:
        raise GraphError(f"graph is not C_{length}-free")
    for u, v in non_edges(G):
        if path_of_length_between(G, u, v, length - 1) is None:
            return False, (u, v)
    return True, None


def is_maximal_free_by_addition(G: Graph, length: int) -> tuple[bool, Optional[tuple[int, int]]]:
    """Oracle form of maximality: add each non-edge and search the whole graph for C_length."""
    if find_cycle_of_length(G, length) is not None:
        raise GraphError(f"graph is not C_{length}-free")
    for u, v in non_edges(G):
        if find_cycle_of_length(G.add_edge(u, v), length) is None:
            return False, (u, v)
    return True, None


@dataclass(frozen=True)
class SaturationResult:
    graph: Graph
    added: tuple[tuple[int, int], ...]
    maximal: bool


def saturate(
    G: Graph, length: int, order: Optional[Iterable[tuple[int, int]]] = None
) -> SaturationResult:
    """Add non-edges in ``order`` (default lexicographic) while staying C_length-free.

    Adding edges only creates paths, so a pair rejected once stays rejected
    and a single pass reaches a maximal graph.
    """
    if find_cycle_of_length(G, length) is not None:
        raise GraphError(f"graph is not C_{length}-free")
    pairs = non_edges(G) if order is None else [tuple(sorted(p)) for p in order]
    added = []
    current = G
    for u, v in pairs:
        if u == v or current.has_edge(u, v):
            continue
        if path_of_length_between(current, u, v, length - 1) is None:
            current = current.add_edge(u, v)
            added.append((u, v))
    if order is not None:
        # a partial order may leave pairs unexamined
        for u, v in non_edges(current):
            if path_of_length_between(current, u, v, length - 1) is None:
                current = current.add_edge(u, v)
                added.append((u, v))
    maximal, _ = is_maximal_free(current, length)
    return SaturationResult(current, tuple(added), maximal)
