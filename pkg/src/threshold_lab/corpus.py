"""Small maximal odd-cycle-free instances meeting the minimum-degree hypothesis."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .constructions import andrasfai
from .graph import Graph, blowup, complete_bipartite, empty_graph, min_degree
from .partition import meets_degree_threshold
from .saturation import path_of_length_between, saturate


@dataclass(frozen=True)
class DeskInstance:
    name: str
    graph: Graph
    k: int
    epsilon: Fraction

    @property
    def cycle(self) -> int:
        return 2 * self.k - 1


def andrasfai_slack(k: int, r: int) -> Fraction:
    """delta/n - 1/(2k-1) for A_{k,r} and all of its blowups."""
    N = (2 * k - 1) * (r - 1) + 2
    return Fraction(r, N) - Fraction(1, 2 * k - 1)


def random_saturated(n: int, length: int, seed: int) -> Graph:
    """Saturate a random edge order starting from the empty graph."""
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    return saturate(empty_graph(n), length, order=pairs).graph


def random_free(n: int, length: int, seed: int, max_added: int | None = None) -> Graph:
    """Random C_length-free graph: greedy over a shuffled edge order, optionally stopped early."""
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    G = empty_graph(n)
    count = 0
    for u, v in pairs:
        if max_added is not None and count >= max_added:
            break
        if path_of_length_between(G, u, v, length - 1) is None:
            G = G.add_edge(u, v)
            count += 1
    return G


def desk_corpus(include_random: bool = True) -> list[DeskInstance]:
    """Deterministic corpus: Andrasfai blowups, complete bipartite graphs, seeded saturations.

    Every instance is maximal C_{2k-1}-free and satisfies
    delta >= (1/(2k-1) + epsilon) n.
    """
    out: list[DeskInstance] = []
    eps5 = Fraction(1, 20)
    # A_{k,2} is C_{2k+1}, which is not maximal for k >= 3, so r starts at 3
    A, _ = andrasfai(3, 3)
    for b in (1, 2, 4):
        out.append(DeskInstance(f"A(3,3)[{b}]", blowup(A, b).graph, 3, eps5))
    for a, b in ((3, 3), (4, 4), (3, 5)):
        out.append(DeskInstance(f"K({a},{b})", complete_bipartite(a, b), 3, eps5))
    for k, r, sizes in ((3, 4, (1, 2)), (3, 5, (1,)), (4, 3, (1, 2, 3)), (4, 4, (1, 2))):
        A, _ = andrasfai(k, r)
        eps = andrasfai_slack(k, r)
        for b in sizes:
            out.append(DeskInstance(f"A({k},{r})[{b}]", blowup(A, b).graph, k, eps))
    if include_random:
        for seed in range(40):
            G = random_saturated(14, 5, seed)
            eps = Fraction(min_degree(G), G.n) - Fraction(1, 5)
            if eps >= eps5 and meets_degree_threshold(G, 3, eps5):
                out.append(DeskInstance(f"sat5(14,{seed})", G, 3, eps5))
    return out


def iter_corpus(k: int | None = None) -> Iterator[DeskInstance]:
    for inst in desk_corpus():
        if k is None or inst.k == k:
            yield inst
