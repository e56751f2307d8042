"""Immutable simple graphs on vertices 0..n-1 with bitset adjacency rows.

Every search in this module is deterministic: vertices are scanned in
increasing order, so any witness returned is the lexicographically least
one in the module's canonical form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class GraphError(ValueError):
    """Invalid graph input or query arguments."""


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_to_set(x: int) -> frozenset[int]:
    return frozenset(iter_bits(x))


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]
    m: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise GraphError("graphs must have at least one vertex")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match n")
        full = (1 << self.n) - 1
        total = 0
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {v} has bits outside 0..n-1")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
            total += row.bit_count()
        object.__setattr__(self, "m", total // 2)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled so ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            rows.append(mask_of(index[u] for u in iter_bits(self.rows[v]) if u in index))
        return Graph(len(vertices), tuple(rows))

    def remove_vertices(self, removed: Iterable[int]) -> tuple[Optional["Graph"], list[int]]:
        """Delete vertices; returns the remaining graph (None if empty) and the kept labels."""
        gone = set(removed)
        kept = [v for v in range(self.n) if v not in gone]
        if not kept:
            return None, []
        return self.induced(kept), kept

    def add_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.rows)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))


@dataclass(frozen=True)
class Cycle:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def is_valid_in(self, G: Graph) -> bool:
        vs = self.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            return False
        if any(not 0 <= v < G.n for v in vs):
            return False
        return all(G.has_edge(u, v) for u, v in self.edges())


@dataclass(frozen=True)
class Walk:
    vertices: tuple[int, ...]

    @property
    def closed(self) -> bool:
        return len(self.vertices) >= 2 and self.vertices[0] == self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def is_valid_in(self, G: Graph) -> bool:
        if any(not 0 <= v < G.n for v in self.vertices):
            return False
        return all(G.has_edge(u, v) for u, v in self.edges())


@dataclass(frozen=True)
class VertexMap:
    domain_size: int
    image_size: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.domain_size:
            raise GraphError("vertex map is not total on its domain")
        for x in self.assignment:
            if not 0 <= x < self.image_size:
                raise GraphError(f"image vertex {x} out of range")

    def __call__(self, v: int) -> int:
        return self.assignment[v]


# --------------------------------------------------------------------------
# construction


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Simple graph from an edge list; duplicates collapse, loops are errors."""
    if n <= 0:
        raise GraphError("graphs must have at least one vertex")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop ({u}, {u}) is not allowed")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def complete_multipartite(*sizes: int) -> Graph:
    offsets, labels = [], []
    for part, size in enumerate(sizes):
        offsets.append(len(labels))
        labels.extend([part] * size)
    n = len(labels)
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if labels[u] != labels[v]])


# --------------------------------------------------------------------------
# elementary queries


def min_degree(G: Graph) -> int:
    return min(row.bit_count() for row in G.rows)


def _check_pair(G: Graph, u: int, v: int) -> None:
    if u == v:
        raise GraphError("query needs two distinct vertices")
    if not (0 <= u < G.n and 0 <= v < G.n):
        raise GraphError("vertex out of range")


def neighborhood_symdiff(G: Graph, u: int, v: int) -> int:
    """|N(u) symmetric-difference N(v)|."""
    _check_pair(G, u, v)
    return (G.rows[u] ^ G.rows[v]).bit_count()


def common_neighbors(G: Graph, u: int, v: int) -> frozenset[int]:
    _check_pair(G, u, v)
    return bits_to_set(G.rows[u] & G.rows[v])


def bfs_distances(G: Graph, source: int, allowed: Optional[int] = None) -> list[float]:
    """Distances from ``source`` inside the vertex set ``allowed`` (bitmask)."""
    if allowed is None:
        allowed = G.full_mask
    dist = [float("inf")] * G.n
    dist[source] = 0
    queue = deque([source])
    seen = 1 << source
    while queue:
        u = queue.popleft()
        fresh = G.rows[u] & allowed & ~seen
        seen |= fresh
        for w in iter_bits(fresh):
            dist[w] = dist[u] + 1
            queue.append(w)
    return dist


# --------------------------------------------------------------------------
# cycles


def _cycle_search(
    G: Graph, start: int, length: int, allowed: int, induced: bool
) -> Optional[tuple[int, ...]]:
    """Lexicographically least cycle ``start, c1, ..., c_{l-1}`` with c_i in ``allowed``."""
    dist = bfs_distances(G, start, allowed | (1 << start))
    rows = G.rows
    srow = rows[start]
    path = [start]

    def extend(u: int, visited: int, inner_forbidden: int) -> bool:
        depth = len(path) - 1
        if depth == length - 2:
            cands = rows[u] & srow & allowed & ~visited
            if induced:
                cands &= ~inner_forbidden
            if cands:
                path.append((cands & -cands).bit_length() - 1)
                return True
            return False
        cands = rows[u] & allowed & ~visited
        if induced:
            cands &= ~inner_forbidden
            if depth >= 1:
                cands &= ~srow
        remaining = length - depth - 1
        for w in iter_bits(cands):
            if dist[w] > remaining:
                continue
            path.append(w)
            # once u is no longer the path's end, its neighbours become chords
            nxt_forbidden = inner_forbidden | rows[u] if (induced and depth >= 1) else inner_forbidden
            if extend(w, visited | (1 << w), nxt_forbidden):
                return True
            path.pop()
        return False

    if extend(start, 1 << start, 0):
        return tuple(path)
    return None


def find_cycle_of_length(G: Graph, length: int) -> Optional[Cycle]:
    """A cycle on exactly ``length`` vertices, or None.

    The witness starts at its smallest vertex and is the lexicographically
    least such sequence.
    """
    if length < 3:
        raise GraphError("cycles have length at least 3")
    return _find_cycle(G, length, induced=False)


def find_induced_cycle(G: Graph, length: int) -> Optional[Cycle]:
    """A chordless cycle on exactly ``length`` vertices, or None."""
    if length < 3:
        raise GraphError("cycles have length at least 3")
    return _find_cycle(G, length, induced=True)


def _find_cycle(G: Graph, length: int, induced: bool) -> Optional[Cycle]:
    if length > G.n:
        return None
    full = G.full_mask
    for s in range(G.n - length + 1):
        higher = full & ~((1 << (s + 1)) - 1)
        if (G.rows[s] & higher).bit_count() < 2:
            continue
        found = _cycle_search(G, s, length, higher, induced)
        if found is not None:
            return Cycle(found)
    return None


def find_cycle_through(
    G: Graph, v: int, length: int, allowed: Optional[int] = None
) -> Optional[Cycle]:
    """A cycle of the given length through ``v`` whose other vertices lie in ``allowed``."""
    if length < 3:
        raise GraphError("cycles have length at least 3")
    if allowed is None:
        allowed = G.full_mask
    found = _cycle_search(G, v, length, allowed & ~(1 << v), induced=False)
    return Cycle(found) if found is not None else None


def is_family_free(G: Graph, lengths: Iterable[int]) -> tuple[bool, Optional[Cycle]]:
    """True when G has no cycle of any listed length; otherwise the shortest witness."""
    lengths = sorted(set(lengths))
    if any(length < 3 for length in lengths):
        raise GraphError("cycles have length at least 3")
    for length in lengths:
        cycle = find_cycle_of_length(G, length)
        if cycle is not None:
            return False, cycle
    return True, None


def odd_lengths(lo: int, hi: int) -> list[int]:
    """Odd integers in [lo, hi] that are at least 3."""
    return [x for x in range(max(lo, 3), hi + 1) if x % 2 == 1]


# --------------------------------------------------------------------------
# cliques, homomorphisms, blowups, twins


def find_clique(G: Graph, s: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least set of ``s`` pairwise adjacent vertices."""
    if s < 1:
        raise GraphError("clique size must be at least 1")
    if s > G.n:
        return None
    chosen: list[int] = []

    def extend(cands: int) -> bool:
        if len(chosen) == s:
            return True
        if cands.bit_count() < s - len(chosen):
            return False
        for v in iter_bits(cands):
            chosen.append(v)
            higher = cands & ~((1 << (v + 1)) - 1)
            if extend(G.rows[v] & higher):
                return True
            chosen.pop()
        return False

    return tuple(chosen) if extend(G.full_mask) else None


def iter_cliques(G: Graph, s: int) -> Iterator[tuple[int, ...]]:
    """All ``s``-cliques as increasing tuples, in lexicographic order."""
    if s < 1:
        raise GraphError("clique size must be at least 1")
    chosen: list[int] = []

    def extend(cands: int) -> Iterator[tuple[int, ...]]:
        if len(chosen) == s:
            yield tuple(chosen)
            return
        for v in iter_bits(cands):
            chosen.append(v)
            yield from extend(G.rows[v] & cands & ~((1 << (v + 1)) - 1))
            chosen.pop()

    yield from extend(G.full_mask)


def verify_homomorphism(G: Graph, H: Graph, phi: VertexMap) -> Optional[tuple[int, int]]:
    """None if ``phi`` is a homomorphism G -> H, else the least violating edge."""
    if phi.domain_size != G.n or phi.image_size != H.n:
        raise GraphError("vertex map does not match the graphs")
    for u, v in G.edges():
        if not H.has_edge(phi(u), phi(v)):
            return (u, v)
    return None


@dataclass(frozen=True)
class Blowup:
    graph: Graph
    rosters: tuple[tuple[int, ...], ...]

    def projection(self) -> VertexMap:
        assignment = [0] * self.graph.n
        for base, roster in enumerate(self.rosters):
            for v in roster:
                assignment[v] = base
        return VertexMap(self.graph.n, len(self.rosters), tuple(assignment))


def blowup(H: Graph, sizes: Sequence[int] | int) -> Blowup:
    """Replace vertex i of H by an independent class of ``sizes[i]`` vertices."""
    if isinstance(sizes, int):
        sizes = [sizes] * H.n
    if len(sizes) != H.n:
        raise GraphError("one size per base vertex required")
    if any(size < 1 for size in sizes):
        raise GraphError("blowup sizes must be positive")
    rosters, start = [], 0
    for size in sizes:
        rosters.append(tuple(range(start, start + size)))
        start += size
    class_mask = [mask_of(r) for r in rosters]
    rows = []
    for base, roster in enumerate(rosters):
        row = 0
        for other in iter_bits(H.rows[base]):
            row |= class_mask[other]
        rows.extend([row] * len(roster))
    return Blowup(Graph(start, tuple(rows)), tuple(rosters))


def twin_quotient(G: Graph) -> tuple[Graph, "Partition"]:
    """Collapse vertices with equal neighbourhoods.

    Classes are numbered by their smallest vertex; the quotient is twin-free.
    """
    from .partition import Partition

    ids: dict[int, int] = {}
    class_of = []
    for row in G.rows:
        class_of.append(ids.setdefault(row, len(ids)))
    P = Partition.from_class_of(class_of)
    reps = [roster[0] for roster in P.rosters]
    rows = []
    for rep in reps:
        rows.append(mask_of(class_of[u] for u in iter_bits(G.rows[rep])))
    return Graph(len(reps), tuple(rows)), P


def is_twin_free(G: Graph) -> bool:
    return len(set(G.rows)) == G.n


def relabel(G: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    rows = [0] * G.n
    for v in range(G.n):
        rows[perm[v]] = mask_of(perm[u] for u in iter_bits(G.rows[v]))
    return Graph(G.n, tuple(rows))


# --------------------------------------------------------------------------
# walks


@dataclass(frozen=True)
class OddCycleExtraction:
    cycle: Cycle
    repeated_vertex: Optional[int]

    @property
    def repeated(self) -> bool:
        return self.repeated_vertex is not None


def extract_odd_cycle_from_walk(G: Graph, W: Walk) -> OddCycleExtraction:
    """Odd cycle on the edges of a closed odd walk.

    When the walk is not itself a cycle the returned cycle has length at most
    ``len(W) - 2`` and contains a vertex that the walk visits twice (the
    closing entry does not count as a second visit).
    """
    if not W.closed:
        raise GraphError("walk is not closed")
    if W.length % 2 == 0:
        raise GraphError("walk has even length")
    if W.length < 3:
        raise GraphError("closed odd walks have length at least 3 in a loopless graph")
    if not W.is_valid_in(G):
        raise GraphError("walk uses a non-edge")
    seq = list(W.vertices[:-1])
    pivot = None
    while True:
        where: dict[int, int] = {}
        split = None
        for j, v in enumerate(seq):
            if v in where:
                split = (where[v], j)
                break
            where[v] = j
        if split is None:
            return OddCycleExtraction(Cycle(tuple(seq)), pivot)
        i, j = split
        pivot = seq[i]
        inner = seq[i:j]
        outer = seq[j:] + seq[:i]
        seq = inner if len(inner) % 2 == 1 else outer
