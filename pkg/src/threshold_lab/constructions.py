"""Explicit extremal constructions with label tables and degree metadata.

Partite constructions number vertices by part (alpha = 1, 2, ...) and then by
coordinate vector in lexicographic order; coordinates run over 1..m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Optional

from .graph import Graph, GraphError, build_graph, iter_bits, mask_of, min_degree
from .partition import Partition, internal_edges


class PartiteLabel(NamedTuple):
    """Vertex v^(part)_coords; compares equal to the plain tuple (part, coords)."""

    part: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class ConstructionMeta:
    kind: str
    params: dict[str, int]
    labels: tuple[Any, ...] = field(repr=False)
    part_sizes: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: Any) -> int:
        return self._index[label]

    @property
    def _index(self) -> dict[Any, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {label: i for i, label in enumerate(self.labels)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def sidecar(self, G: Graph, with_labels: bool = False) -> str:
        """key=value lines describing the instance."""
        lines = [f"kind={self.kind}"]
        for key in ("k", "m", "s", "t", "r", "l"):
            if key in self.params:
                lines.append(f"{key}={self.params[key]}")
        lines.append(f"n={G.n}")
        lines.append(f"m_edges={G.m}")
        try:
            lines.append(f"expected_min_degree={expected_min_degree(self)}")
        except GraphError:
            pass
        if self.part_sizes:
            lines.append("part_sizes=" + ",".join(map(str, self.part_sizes)))
        if with_labels:
            for v, label in enumerate(self.labels):
                lines.append(f"label.{v}={_label_str(label)}")
        return "\n".join(lines) + "\n"


def _label_str(label: Any) -> str:
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], tuple):
        return f"{label[0]}:" + ",".join(map(str, label[1]))
    return str(label)


def _partite_labels(parts: int, k: int, m: int) -> list[PartiteLabel]:
    coords = list(itertools.product(range(1, m + 1), repeat=k - 1))
    return [PartiteLabel(alpha, x) for alpha in range(1, parts + 1) for x in coords]


def _common_prefix(x: tuple[int, ...], y: tuple[int, ...]) -> int:
    p = 0
    for a, b in zip(x, y):
        if a != b:
            break
        p += 1
    return p


def _block(alpha: int) -> int:
    """Block index p of part alpha, with blocks {2p-1, 2p}."""
    return (alpha + 1) // 2


def even_adjacent(k: int, a: tuple[int, tuple[int, ...]], b: tuple[int, tuple[int, ...]]) -> bool:
    """Edge rule of the 2k-partite construction."""
    (alpha, x), (beta, y) = sorted((a, b))
    if alpha == beta:
        return False
    pa, pb = _block(alpha), _block(beta)
    if pa == pb:
        return x[0] != y[0]
    # alpha in [2p], beta in {2p+1, 2p+2} with p = pb - 1
    return _common_prefix(x, y) == pb - 1


def odd_adjacent(k: int, a: tuple[int, tuple[int, ...]], b: tuple[int, tuple[int, ...]]) -> bool:
    """Edge rule of the (2k+1)-partite construction."""
    (alpha, x), (beta, y) = a, b
    if alpha == beta:
        return False
    last = {2 * k - 1, 2 * k, 2 * k + 1}
    if alpha in last and beta in last:
        if (alpha, beta) in {(2 * k - 1, 2 * k), (2 * k, 2 * k + 1), (2 * k + 1, 2 * k - 1)}:
            return x[0] < y[0]
        return y[0] < x[0]
    if alpha > beta:
        (alpha, x), (beta, y) = (beta, y), (alpha, x)
    if beta in last:
        return x == y
    pa, pb = _block(alpha), _block(beta)
    if pa == pb:
        return x[0] != y[0]
    return _common_prefix(x, y) == pb - 1


def _from_rule(labels: list, rule) -> Graph:
    n = len(labels)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rule(labels[i], labels[j])
    ]
    return build_graph(n, edges)


def _check_km(k: int, m: int) -> None:
    if k < 2 or m < 2:
        raise GraphError("need k >= 2 and m >= 2")


def lower_even(k: int, m: int) -> tuple[Graph, ConstructionMeta]:
    """Triangle-free 2k-partite graph on 2k m^(k-1) vertices.

    For k = 2 this is the 4-partite warm-up graph and is tagged as such.
    """
    _check_km(k, m)
    labels = _partite_labels(2 * k, k, m)
    G = _from_rule(labels, lambda a, b: even_adjacent(k, a, b))
    kind = "warmup4" if k == 2 else "even2k"
    return G, ConstructionMeta(kind, {"k": k, "m": m, "t": 2 * k}, tuple(labels), (m ** (k - 1),) * (2 * k))


def warmup4(m: int) -> tuple[Graph, ConstructionMeta]:
    return lower_even(2, m)


def lower_odd(k: int, m: int) -> tuple[Graph, ConstructionMeta]:
    """Triangle-free (2k+1)-partite graph; the last three parts are joined cyclically by x_1 < y_1."""
    _check_km(k, m)
    labels = _partite_labels(2 * k + 1, k, m)
    G = _from_rule(labels, lambda a, b: odd_adjacent(k, a, b))
    return G, ConstructionMeta(
        "odd2k1", {"k": k, "m": m, "t": 2 * k + 1}, tuple(labels), (m ** (k - 1),) * (2 * k + 1)
    )


def general_lower(s: int, t: int, m: int) -> tuple[Graph, ConstructionMeta]:
    """K_s-free composite: the triangle-free graph for t' = t-s+3 plus s-3 parts, all joined.

    Extra parts have floor((t'-1) n'/t') vertices each; for s = 3 the base
    construction is returned unchanged.
    """
    if s < 3 or t < s:
        raise GraphError("need t >= s >= 3")
    tp = t - s + 3
    if tp < 4:
        raise GraphError("t - s + 3 must be at least 4 (no triangle-free base for t' = 3)")
    inner, inner_meta = lower_even(tp // 2, m) if tp % 2 == 0 else lower_odd((tp - 1) // 2, m)
    if s == 3:
        return inner, inner_meta
    n_inner = inner.n
    extra = (tp - 1) * n_inner // tp
    sizes = [n_inner] + [extra] * (s - 3)
    n = sum(sizes)
    rows = list(inner.rows) + [0] * (n - n_inner)
    starts = [0]
    for size in sizes[:-1]:
        starts.append(starts[-1] + size)
    part_masks = [mask_of(range(st, st + size)) for st, size in zip(starts, sizes)]
    full = (1 << n) - 1
    for i, (st, size) in enumerate(zip(starts, sizes)):
        outside = full & ~part_masks[i]
        for v in range(st, st + size):
            rows[v] |= outside
    labels = [("V1", label) for label in inner_meta.labels]
    for i in range(1, len(sizes)):
        labels.extend((f"V{i + 1}", j) for j in range(sizes[i]))
    G = Graph(n, tuple(rows))
    params = {"s": s, "t": t, "m": m, "k": inner_meta.params["k"]}
    meta = ConstructionMeta("generalComposite", params, tuple(labels), tuple(sizes))
    object.__setattr__(meta, "_inner", inner_meta)
    return G, meta


def andrasfai(k: int, r: int) -> tuple[Graph, ConstructionMeta]:
    """Circulant graph on N = (2k-1)(r-1)+2 vertices with offsets [(k-1)(r-1)+1, k(r-1)+1]."""
    if k < 2 or r < 1:
        raise GraphError("need k >= 2 and r >= 1")
    N = (2 * k - 1) * (r - 1) + 2
    lo, hi = (k - 1) * (r - 1) + 1, k * (r - 1) + 1
    edges = {tuple(sorted((x, (x + d) % N))) for x in range(N) for d in range(lo, hi + 1)}
    G = build_graph(N, edges)
    return G, ConstructionMeta("andrasfai", {"k": k, "r": r}, tuple(range(N)), (N,))


def kr_free_composite(r: int, ell: int) -> tuple[Graph, ConstructionMeta]:
    """A_{2,ell} joined completely to r-3 edgeless parts of size ceil(2|X|/3)."""
    if r < 3 or ell < 2:
        raise GraphError("need r >= 3 and ell >= 2")
    X, _ = andrasfai(2, ell)
    y = math.ceil(2 * X.n / 3)
    sizes = [X.n] + [y] * (r - 3)
    n = sum(sizes)
    rows = list(X.rows) + [0] * (n - X.n)
    full = (1 << n) - 1
    start = 0
    for size in sizes:
        part = mask_of(range(start, start + size))
        for v in range(start, start + size):
            rows[v] |= full & ~part
        start += size
    labels = [("X", v) for v in range(X.n)]
    for i in range(1, len(sizes)):
        labels.extend((f"Y{i}", j) for j in range(y))
    meta = ConstructionMeta("krFreeComposite", {"r": r, "l": ell, "k": 2}, tuple(labels), tuple(sizes))
    return Graph(n, tuple(rows)), meta


def expected_min_degree(meta: ConstructionMeta) -> int:
    """Minimum-degree value stated for the construction kind.

    even2k / odd2k1: (m-1) m^(k-2) (a lower bound); warmup4: m+1; andrasfai: r.
    Composite kinds use the realized part sizes.
    """
    p = meta.params
    if meta.kind in ("even2k", "odd2k1"):
        return (p["m"] - 1) * p["m"] ** (p["k"] - 2)
    if meta.kind == "warmup4":
        return p["m"] + 1
    if meta.kind == "andrasfai":
        return p["r"]
    if meta.kind == "generalComposite":
        sizes = meta.part_sizes
        n = sum(sizes)
        inner = expected_min_degree(meta._inner)  # type: ignore[attr-defined]
        bounds = [n - sizes[0] + inner] + [n - size for size in sizes[1:]]
        return min(bounds)
    if meta.kind == "krFreeComposite":
        sizes = meta.part_sizes
        n = sum(sizes)
        bounds = [n - sizes[0] + p["l"]] + [n - size for size in sizes[1:]]
        return min(bounds)
    raise GraphError(f"unknown construction kind {meta.kind!r}")


def degree_ratio(G: Graph) -> Fraction:
    return Fraction(min_degree(G), G.n)


# --------------------------------------------------------------------------
# clique forcing


@dataclass(frozen=True)
class CliqueColorWitness:
    index: tuple[int, ...]
    colors: tuple[int, ...]
    edges: dict[tuple[int, int], tuple[int, int]]  # (alpha, beta) -> edge of G

    def validate(self, G: Graph, coloring: Partition) -> bool:
        t = len(self.colors)
        if len(set(self.colors)) != t:
            return False
        for (alpha, beta), (u, v) in self.edges.items():
            if not G.has_edge(u, v):
                return False
            if (coloring.class_of[u], coloring.class_of[v]) != (self.colors[alpha - 1], self.colors[beta - 1]):
                return False
        return set(self.edges) == {(a, b) for a in range(1, t + 1) for b in range(a + 1, t + 1)}


def clique_hypothesis(meta: ConstructionMeta, f: int) -> bool:
    k, m = meta.params["k"], meta.params["m"]
    if meta.kind in ("warmup4", "even2k"):
        return m > 2 * k * (k - 1) * f
    if meta.kind == "odd2k1":
        return m > (2 * k + 1) * (k - 1) * f + 3 * f
    raise GraphError(f"clique forcing is not defined for {meta.kind!r}")


def extract_clique_witness(
    meta: ConstructionMeta, G: Graph, coloring: Partition, require_hypothesis: bool = True
) -> CliqueColorWitness:
    """Find a good index and an edge of G between every pair of its colours.

    Follows the bad / cyclic-bad counting argument: under the hypothesis on m
    some coordinate vector has all t vertices good, and goodness supplies
    the required edges. With ``require_hypothesis=False`` the search also
    runs for smaller m and raises LookupError when no good index exists.
    """
    if meta.kind not in ("warmup4", "even2k", "odd2k1"):
        raise GraphError(f"clique forcing is not defined for {meta.kind!r}")
    if coloring.n != G.n:
        raise GraphError("colouring does not match graph")
    inside = internal_edges(G, coloring)
    if inside:
        raise GraphError(f"colour class is not independent: edge {inside[0]}")
    f = coloring.r
    if require_hypothesis and not clique_hypothesis(meta, f):
        raise GraphError(f"m={meta.params['m']} too small for {f} colours")
    k, m = meta.params["k"], meta.params["m"]
    odd = meta.kind == "odd2k1"
    t = 2 * k + 1 if odd else 2 * k
    last_block = {2 * k - 1, 2 * k, 2 * k + 1} if odd else set()
    color = coloring.class_of
    idx = meta.index_of

    def witness_in(alpha: int, c: int, pred) -> Optional[int]:
        """Smallest vertex of part alpha with colour c whose coordinates satisfy pred."""
        for y in itertools.product(range(1, m + 1), repeat=k - 1):
            if pred(y):
                v = idx((alpha, y))
                if color[v] == c:
                    return v
        return None

    def prefix_pred(x, p):
        return lambda y: y[p - 1] != x[p - 1] and y[: p - 1] == x[: p - 1]

    def cyclic_pred(x):
        return lambda y: y[0] > x[0]

    def good(alpha: int, x: tuple[int, ...]) -> bool:
        c = color[idx((alpha, x))]
        for p in range(1, k):
            if witness_in(alpha, c, prefix_pred(x, p)) is None:
                return False
        if alpha in last_block and witness_in(alpha, c, cyclic_pred(x)) is None:
            return False
        return True

    for x in itertools.product(range(1, m + 1), repeat=k - 1):
        if all(good(alpha, x) for alpha in range(1, t + 1)):
            break
    else:
        raise LookupError("no good index")

    colors = tuple(color[idx((alpha, x))] for alpha in range(1, t + 1))
    edges: dict[tuple[int, int], tuple[int, int]] = {}
    for alpha in range(1, t + 1):
        for beta in range(alpha + 1, t + 1):
            u = idx((alpha, x))
            cb = colors[beta - 1]
            if odd and alpha in last_block and beta in last_block:
                # cyclic pairs (2k-1, 2k), (2k, 2k+1), (2k+1, 2k-1)
                src, dst = (beta, alpha) if (alpha, beta) == (2 * k - 1, 2 * k + 1) else (alpha, beta)
                w = witness_in(dst, colors[dst - 1], cyclic_pred(x))
                edge = (idx((src, x)), w)
                edges[(alpha, beta)] = edge if src == alpha else (edge[1], edge[0])
                continue
            if odd and beta in last_block:
                edges[(alpha, beta)] = (u, idx((beta, x)))
                continue
            pa, pb = _block(alpha), _block(beta)
            if pa == pb:
                w = witness_in(beta, cb, prefix_pred(x, 1))
            elif pb == k:
                w = idx((beta, x))
            else:
                w = witness_in(beta, cb, prefix_pred(x, pb))
            edges[(alpha, beta)] = (u, w)
    return CliqueColorWitness(tuple(x), colors, edges)


def random_proper_coloring(G: Graph, base: Partition, colors: int, rng, sweeps: int = 20) -> Partition:
    """Random proper colouring reached by Glauber moves from a proper starting colouring."""
    if base.r > colors:
        raise GraphError("starting colouring uses too many colours")
    perm = list(range(colors))
    rng.shuffle(perm)
    col = [perm[c] for c in base.class_of]
    if internal_edges(G, Partition.from_class_of(col)):
        raise GraphError("starting colouring is not proper")
    order = list(range(G.n))
    for _ in range(sweeps):
        rng.shuffle(order)
        for v in order:
            used = {col[u] for u in iter_bits(G.rows[v])}
            free = [c for c in range(colors) if c not in used]
            col[v] = rng.choice(free)
    return Partition.from_class_of(col)
