"""Packing partitions, signature refinement, quotient graphs and the
blowup-decomposition pipelines built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .graph import (
    Cycle,
    Graph,
    GraphError,
    VertexMap,
    Walk,
    blowup,
    find_clique,
    find_cycle_of_length,
    find_cycle_through,
    is_family_free,
    iter_bits,
    mask_of,
    min_degree,
    odd_lengths,
    twin_quotient,
    verify_homomorphism,
)


class HypothesisError(ValueError):
    """A pipeline precondition does not hold for the given input."""


@dataclass(frozen=True)
class Partition:
    """Vertex partition with class ids numbered by first occurrence."""

    class_of: tuple[int, ...]
    rosters: tuple[tuple[int, ...], ...] = field(compare=False)

    @classmethod
    def from_class_of(cls, labels: Sequence[Any]) -> "Partition":
        ids: dict[Any, int] = {}
        class_of = tuple(ids.setdefault(label, len(ids)) for label in labels)
        rosters: list[list[int]] = [[] for _ in ids]
        for v, c in enumerate(class_of):
            rosters[c].append(v)
        return cls(class_of, tuple(tuple(r) for r in rosters))

    @classmethod
    def from_rosters(cls, n: int, rosters: Sequence[Sequence[int]]) -> "Partition":
        labels: list[Optional[int]] = [None] * n
        for c, roster in enumerate(rosters):
            for v in roster:
                if not 0 <= v < n or labels[v] is not None:
                    raise GraphError(f"vertex {v} is out of range or listed twice")
                labels[v] = c
        if any(label is None for label in labels):
            raise GraphError("rosters do not cover every vertex")
        return cls.from_class_of(labels)

    @property
    def r(self) -> int:
        return len(self.rosters)

    @property
    def n(self) -> int:
        return len(self.class_of)

    def class_masks(self) -> list[int]:
        return [mask_of(roster) for roster in self.rosters]

    def refines(self, coarser: "Partition") -> bool:
        return all(
            len({coarser.class_of[v] for v in roster}) == 1 for roster in self.rosters
        )

    @property
    def sizes(self) -> list[int]:
        return [len(roster) for roster in self.rosters]


def _greedy_centers(G: Graph, vertices: Sequence[int], a: int) -> list[int]:
    """Label each vertex with the index of the first centre within symmetric difference ``a``."""
    centers: list[int] = []
    labels = []
    for v in vertices:
        row = G.rows[v]
        for idx, c in enumerate(centers):
            if (G.rows[c] ^ row).bit_count() <= a:
                labels.append(idx)
                break
        else:
            labels.append(len(centers))
            centers.append(v)
    return labels


def packing_partition(G: Graph, a: int) -> Partition:
    """Greedy centre packing: any two vertices of a class differ in at most 2a neighbours."""
    if not 1 <= a <= G.n:
        raise GraphError(f"packing radius must lie in [1, n], got {a}")
    return Partition.from_class_of(_greedy_centers(G, range(G.n), a))


def twin_partition(G: Graph) -> Partition:
    return twin_quotient(G)[1]


def refine(G: Graph, P: Partition) -> Partition:
    """Split every class by which classes of ``P`` each vertex sees."""
    masks = P.class_masks()
    labels = []
    for v in range(G.n):
        row = G.rows[v]
        signature = 0
        for j, mask in enumerate(masks):
            if row & mask:
                signature |= 1 << j
        labels.append((P.class_of[v], signature))
    return Partition.from_class_of(labels)


def quotient_graph(G: Graph, P: Partition) -> Graph:
    """Classes adjacent iff some edge of G crosses them; edges inside a class are ignored."""
    if P.n != G.n:
        raise GraphError("partition does not match graph")
    rows = [0] * P.r
    for c, roster in enumerate(P.rosters):
        seen = 0
        for v in roster:
            seen |= G.rows[v]
        rows[c] = mask_of(P.class_of[u] for u in iter_bits(seen)) & ~(1 << c)
    return Graph(P.r, tuple(rows))


def internal_edges(G: Graph, P: Partition) -> list[tuple[int, int]]:
    """Edges of G with both ends in one class, in lexicographic order."""
    return [(u, v) for u, v in G.edges() if P.class_of[u] == P.class_of[v]]


def first_mixed_triple(G: Graph, P: Partition) -> Optional[tuple[int, int, int]]:
    """Least ``(u1, u2, v)``: u1, u2 share a class, v elsewhere, u1v an edge, u2v not."""
    masks = P.class_masks()
    for u1 in range(G.n):
        own = masks[P.class_of[u1]]
        for u2 in P.rosters[P.class_of[u1]]:
            if u2 == u1:
                continue
            diff = G.rows[u1] & ~G.rows[u2] & ~own
            if diff:
                return (u1, u2, (diff & -diff).bit_length() - 1)
    return None


def haussler_class_bound(d: int, n: int, a: int) -> int:
    """Ceiling of e(d+1)(2e)^d (n/a)^d, the packing-lemma class count."""
    return math.ceil(math.e * (d + 1) * (2 * math.e) ** d * (n / a) ** d)


def tower_at_least(i: int, x: int, target: int) -> bool:
    """Whether tw_i(x) >= target, with tw_1(x) = x and tw_{j+1} = tw_j * 2**tw_j."""
    if i < 1:
        raise ValueError("tower height starts at 1")
    value = x
    for _ in range(i - 1):
        if value >= target:
            return True
        value = value * (1 << value)
    return value >= target


# --------------------------------------------------------------------------
# refinement traces


@dataclass(frozen=True)
class RefinementTrace:
    gamma: Fraction
    radius: int
    partitions: tuple[Partition, ...]
    quotients: tuple[Graph, ...]

    @property
    def depth(self) -> int:
        return len(self.partitions) - 1

    def vertex_class(self, v: int, level: int) -> int:
        return self.partitions[level].class_of[v]

    def ancestor(self, level: int, cls: int, target: int) -> int:
        """Class of level ``target`` containing class ``cls`` of level ``level``."""
        if target > level:
            raise ValueError("ancestors live at coarser levels")
        rep = self.partitions[level].rosters[cls][0]
        return self.partitions[target].class_of[rep]

    def class_size(self, level: int, cls: int) -> int:
        return len(self.partitions[level].rosters[cls])


def _as_fraction(x: Fraction | int | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def partition_sequence(G: Graph, gamma: Fraction | str, depth: int) -> RefinementTrace:
    """P_0 from a packing of radius floor(gamma*n/2), followed by ``depth`` refinements.

    A radius of zero degenerates to grouping exact twins.
    """
    gamma = _as_fraction(gamma)
    if not 0 < gamma < 1:
        raise GraphError("gamma must lie strictly between 0 and 1")
    if depth < 0:
        raise GraphError("depth must be non-negative")
    a = math.floor(gamma * G.n / 2)
    P = packing_partition(G, a) if a >= 1 else twin_partition(G)
    partitions = [P]
    for _ in range(depth):
        partitions.append(refine(G, partitions[-1]))
    quotients = tuple(quotient_graph(G, Q) for Q in partitions)
    return RefinementTrace(gamma, a, tuple(partitions), quotients)


def singular_classes(trace: RefinementTrace) -> frozenset[int]:
    """Classes of P_1 holding a single vertex."""
    if trace.depth < 1:
        raise GraphError("singular classes need a trace of depth at least 1")
    return frozenset(c for c, roster in enumerate(trace.partitions[1].rosters) if len(roster) == 1)


def is_nonsingular_cycle(
    trace: RefinementTrace, level: int, C: Cycle, in_graph: bool = False
) -> bool:
    """True when some class (or vertex) on C has a P_1 ancestor with two or more vertices."""
    if trace.depth < 1:
        raise GraphError("singular classes need a trace of depth at least 1")
    if in_graph:
        host_n = trace.partitions[0].n
        if any(not 0 <= v < host_n for v in C.vertices):
            raise GraphError("cycle leaves the vertex set")
        return any(trace.class_size(1, trace.vertex_class(v, 1)) >= 2 for v in C.vertices)
    if not 1 <= level <= trace.depth:
        raise GraphError("level outside the trace")
    if not C.is_valid_in(trace.quotients[level]):
        raise GraphError("not a cycle of the quotient at this level")
    return any(trace.class_size(1, trace.ancestor(level, P, 1)) >= 2 for P in C.vertices)


def lift_walk(
    trace: RefinementTrace,
    G: Graph,
    walk: Sequence[int],
    start: int,
    level: Optional[int] = None,
) -> Walk:
    """Lift a walk P_t ... P_0 of classes to a walk x_t ... x_0 of G.

    ``walk`` lists class ids of level ``level`` (default t + 1); each x_i
    lies in the level-(i+1) ancestor of P_i and is chosen as the smallest
    admissible neighbour.
    """
    t = len(walk) - 1
    if t < 1:
        raise GraphError("walk needs at least one edge")
    if level is None:
        level = t + 1
    if level < t + 1 or level > trace.depth:
        raise GraphError("trace is too shallow for this walk")
    H = trace.quotients[level]
    if not Walk(tuple(walk)).is_valid_in(H):
        raise GraphError("walk is not valid in the quotient")
    if trace.vertex_class(start, level) != walk[0]:
        raise GraphError("start vertex is not in the walk's first class")
    xs = [start]
    for step in range(1, t + 1):
        i = t - step + 1  # current x_i, next is x_{i-1}
        target = trace.ancestor(level, walk[step], i)
        target_mask = mask_of(trace.partitions[i].rosters[target])
        cands = G.rows[xs[-1]] & target_mask
        if not cands:
            raise RuntimeError("lift failed; refinement trace is inconsistent")
        xs.append((cands & -cands).bit_length() - 1)
    return Walk(tuple(xs))


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class FailureReport:
    reason: str  # min-degree | not-free | not-maximal | class-not-independent | mixed-pair
    witness: Any
    detail: str = ""
    ok: bool = False

    def to_json(self) -> dict:
        return {"ok": False, "reason": self.reason, "witness": _jsonable(self.witness), "detail": self.detail}


def _jsonable(x: Any) -> Any:
    if isinstance(x, Cycle):
        return list(x.vertices)
    if isinstance(x, (tuple, list, frozenset, set)):
        return [_jsonable(y) for y in (sorted(x) if isinstance(x, (set, frozenset)) else x)]
    return x


@dataclass(frozen=True)
class BlowupCertificate:
    n: int
    k: int
    epsilon: Fraction
    gamma: Fraction
    depth: int
    schedule: str
    quotient: Graph
    classes: tuple[tuple[int, ...], ...]
    minimal_quotient: Graph
    minimal_classes: tuple[tuple[int, ...], ...]
    c2km1_free: bool
    nonsingular_free: tuple[bool, ...]
    p0_classes: int
    tower_bound_ok: bool
    maximality_checked: bool
    ok: bool = True

    @property
    def pair_table(self) -> dict[tuple[int, int], str]:
        H = self.quotient
        return {
            (x, y): "complete" if H.has_edge(x, y) else "anti-complete"
            for x in range(H.n)
            for y in range(x + 1, H.n)
        }

    def to_json(self) -> dict:
        return {
            "ok": True,
            "n": self.n,
            "k": self.k,
            "epsilon": _frac_str(self.epsilon),
            "gamma": _frac_str(self.gamma),
            "depth": self.depth,
            "schedule": self.schedule,
            "quotient": {"n": self.quotient.n, "edges": [list(e) for e in self.quotient.edges()]},
            "classes": [list(c) for c in self.classes],
            "minimal_quotient": {
                "n": self.minimal_quotient.n,
                "edges": [list(e) for e in self.minimal_quotient.edges()],
            },
            "minimal_classes": [list(c) for c in self.minimal_classes],
            "p0_classes": self.p0_classes,
            "verification": {
                "c2km1_free": self.c2km1_free,
                "nonsingular_free": list(self.nonsingular_free),
                "tower_bound_ok": self.tower_bound_ok,
                "maximality_checked": self.maximality_checked,
            },
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def meets_degree_threshold(G: Graph, k: int, eps: Fraction) -> bool:
    """delta(G) >= (1/(2k-1) + eps) n, compared exactly."""
    return Fraction(min_degree(G)) >= (Fraction(1, 2 * k - 1) + eps) * G.n


def _argmin_degree(G: Graph) -> int:
    return min(range(G.n), key=lambda v: (G.degree(v), v))


def _maximality_failure(G: Graph, length: int) -> Optional[FailureReport]:
    from .saturation import is_maximal_free

    cycle = find_cycle_of_length(G, length)
    if cycle is not None:
        return FailureReport("not-free", cycle, f"graph contains C_{length}")
    maximal, non_edge = is_maximal_free(G, length)
    if not maximal:
        return FailureReport("not-maximal", non_edge, f"adding this pair creates no C_{length}")
    return None


def _certify(
    G: Graph,
    trace: RefinementTrace,
    k: int,
    eps: Fraction,
    schedule: str,
    maximality_checked: bool,
) -> BlowupCertificate | FailureReport:
    P = trace.partitions[-1]
    inside = internal_edges(G, P)
    if inside:
        return FailureReport("class-not-independent", inside[0], "edge inside a class")
    triple = first_mixed_triple(G, P)
    if triple is not None:
        return FailureReport("mixed-pair", triple, "u1 ~ v but u2 !~ v for u1, u2 in one class")

    H = trace.quotients[-1]
    c2km1_free = find_cycle_of_length(H, 2 * k - 1) is None
    nonsingular_free = []
    if trace.depth >= 1:
        level = trace.depth
        heavy = [
            c for c in range(H.n) if trace.class_size(1, trace.ancestor(level, c, 1)) >= 2
        ]
        for ell in range(2, k):
            nonsingular_free.append(
                all(find_cycle_through(H, c, 2 * ell - 1) is None for c in heavy)
            )
    minimal, twins = twin_quotient(H)
    minimal_classes = tuple(
        tuple(sorted(v for c in roster for v in P.rosters[c])) for roster in twins.rosters
    )
    return BlowupCertificate(
        n=G.n,
        k=k,
        epsilon=eps,
        gamma=trace.gamma,
        depth=trace.depth,
        schedule=schedule,
        quotient=H,
        classes=P.rosters,
        minimal_quotient=minimal,
        minimal_classes=minimal_classes,
        c2km1_free=c2km1_free,
        nonsingular_free=tuple(nonsingular_free),
        p0_classes=trace.partitions[0].r,
        tower_bound_ok=tower_at_least(max(k, 1), trace.partitions[0].r, H.n),
        maximality_checked=maximality_checked,
    )


GAMMA_SCHEDULES = {
    "theorem": lambda eps, k: eps / (6 * k),
    "lemma": lambda eps, k: eps / 3,
}


def decompose_blowup(
    G: Graph,
    k: int,
    eps: Fraction | str,
    gamma: Fraction | str | None = None,
    check_maximality: Optional[bool] = None,
    schedule: str = "theorem",
) -> BlowupCertificate | FailureReport:
    """Certify G as a blowup of the quotient of P_k, or report why not.

    ``gamma`` defaults to the schedule's value (eps/(6k) for "theorem",
    eps/3 for "lemma"). Maximality is checked by default up to 200 vertices.
    """
    if k < 2:
        raise GraphError("k must be at least 2")
    eps = _as_fraction(eps)
    if eps <= 0:
        raise GraphError("epsilon must be positive")
    if gamma is None:
        gamma = GAMMA_SCHEDULES[schedule](eps, k)
    else:
        gamma = _as_fraction(gamma)
        schedule = "custom"
    if not meets_degree_threshold(G, k, eps):
        v = _argmin_degree(G)
        return FailureReport("min-degree", v, f"delta(G)={G.degree(v)} below (1/{2 * k - 1}+{eps})n")
    if check_maximality is None:
        check_maximality = G.n <= 200
    if check_maximality:
        failure = _maximality_failure(G, 2 * k - 1)
        if failure is not None:
            return failure
    trace = partition_sequence(G, gamma, k)
    return _certify(G, trace, k, eps, schedule, check_maximality)


def c5_warmup_decompose(
    G: Graph, eps: Fraction | str, check_maximality: Optional[bool] = None
) -> BlowupCertificate | FailureReport:
    """Single-refinement decomposition for maximal C5-free graphs.

    P_0 uses packing radius floor(eps*n/50), then one refinement.
    """
    eps = _as_fraction(eps)
    if eps <= 0:
        raise GraphError("epsilon must be positive")
    if check_maximality is None:
        check_maximality = G.n <= 200
    if check_maximality:
        failure = _maximality_failure(G, 5)
        if failure is not None:
            return failure
    if not meets_degree_threshold(G, 3, eps):
        v = _argmin_degree(G)
        return FailureReport("min-degree", v, f"delta(G)={G.degree(v)} below (1/5+{eps})n")
    trace = partition_sequence(G, eps / 25, 1)
    return _certify(G, trace, 3, eps, "c5-warmup", check_maximality)


def verify_certificate(G: Graph, cert: dict) -> tuple[bool, str]:
    """Re-check a serialized certificate against G from scratch."""
    if not cert.get("ok"):
        return False, "not a success certificate"
    if cert["n"] != G.n:
        return False, "vertex count mismatch"
    for key, qkey in (("classes", "quotient"), ("minimal_classes", "minimal_quotient")):
        try:
            P = Partition.from_rosters(G.n, cert[key])
        except GraphError as exc:
            return False, f"{key}: {exc}"
        q = cert[qkey]
        rows = [0] * q["n"]
        for x, y in q["edges"]:
            rows[x] |= 1 << y
            rows[y] |= 1 << x
        H = Graph(q["n"], tuple(rows))
        if H.n != len(cert[key]):
            return False, f"{qkey} size does not match {key}"
        masks = [mask_of(roster) for roster in cert[key]]
        for c, roster in enumerate(cert[key]):
            expected = 0
            for other in iter_bits(H.rows[c]):
                expected |= masks[other]
            for v in roster:
                if G.rows[v] != expected:
                    return False, f"{key}: vertex {v} does not match quotient class {c}"
    return True, "certificate verified"


# --------------------------------------------------------------------------
# hitting set and clique images


@dataclass(frozen=True)
class HittingSet:
    removed: frozenset[int]
    p1_classes: int
    remainder_free: bool


def hitting_set_small_odd(G: Graph, k: int, eps: Fraction | str) -> HittingSet:
    """Remove the singular P_1 classes; the rest is free of odd cycles up to 2k-1."""
    eps = _as_fraction(eps)
    if k < 2 or eps <= 0:
        raise GraphError("need k >= 2 and epsilon > 0")
    if not meets_degree_threshold(G, k, eps):
        raise HypothesisError(f"minimum degree below (1/{2 * k - 1}+{eps})n")
    failure = _maximality_failure(G, 2 * k - 1)
    if failure is not None:
        raise HypothesisError(f"{failure.reason}: {failure.detail}")
    trace = partition_sequence(G, eps / (6 * k), 1)
    removed = frozenset(
        v for c in singular_classes(trace) for v in trace.partitions[1].rosters[c]
    )
    rest, _ = G.remove_vertices(removed)
    free = True if rest is None else is_family_free(rest, odd_lengths(3, 2 * k - 1))[0]
    return HittingSet(removed, trace.partitions[1].r, free)


@dataclass(frozen=True)
class CliqueImageReport:
    quotient: Graph
    partition: Partition
    radius: int
    threshold: Fraction
    homomorphism_ok: bool
    clique_free: bool
    clique_witness: Optional[tuple[int, ...]]


def clique_threshold(s: int, t: int) -> Fraction:
    """beta_1/beta_0 with r = t - s + 3 and beta_j = (s-2-j)(r-1)+1."""
    r = t - s + 3
    return Fraction((s - 3) * (r - 1) + 1, (s - 2) * (r - 1) + 1)


def clique_image_pipeline(
    G: Graph, s: int, t: int, coloring: Partition, eps: Fraction | str
) -> CliqueImageReport:
    """Refine an independent colouring by packing and test the quotient for K_t."""
    eps = _as_fraction(eps)
    if s < 3 or t < s:
        raise GraphError("need t >= s >= 3")
    if eps <= 0:
        raise GraphError("epsilon must be positive")
    if coloring.n != G.n:
        raise GraphError("colouring does not match graph")
    threshold = clique_threshold(s, t)
    if Fraction(min_degree(G)) < (threshold + eps) * G.n:
        raise HypothesisError(f"minimum degree below ({threshold}+{eps})n")
    inside = internal_edges(G, coloring)
    if inside:
        raise HypothesisError(f"colour class not independent: edge {inside[0]}")
    r = t - s + 3
    a = math.floor(eps * G.n / (2 * coloring.r * math.factorial(r)))
    labels: list[Any] = [None] * G.n
    for c, roster in enumerate(coloring.rosters):
        if a >= 1:
            sub = _greedy_centers(G, roster, a)
        else:
            rows: dict[int, int] = {}
            sub = [rows.setdefault(G.rows[v], len(rows)) for v in roster]
        for v, label in zip(roster, sub):
            labels[v] = (c, label)
    P = Partition.from_class_of(labels)
    H = quotient_graph(G, P)
    hom_ok = verify_homomorphism(G, H, VertexMap(G.n, H.n, P.class_of)) is None
    witness = find_clique(H, t)
    return CliqueImageReport(H, P, a, threshold, hom_ok, witness is None, witness)


def blowup_matches(G: Graph, H: Graph, rosters: Sequence[Sequence[int]]) -> bool:
    """Whether G equals H blown up along ``rosters`` after relabelling."""
    sizes = [len(r) for r in rosters]
    B = blowup(H, sizes)
    perm = [0] * G.n
    for base, roster in enumerate(rosters):
        for v, b in zip(sorted(roster), B.rosters[base]):
            perm[v] = b
    from .graph import relabel

    return relabel(G, perm) == B.graph
