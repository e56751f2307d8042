"""Binary codes on graphs: the weight inequality, its greedy witness and a brute-force oracle.

Vectors are stored as ints; bit j is coordinate j, and coordinate j is the
j-th character of the printed bitstring.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graph import Graph, GraphError, iter_bits, iter_cliques, min_degree


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CodeAssignment:
    t: int
    vectors: tuple[int, ...]

    def __post_init__(self):
        if self.t < 1:
            raise GraphError("vector length must be positive")
        object.__setattr__(self, "vectors", tuple(self.vectors))
        for v in self.vectors:
            if v < 0 or v >> self.t:
                raise GraphError(f"vector {v:b} longer than t={self.t}")

    @classmethod
    def from_strings(cls, strings: Sequence[str]) -> "CodeAssignment":
        if not strings:
            raise GraphError("empty assignment")
        t = len(strings[0])
        vecs = []
        for s in strings:
            if len(s) != t or set(s) - {"0", "1"}:
                raise GraphError(f"bad bitstring {s!r} (expected {t} binary digits)")
            vecs.append(sum(1 << j for j, ch in enumerate(s) if ch == "1"))
        return cls(t, tuple(vecs))

    @classmethod
    def zeros(cls, n: int, t: int) -> "CodeAssignment":
        return cls(t, (0,) * n)

    def bitstring(self, v: int) -> str:
        x = self.vectors[v]
        return "".join("1" if x >> j & 1 else "0" for j in range(self.t))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.bit_count() for v in self.vectors)


@dataclass(frozen=True)
class ConditionViolation:
    clique: tuple[int, ...]
    coordinates: tuple[int, int]


def _check_sizes(G: Graph, A: CodeAssignment, t: Optional[int] = None) -> None:
    if A.n != G.n:
        raise GraphError(f"assignment covers {A.n} vertices, graph has {G.n}")
    if t is not None and A.t != t:
        raise GraphError(f"vector length {A.t} does not match t={t}")


def check_code_condition(G: Graph, s: int, t: int, A: CodeAssignment) -> Optional[ConditionViolation]:
    """None if every K_{s-2} has at most one all-ones coordinate, else the least violation."""
    if s < 3 or t < 1:
        raise GraphError("need s >= 3 and t >= 1")
    _check_sizes(G, A, t)
    full = (1 << t) - 1
    for clique in iter_cliques(G, s - 2):
        common = full
        for v in clique:
            common &= A.vectors[v]
        if common.bit_count() >= 2:
            j1, j2 = list(iter_bits(common))[:2]
            return ConditionViolation(tuple(clique), (j1, j2))
    return None


def total_weight(A: CodeAssignment) -> int:
    return sum(A.weights)


def column_sums(A: CodeAssignment) -> tuple[int, ...]:
    """Number of vertices whose vector has a 1 in each coordinate."""
    return tuple(sum(v >> j & 1 for v in A.vectors) for j in range(A.t))


def _betas(s: int, r: int) -> tuple[int, int]:
    return (s - 2) * (r - 1) + 1, (s - 3) * (r - 1) + 1


def degree_ratio_threshold(s: int, r: int) -> Fraction:
    b0, b1 = _betas(s, r)
    return Fraction(b1, b0)


def weight_bound(n: int, s: int, r: int) -> Fraction:
    """(beta_1/beta_0) * t * n with t = r+s-3 and beta_j = (s-2-j)(r-1)+1."""
    if s < 3 or r < 3:
        raise GraphError("need s >= 3 and r >= 3")
    if n < 0:
        raise GraphError("n must be non-negative")
    return degree_ratio_threshold(s, r) * (r + s - 3) * n


def meets_degree_hypothesis(G: Graph, s: int, r: int) -> bool:
    return Fraction(min_degree(G)) >= degree_ratio_threshold(s, r) * G.n


@dataclass(frozen=True)
class TheoremReport:
    degree_ok: bool
    violation: Optional[ConditionViolation]
    total: int
    bound: Fraction
    within_bound: bool

    @property
    def condition_ok(self) -> bool:
        return self.violation is None

    @property
    def hypotheses_hold(self) -> bool:
        return self.degree_ok and self.condition_ok

    @property
    def contradiction(self) -> bool:
        """Hypotheses hold yet the weight exceeds the bound."""
        return self.hypotheses_hold and not self.within_bound

    def lines(self) -> list[str]:
        out = [
            f"degree-hypothesis {'ok' if self.degree_ok else 'fails'}",
            "condition ok" if self.condition_ok else
            f"condition-violated clique={','.join(map(str, self.violation.clique))} "
            f"coords={self.violation.coordinates[0]},{self.violation.coordinates[1]}",
            f"M={self.total} bound={_frac(self.bound)}",
        ]
        if self.contradiction:
            out.append("CONTRADICTION: hypotheses hold but M exceeds the bound")
        elif not self.hypotheses_hold:
            out.append("implication vacuous")
        else:
            out.append("implication holds")
        return out


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def verify_theorem_instance(G: Graph, s: int, r: int, A: CodeAssignment) -> TheoremReport:
    t = r + s - 3
    _check_sizes(G, A, t)
    bound = weight_bound(G.n, s, r)
    M = total_weight(A)
    return TheoremReport(
        degree_ok=meets_degree_hypothesis(G, s, r),
        violation=check_code_condition(G, s, t, A),
        total=M,
        bound=bound,
        within_bound=M <= bound,
    )


@dataclass(frozen=True)
class HeavyCliqueWitness:
    vertices: tuple[int, ...]
    weights: tuple[int, ...]
    t: int

    @property
    def g(self) -> int:
        return self.t - self.weights[0]

    @property
    def coefficients(self) -> Optional[tuple[Fraction, ...]]:
        """a_i with weight_i = a_i (t - g) + g; undefined when x_0 has weight 0."""
        denom = self.t - self.g
        if denom == 0:
            return None
        return tuple(Fraction(w - self.g, denom) for w in self.weights)

    @property
    def weight_sum(self) -> int:
        return sum(self.weights)

    def is_valid(self, G: Graph, A: CodeAssignment) -> bool:
        """Pairwise adjacency plus the greedy maximality of every prefix."""
        vs = self.vertices
        for i, u in enumerate(vs):
            for w in vs[i + 1:]:
                if not G.has_edge(u, w):
                    return False
        weights = A.weights
        if tuple(weights[v] for v in vs) != self.weights:
            return False
        pool = G.full_mask
        for v in vs:
            if not pool >> v & 1:
                return False
            if any(weights[u] > weights[v] for u in iter_bits(pool)):
                return False
            pool &= G.rows[v]
        return True


def heavy_clique_witness(G: Graph, s: int, A: CodeAssignment) -> Optional[HeavyCliqueWitness]:
    """Greedy K_{s-2}: heaviest vertex, then heaviest in the common neighbourhood, lowest index on ties."""
    if s < 3:
        raise GraphError("need s >= 3")
    _check_sizes(G, A)
    weights = A.weights
    pool = G.full_mask
    chosen: list[int] = []
    for _ in range(s - 2):
        if not pool:
            return None
        best = max(iter_bits(pool), key=lambda v: (weights[v], -v))
        chosen.append(best)
        pool &= G.rows[best]
    return HeavyCliqueWitness(tuple(chosen), tuple(weights[v] for v in chosen), A.t)


# --------------------------------------------------------------------------
# exhaustive oracle


def _domain(s: int, t: int) -> list[int]:
    """Candidate vectors, heaviest first, then by integer value."""
    if s == 3:
        vecs = [0] + [1 << j for j in range(t)]
    else:
        vecs = list(range(1 << t))
    return sorted(vecs, key=lambda x: (-x.bit_count(), x))


def _cliques_closing_at(G: Graph, size: int) -> list[list[tuple[int, ...]]]:
    """For each vertex v, the other members of the size-cliques whose largest vertex is v."""
    out: list[list[tuple[int, ...]]] = [[] for _ in range(G.n)]
    if size <= 1:
        return out
    for clique in iter_cliques(G, size):
        out[clique[-1]].append(tuple(clique[:-1]))
    return out


class _Oracle:
    def __init__(self, G: Graph, s: int, t: int, budget: Optional[int]):
        self.G, self.s, self.t = G, s, t
        self.budget = budget
        self.nodes = 0
        self.domain = _domain(s, t)
        self.closing = _cliques_closing_at(G, s - 2)
        # cliques that contain v and whose other members all precede v
        self.best = -1
        self.best_vec: Optional[tuple[int, ...]] = None

    def ok(self, vec: list[int], v: int, x: int) -> bool:
        if self.s == 3:
            return x.bit_count() <= 1
        for others in self.closing[v]:
            common = x
            for u in others:
                common &= vec[u]
            if common.bit_count() >= 2:
                return False
        return True

    def search(self, prefix: tuple[int, ...]) -> None:
        vec = list(prefix) + [0] * (self.G.n - len(prefix))
        for v, x in enumerate(prefix):
            if not self.ok(vec, v, x):
                return
        self._dfs(vec, len(prefix), sum(x.bit_count() for x in prefix))

    def _dfs(self, vec: list[int], v: int, weight: int) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")
        n = self.G.n
        if v == n:
            if weight > self.best:
                self.best = weight
                self.best_vec = tuple(vec)
            return
        remaining = (n - v) * (self.t if self.s > 3 else 1)
        if weight + remaining <= self.best:
            return
        for x in self.domain:
            w = x.bit_count()
            if weight + w + (n - v - 1) * (self.t if self.s > 3 else 1) <= self.best:
                break
            if self.ok(vec, v, x):
                vec[v] = x
                self._dfs(vec, v + 1, weight + w)
        vec[v] = 0


def _canonical_first(t: int, s: int) -> list[int]:
    """First-vertex vectors up to coordinate permutation: the lowest w bits set."""
    ws = range(0, 2) if s == 3 else range(t + 1)
    return sorted(((1 << w) - 1 for w in ws), key=lambda x: -x.bit_count())


def _run_branch(args) -> tuple[int, Optional[tuple[int, ...]], int]:
    G, s, t, budget, first = args
    oracle = _Oracle(G, s, t, budget)
    oracle.search((first,))
    return oracle.best, oracle.best_vec, oracle.nodes


def brute_force_max_weight(
    G: Graph, s: int, t: int, budget: Optional[int] = 10_000_000, threads: int = 1
) -> tuple[int, CodeAssignment]:
    """Exact maximum total weight over all assignments satisfying the clique condition.

    The first vertex is fixed to a canonical vector of each weight, which is
    lossless because permuting coordinates preserves both weight and condition.
    ``budget`` caps the number of search nodes per branch.
    """
    if s < 3 or t < 1:
        raise GraphError("need s >= 3 and t >= 1")
    if G.n == 0:
        return 0, CodeAssignment(t, ())
    branches = [(G, s, t, budget, x) for x in _canonical_first(t, s)]
    if threads > 1 and len(branches) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(branches))) as pool:
            results = list(pool.map(_run_branch, branches))
    else:
        results = []
        best = -1
        for G_, s_, t_, budget_, first in branches:
            oracle = _Oracle(G_, s_, t_, budget_)
            oracle.best = best
            oracle.search((first,))
            if oracle.best_vec is not None and oracle.best > best:
                best = oracle.best
            results.append((oracle.best, oracle.best_vec, oracle.nodes))
    top, top_vec = -1, None
    for value, vec, _ in results:
        if vec is not None and value > top:
            top, top_vec = value, vec
    assert top_vec is not None
    return top, CodeAssignment(t, top_vec)


def resolve_threads(flag: Optional[int]) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("THRESHOLD_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise GraphError(f"THRESHOLD_LAB_THREADS={env!r} is not an integer")
    return 1
