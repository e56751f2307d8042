import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import are_isomorphic, vc_naive
from strategies import graphs
from threshold_lab.constructions import andrasfai, general_lower
from threshold_lab.graph import (
    Cycle,
    Graph,
    GraphError,
    blowup,
    build_graph,
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    empty_graph,
    find_cycle_of_length,
    neighborhood_symdiff,
    path_graph,
    relabel,
)
from threshold_lab.partition import (
    BlowupCertificate,
    FailureReport,
    HypothesisError,
    Partition,
    blowup_matches,
    c5_warmup_decompose,
    clique_image_pipeline,
    decompose_blowup,
    first_mixed_triple,
    haussler_class_bound,
    hitting_set_small_odd,
    internal_edges,
    is_nonsingular_cycle,
    lift_walk,
    packing_partition,
    partition_sequence,
    quotient_graph,
    refine,
    singular_classes,
    tower_at_least,
    twin_partition,
    verify_certificate,
)


def refine_oracle(G, P):
    """Group vertices by (old class, set of classes met by the neighbourhood)."""
    groups = {}
    for v in range(G.n):
        nbrs = set(G.neighbors(v))
        seen = frozenset(c for c, roster in enumerate(P.rosters) if nbrs & set(roster))
        groups.setdefault((P.class_of[v], seen), []).append(v)
    return sorted(sorted(g) for g in groups.values())


def scrambled_blowup(H, size, seed):
    B = blowup(H, size).graph
    perm = list(range(B.n))
    random.Random(seed).shuffle(perm)
    return relabel(B, perm)


# --- Partition type -------------------------------------------------------


def test_partition_normalises_ids():
    P = Partition.from_class_of(["b", "a", "b", "c"])
    assert P.class_of == (0, 1, 0, 2) and P.rosters == ((0, 2), (1,), (3,))
    Q = Partition.from_rosters(4, [[3], [1], [0, 2]])
    assert Q == P and P.sizes == [2, 1, 1]
    with pytest.raises(GraphError):
        Partition.from_rosters(3, [[0], [0, 1, 2]])
    with pytest.raises(GraphError):
        Partition.from_rosters(3, [[0], [1]])


# --- packing --------------------------------------------------------------


def test_packing_examples():
    assert packing_partition(complete_bipartite(3, 3), 1).r == 2
    assert packing_partition(cycle_graph(5), 1).r == 5
    with pytest.raises(GraphError):
        packing_partition(cycle_graph(5), 0)
    with pytest.raises(GraphError):
        packing_partition(cycle_graph(5), 6)


@given(graphs(max_n=12), st.data())
def test_packing_postcondition(G, data):
    a = data.draw(st.integers(1, G.n))
    P = packing_partition(G, a)
    for roster in P.rosters:
        center = roster[0]
        for v in roster:
            if v != center:
                assert neighborhood_symdiff(G, center, v) <= a
            for u in roster:
                if u < v:
                    assert neighborhood_symdiff(G, u, v) <= 2 * a
    # centres are pairwise far apart
    centers = [r[0] for r in P.rosters]
    for i, u in enumerate(centers):
        for v in centers[i + 1:]:
            assert neighborhood_symdiff(G, u, v) > a


@given(graphs(max_n=10), st.data())
def test_packing_respects_haussler(G, data):
    a = data.draw(st.integers(1, G.n))
    d = vc_naive(G)
    assert packing_partition(G, a).r <= haussler_class_bound(d, G.n, a)


def test_twin_partition():
    assert twin_partition(cycle_graph(4)).rosters == ((0, 2), (1, 3))


# --- refine ---------------------------------------------------------------


def test_refine_examples():
    K = complete_bipartite(3, 3)
    sides = Partition.from_rosters(6, [[0, 1, 2], [3, 4, 5]])
    assert refine(K, sides) == sides
    P = Partition.from_rosters(4, [[0, 2, 3], [1]])
    out = refine(path_graph(4), P)
    assert sorted(map(list, out.rosters)) == [[0], [1], [2], [3]]
    assert sorted(map(list, out.rosters)) == refine_oracle(path_graph(4), P)
    single = Partition.from_class_of(range(5))
    assert refine(cycle_graph(5), single) == single


@given(graphs(max_n=10), st.data())
def test_refine_matches_oracle(G, data):
    labels = data.draw(st.lists(st.integers(0, 3), min_size=G.n, max_size=G.n))
    P = Partition.from_class_of(labels)
    Q = refine(G, P)
    assert sorted(map(list, Q.rosters)) == refine_oracle(G, P)
    assert Q.refines(P)
    assert Q.r <= P.r * 2 ** P.r
    if Q == P:
        assert refine(G, Q) == Q


# --- sequence and quotients ----------------------------------------------


def test_sequence_examples():
    K = complete_bipartite(3, 3)
    tr = partition_sequence(K, "1/3", 2)
    assert tr.radius == 1 and tr.depth == 2
    for P, H in zip(tr.partitions, tr.quotients):
        assert P.r == 2 and H == complete_graph(2)
    assert partition_sequence(K, "1/3", 0).depth == 0
    with pytest.raises(GraphError):
        partition_sequence(K, 0, 1)
    with pytest.raises(GraphError):
        partition_sequence(K, 1, 1)


def test_sequence_recovers_scrambled_blowup():
    A, _ = andrasfai(3, 3)
    G = scrambled_blowup(A, 4, seed=2)
    tr = partition_sequence(G, Fraction(1, 30), 3)
    P3 = tr.partitions[3]
    assert P3.r == 12 and all(len(r) == 4 for r in P3.rosters)
    assert P3 == twin_partition(G)


@given(graphs(max_n=12), st.sampled_from(["1/2", "1/5", "1/10"]), st.integers(0, 3))
def test_sequence_lineage(G, gamma, depth):
    tr = partition_sequence(G, gamma, depth)
    for j in range(depth):
        assert tr.partitions[j + 1].refines(tr.partitions[j])
    for j in range(depth + 1):
        H = tr.quotients[j]
        P = tr.partitions[j]
        assert H == quotient_graph(G, P)
        for level in range(j + 1):
            for c in range(P.r):
                anc = tr.ancestor(j, c, level)
                assert set(P.rosters[c]) <= set(tr.partitions[level].rosters[anc])
        # H_j maps onto H_i along lineage
        for i in range(j):
            for x, y in H.edges():
                ax, ay = tr.ancestor(j, x, i), tr.ancestor(j, y, i)
                assert ax == ay or tr.quotients[i].has_edge(ax, ay)


def test_quotient_examples():
    K = complete_bipartite(3, 3)
    assert quotient_graph(K, Partition.from_rosters(6, [[0, 1, 2], [3, 4, 5]])) == complete_graph(2)
    C5 = cycle_graph(5)
    assert are_isomorphic(quotient_graph(C5, Partition.from_class_of(range(5))), C5)
    bad = Partition.from_rosters(5, [[0, 1], [2, 3, 4]])
    H = quotient_graph(C5, bad)
    assert all(not H.has_edge(x, x) for x in range(H.n))
    assert internal_edges(C5, bad) == [(0, 1), (2, 3), (3, 4)]


def test_first_mixed_triple():
    P = Partition.from_rosters(4, [[0, 2], [1, 3]])
    assert first_mixed_triple(path_graph(4), P) == (1, 3, 0)
    assert first_mixed_triple(cycle_graph(4), P) is None


def test_singular_classes():
    assert singular_classes(partition_sequence(complete_bipartite(3, 3), "1/3", 1)) == frozenset()
    A, _ = andrasfai(3, 3)
    tr = partition_sequence(A, "1/100", 1)
    assert singular_classes(tr) == frozenset(range(12))
    B = blowup(A, 4).graph
    assert singular_classes(partition_sequence(B, "1/100", 1)) == frozenset()
    with pytest.raises(GraphError):
        singular_classes(partition_sequence(A, "1/100", 0))


def test_nonsingular_cycles():
    C5 = cycle_graph(5)
    tr = partition_sequence(C5, "1/100", 1)
    C = Cycle((0, 1, 2, 3, 4))
    assert not is_nonsingular_cycle(tr, 1, C)
    assert not is_nonsingular_cycle(tr, 1, C, in_graph=True)
    B = blowup(C5, 2).graph
    trB = partition_sequence(B, "1/100", 2)
    cyc = Cycle((0, 1, 2, 3, 4))
    assert is_nonsingular_cycle(trB, 2, cyc)
    assert is_nonsingular_cycle(trB, 0, Cycle((0, 2, 4, 6, 8)), in_graph=True)
    with pytest.raises(GraphError):
        is_nonsingular_cycle(trB, 2, Cycle((0, 2, 4)))


def test_lift_walk():
    K = complete_bipartite(3, 3)
    tr = partition_sequence(K, "1/3", 2)
    for start in range(6):
        c = tr.vertex_class(start, 2)
        W = lift_walk(tr, K, [c, 1 - c], start)
        assert W.is_valid_in(K) and W.vertices[0] == start
    A, _ = andrasfai(3, 3)
    B = blowup(A, 4).graph
    tr = partition_sequence(B, "1/30", 5)
    walk = [0]
    Hk = tr.quotients[5]
    while len(walk) < 5:
        walk.append(Hk.neighbors(walk[-1])[0])
    start = tr.partitions[5].rosters[walk[0]][1]
    W = lift_walk(tr, B, walk, start)
    assert W.is_valid_in(B) and W.length == 4
    # x_i lies in the level-(i+1) ancestor of P_i
    for step, x in enumerate(W.vertices):
        i = 5 - step
        assert tr.vertex_class(x, i) == tr.ancestor(5, walk[step], i)
    with pytest.raises(GraphError):
        lift_walk(tr, B, walk, tr.partitions[5].rosters[walk[1]][0])


def test_tower_and_haussler():
    assert tower_at_least(1, 5, 5) and not tower_at_least(1, 5, 6)
    assert tower_at_least(2, 3, 24) and not tower_at_least(2, 3, 25)
    assert tower_at_least(3, 3, 10 ** 6)
    assert haussler_class_bound(0, 10, 1) == math.ceil(math.e)
    assert haussler_class_bound(1, 10, 2) == math.ceil(math.e * 2 * 2 * math.e * 5)


# --- decomposition pipelines ---------------------------------------------


def test_decompose_blowup_a33():
    A, _ = andrasfai(3, 3)
    B = scrambled_blowup(A, 4, seed=9)
    cert = decompose_blowup(B, 3, "1/20")
    assert isinstance(cert, BlowupCertificate)
    assert cert.minimal_quotient.n == 12 and are_isomorphic(cert.minimal_quotient, A)
    assert blowup_matches(B, cert.minimal_quotient, cert.minimal_classes)
    assert cert.c2km1_free and all(cert.nonsingular_free) and cert.tower_bound_ok
    assert cert.gamma == Fraction(1, 360)
    assert verify_certificate(B, json.loads(json.dumps(cert.to_json())))[0]


def test_decompose_twin_free_input():
    A, _ = andrasfai(3, 3)
    cert = decompose_blowup(A, 3, "1/20")
    assert all(len(c) == 1 for c in cert.classes) and are_isomorphic(cert.quotient, A)


def test_decompose_failures():
    rep = decompose_blowup(empty_graph(6), 3, "1/20")
    assert isinstance(rep, FailureReport) and rep.reason == "min-degree"
    rep = decompose_blowup(complete_multipartite(3, 3, 3), 3, "1/20")
    assert rep.reason == "not-free"
    # C_8 blown up: bipartite, dense enough, but not maximal C_5-free
    B = blowup(cycle_graph(8), 3).graph
    rep = decompose_blowup(B, 3, "1/20")
    assert rep.reason == "not-maximal"
    assert rep.to_json()["ok"] is False


def test_decompose_mixed_pair_without_maximality():
    # K_{10,10} minus the edge 0-10: vertices 0 and 1 are near-twins and share a class
    K = complete_bipartite(10, 10)
    rows = list(K.rows)
    rows[0] &= ~(1 << 10)
    rows[10] &= ~1
    G = Graph(20, tuple(rows))
    rep = decompose_blowup(G, 3, "1/20", gamma="1/2", check_maximality=False)
    assert rep.reason == "mixed-pair" and rep.witness == (1, 0, 10)
    u1, u2, v = rep.witness
    assert G.has_edge(u1, v) and not G.has_edge(u2, v)
    rep = decompose_blowup(K.add_edge(0, 1), 3, "1/20", gamma="1/2", check_maximality=False)
    assert rep.reason == "class-not-independent" and rep.witness == (0, 1)


def test_decompose_schedules():
    A, _ = andrasfai(3, 3)
    B = blowup(A, 2).graph
    lemma = decompose_blowup(B, 3, "1/20", schedule="lemma")
    assert lemma.schedule == "lemma" and lemma.gamma == Fraction(1, 60)
    custom = decompose_blowup(B, 3, "1/20", gamma="1/7")
    assert custom.schedule == "custom"


def test_c5_warmup():
    A, _ = andrasfai(3, 4)
    B = scrambled_blowup(A, 3, seed=4)
    cert = c5_warmup_decompose(B, "1/30")
    assert isinstance(cert, BlowupCertificate) and are_isomorphic(cert.minimal_quotient, A)
    rep = c5_warmup_decompose(B, "1/25")
    assert rep.reason == "min-degree"
    cert = c5_warmup_decompose(complete_bipartite(3, 3), "1/10")
    assert cert.minimal_quotient == complete_graph(2)
    rep = c5_warmup_decompose(cycle_graph(7), "1/10")
    assert rep.reason == "not-maximal"


def test_verify_certificate_rejects_tampering():
    A, _ = andrasfai(3, 3)
    B = blowup(A, 2).graph
    cert = decompose_blowup(B, 3, "1/20").to_json()
    cert["minimal_quotient"]["edges"] = cert["minimal_quotient"]["edges"][1:]
    assert not verify_certificate(B, cert)[0]
    cert = decompose_blowup(B, 3, "1/20").to_json()
    cert["classes"][0], cert["classes"][1] = cert["classes"][0][:1], cert["classes"][1] + cert["classes"][0][1:]
    assert not verify_certificate(B, cert)[0]
    assert not verify_certificate(B, {"ok": False})[0]


# --- hitting set and clique images ---------------------------------------


def test_hitting_set():
    A, _ = andrasfai(3, 3)
    hs = hitting_set_small_odd(blowup(A, 4).graph, 3, "1/20")
    assert hs.removed == frozenset() and hs.remainder_free
    hs = hitting_set_small_odd(A, 3, "1/20")
    assert len(hs.removed) <= hs.p1_classes and hs.remainder_free
    with pytest.raises(HypothesisError):
        hitting_set_small_odd(blowup(cycle_graph(8), 3).graph, 3, "1/20")


def test_clique_image_examples():
    G = complete_multipartite(8, 8, 8)
    parts = Partition.from_class_of([v // 8 for v in range(24)])
    rep = clique_image_pipeline(G, 4, 4, parts, "1/20")
    assert rep.quotient == complete_graph(3) and rep.clique_free and rep.homomorphism_ok
    K = complete_bipartite(5, 5)
    rep = clique_image_pipeline(K, 3, 3, Partition.from_class_of([v // 5 for v in range(10)]), "1/20")
    assert rep.quotient == complete_graph(2) and rep.clique_free
    G, meta = general_lower(4, 5, 3)
    col = Partition.from_class_of([label[0] for label in meta.labels])
    with pytest.raises(HypothesisError):
        clique_image_pipeline(G, 4, 5, col, "1/20")
    with pytest.raises(HypothesisError):
        clique_image_pipeline(K, 3, 3, Partition.from_class_of([0] * 10), "1/20")
