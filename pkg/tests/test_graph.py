import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from oracles import are_isomorphic, clique_naive, has_cycle_naive, has_cycle_nx, has_induced_cycle_naive, to_nx
from strategies import closed_walks, graphs
from threshold_lab.constructions import andrasfai, general_lower, lower_even
from threshold_lab.graph import (
    Cycle,
    Graph,
    GraphError,
    VertexMap,
    Walk,
    blowup,
    build_graph,
    common_neighbors,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    extract_odd_cycle_from_walk,
    find_clique,
    find_cycle_of_length,
    find_cycle_through,
    find_induced_cycle,
    is_family_free,
    is_twin_free,
    iter_cliques,
    min_degree,
    neighborhood_symdiff,
    path_graph,
    relabel,
    twin_quotient,
    verify_homomorphism,
)


# --- construction ---------------------------------------------------------


def test_build_smallest_edge():
    G = build_graph(2, [(0, 1)])
    assert G.m == 1 and G.has_edge(1, 0)


def test_build_cycle_degrees():
    G = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert all(G.degree(v) == 2 for v in range(5))


def test_build_dedups():
    assert build_graph(3, [(0, 1), (0, 1), (1, 0)]).m == 1


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 1)]])
def test_build_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        build_graph(3, edges)


def test_build_rejects_empty_vertex_set():
    with pytest.raises(GraphError):
        build_graph(0, [])


def test_raw_rows_must_be_symmetric():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))
    with pytest.raises(GraphError):
        Graph(1, (1,))


@given(graphs())
def test_rows_symmetric_and_loopless(G):
    for u in range(G.n):
        assert not G.rows[u] >> u & 1
        for v in G.neighbors(u):
            assert G.has_edge(v, u)
    assert G.m == sum(G.degree(v) for v in range(G.n)) // 2


# --- degrees and neighbourhoods -------------------------------------------


def test_min_degree_examples():
    assert min_degree(andrasfai(3, 3)[0]) == 3
    assert min_degree(empty_graph(4)) == 0
    assert min_degree(lower_even(2, 5)[0]) == 6


def test_symdiff_examples():
    K = complete_bipartite(3, 3)
    assert neighborhood_symdiff(K, 0, 1) == 0
    C5 = cycle_graph(5)
    assert neighborhood_symdiff(C5, 0, 1) == 4
    assert neighborhood_symdiff(C5, 0, 2) == 2
    with pytest.raises(GraphError):
        neighborhood_symdiff(C5, 1, 1)


def test_common_neighbors_examples():
    assert common_neighbors(cycle_graph(5), 0, 2) == {1}
    assert common_neighbors(complete_bipartite(3, 3), 0, 1) == {3, 4, 5}
    G, meta = lower_even(2, 6)
    i = 3
    u, v = meta.index_of((1, (i,))), meta.index_of((2, (i,)))
    assert common_neighbors(G, u, v) == {meta.index_of((3, (i,))), meta.index_of((4, (i,)))}
    with pytest.raises(GraphError):
        common_neighbors(G, u, u)


@given(graphs())
def test_triangle_free_edges_have_no_common_neighbours(G):
    if find_cycle_of_length(G, 3) is None:
        for u, v in G.edges():
            assert not common_neighbors(G, u, v)


# --- cycles ---------------------------------------------------------------


def test_cycle_examples():
    C7 = cycle_graph(7)
    c = find_cycle_of_length(C7, 7)
    assert c is not None and c.is_valid_in(C7)
    assert find_cycle_of_length(C7, 5) is None
    assert find_cycle_of_length(andrasfai(3, 3)[0], 5) is None
    with pytest.raises(GraphError):
        find_cycle_of_length(C7, 2)


def test_induced_cycle_examples():
    assert find_induced_cycle(cycle_graph(6), 6) is not None
    assert find_induced_cycle(cycle_graph(7), 6) is None
    assert find_induced_cycle(complete_bipartite(3, 3), 6) is None
    assert not has_induced_cycle_naive(complete_bipartite(3, 3), 6)


def test_family_free_examples():
    assert is_family_free(andrasfai(3, 4)[0], {3, 5})[0]
    ok, wit = is_family_free(cycle_graph(5), {3, 5})
    assert not ok and wit.length == 5
    assert is_family_free(complete_bipartite(3, 3), {3, 5, 7})[0]


def test_family_free_returns_shortest_witness():
    # K_4 has 3- and 4-cycles
    ok, wit = is_family_free(complete_graph(4), {4, 3})
    assert not ok and wit.length == 3


@given(graphs(max_n=8), st.integers(3, 7))
def test_cycle_search_matches_naive(G, length):
    found = find_cycle_of_length(G, length)
    assert (found is not None) == has_cycle_naive(G, length)
    if found is not None:
        assert found.length == length and found.is_valid_in(G)


@given(graphs(max_n=10), st.integers(3, 7))
def test_cycle_search_matches_networkx(G, length):
    assert (find_cycle_of_length(G, length) is not None) == has_cycle_nx(G, length)


@given(graphs(max_n=8), st.integers(3, 7))
def test_induced_cycle_matches_naive(G, length):
    found = find_induced_cycle(G, length)
    assert (found is not None) == has_induced_cycle_naive(G, length)
    if found is not None:
        sub = G.induced(found.vertices)
        assert sub.m == length


@given(graphs(max_n=9), st.integers(3, 6), st.data())
def test_cycle_through_vertex(G, length, data):
    v = data.draw(st.integers(0, G.n - 1))
    c = find_cycle_through(G, v, length)
    expected = any(
        len(cyc) == length and v in cyc
        for cyc in nx.simple_cycles(to_nx(G), length_bound=length)
    )
    assert (c is not None) == expected
    if c is not None:
        assert v in c.vertices and c.is_valid_in(G) and c.length == length


# --- cliques --------------------------------------------------------------


def test_clique_examples():
    assert find_clique(complete_graph(4), 4) == (0, 1, 2, 3)
    assert find_clique(lower_even(2, 4)[0], 3) is None
    assert find_clique(general_lower(4, 5, 3)[0], 4) is None


@given(graphs(max_n=8), st.integers(1, 5))
def test_clique_matches_naive(G, s):
    c = find_clique(G, s)
    assert (c is not None) == clique_naive(G, s)
    cliques = list(iter_cliques(G, s))
    assert cliques == sorted(cliques)
    if c is not None:
        assert c == cliques[0]


# --- homomorphisms and blowups -------------------------------------------


def test_homomorphism_examples():
    G = andrasfai(3, 3)[0]
    assert verify_homomorphism(G, G, VertexMap(G.n, G.n, tuple(range(G.n)))) is None
    B = blowup(G, 4)
    assert verify_homomorphism(B.graph, G, B.projection()) is None
    C5, K2 = cycle_graph(5), complete_graph(2)
    for colors in itertools.product((0, 1), repeat=5):
        assert verify_homomorphism(C5, K2, VertexMap(5, 2, colors)) is not None
    with pytest.raises(GraphError):
        VertexMap(2, 1, (0, 1))


def test_homomorphism_reports_least_edge():
    P = path_graph(3)
    bad = verify_homomorphism(P, empty_graph(2), VertexMap(3, 2, (0, 1, 0)))
    assert bad == (0, 1)


def test_blowup_examples():
    assert blowup(complete_graph(2), (3, 3)).graph == complete_bipartite(3, 3)
    assert blowup(empty_graph(1), (5,)).graph == empty_graph(5)
    B = blowup(andrasfai(3, 3)[0], 4).graph
    assert B.n == 48 and all(B.degree(v) == 12 for v in range(48))
    with pytest.raises(GraphError):
        blowup(complete_graph(2), (1, 0))


def test_twin_quotient_examples():
    H, P = twin_quotient(complete_bipartite(3, 3))
    assert H == complete_graph(2) and P.sizes == [3, 3]
    A = andrasfai(3, 4)[0]
    H, P = twin_quotient(A)
    assert H == A and all(s == 1 for s in P.sizes)
    H, P = twin_quotient(cycle_graph(4))
    assert H == complete_graph(2) and P.rosters == ((0, 2), (1, 3))


@given(graphs(max_n=9))
def test_twin_quotient_roundtrip(G):
    H, P = twin_quotient(G)
    assert is_twin_free(H)
    B = blowup(H, P.sizes)
    perm = [0] * G.n
    for c, roster in enumerate(P.rosters):
        for v, b in zip(roster, B.rosters[c]):
            perm[v] = b
    assert relabel(G, perm) == B.graph


@given(graphs(max_n=7), st.lists(st.integers(1, 3), min_size=7, max_size=7))
def test_blowup_structure(H, sizes):
    sizes = sizes[: H.n]
    B = blowup(H, sizes)
    assert B.graph.n == sum(sizes)
    phi = B.projection()
    for u in range(B.graph.n):
        for v in range(u + 1, B.graph.n):
            assert B.graph.has_edge(u, v) == H.has_edge(phi(u), phi(v))
    assert are_isomorphic(twin_quotient(B.graph)[0], twin_quotient(H)[0])


# --- odd walks ------------------------------------------------------------


def test_odd_walk_examples():
    K3 = complete_graph(3)
    out = extract_odd_cycle_from_walk(K3, Walk((0, 1, 2, 0)))
    assert not out.repeated and sorted(out.cycle.vertices) == [0, 1, 2]
    G = build_graph(4, [(0, 1), (0, 2), (2, 3), (0, 3)])
    out = extract_odd_cycle_from_walk(G, Walk((0, 1, 0, 2, 3, 0)))
    assert out.repeated and out.repeated_vertex == 0
    assert sorted(out.cycle.vertices) == [0, 2, 3]
    for bad in [(0, 1), (0, 1, 0), (0, 1, 2)]:
        with pytest.raises(GraphError):
            extract_odd_cycle_from_walk(K3, Walk(bad))


@given(graphs(min_n=3, max_n=8), st.data())
def test_odd_walk_extraction_properties(G, data):
    walk = data.draw(closed_walks(G))
    if walk is None or walk[-1] not in G.neighbors(walk[0]):
        return
    walk = walk + [walk[0]]
    W = Walk(tuple(walk))
    if W.length % 2 == 0:
        return
    out = extract_odd_cycle_from_walk(G, W)
    assert out.cycle.is_valid_in(G) and out.cycle.length % 2 == 1
    walk_edges = {frozenset(e) for e in W.edges()}
    assert {frozenset(e) for e in out.cycle.edges()} <= walk_edges
    is_cycle = len(set(walk[:-1])) == len(walk) - 1
    assert out.repeated != is_cycle
    if out.repeated:
        assert out.cycle.length <= W.length - 2
        assert walk[:-1].count(out.repeated_vertex) >= 2
        assert out.repeated_vertex in out.cycle.vertices


def test_cycle_validation():
    C = Cycle((0, 1, 2))
    assert C.is_valid_in(complete_graph(3))
    assert not Cycle((0, 1)).is_valid_in(complete_graph(3))
    assert not Cycle((0, 1, 0)).is_valid_in(complete_graph(3))
