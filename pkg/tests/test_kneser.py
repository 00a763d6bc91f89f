from __future__ import annotations

import itertools
from math import comb

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkcert.kneser import (
    GKParams,
    Graph,
    build_graph,
    is_odd_cycle,
    mask_to_set,
    odd_girth_exceeds,
    set_to_mask,
    subset_masks,
    triangle_free_packed,
    vertex_rank,
    vertex_unrank,
)


def all_params(d_max):
    for d in range(1, d_max + 1):
        for s in range(1, d + 1):
            for m in range(1, s + 1):
                yield GKParams(d, s, m)


def nx_kneser(d, s, m):
    verts = [frozenset(c) for c in itertools.combinations(range(1, d + 1), s)]
    G = nx.Graph()
    G.add_nodes_from(verts)
    G.add_edges_from((a, b) for a, b in itertools.combinations(verts, 2) if len(a & b) < m)
    return G


def nx_odd_girth(G):
    """Shortest odd closed walk via the bipartite double cover; inf if bipartite."""
    H = nx.Graph()
    for u, v in G.edges:
        H.add_edge((u, 0), (v, 1))
        H.add_edge((u, 1), (v, 0))
    best = float("inf")
    for v in G.nodes:
        if (v, 0) in H:
            try:
                best = min(best, nx.shortest_path_length(H, (v, 0), (v, 1)))
            except nx.NetworkXNoPath:
                pass
    return best


def test_params_validation():
    with pytest.raises(ValueError):
        GKParams(4, 2, 0)
    with pytest.raises(ValueError):
        GKParams(4, 5, 1)
    with pytest.raises(ValueError):
        GKParams(64, 2, 1)
    assert GKParams(12, 6, 2).n == 924


def test_colex_examples():
    assert mask_to_set(vertex_unrank(0, 4, 2)) == {1, 2}
    assert vertex_rank(set_to_mask({3, 4}), 4, 2) == 5
    assert [sorted(mask_to_set(int(x))) for x in subset_masks(4, 2)] == [
        [1, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 4],
    ]


def test_rank_unrank_bijection():
    for i in range(comb(8, 4)):
        assert vertex_rank(vertex_unrank(i, 8, 4), 8, 4) == i
    masks = subset_masks(8, 4)
    assert all(vertex_rank(int(x), 8, 4) == i for i, x in enumerate(masks))
    assert np.all(np.diff(masks.astype(np.int64)) > 0)


@settings(max_examples=200)
@given(st.integers(1, 40).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, d))).flatmap(
    lambda ds: st.tuples(st.just(ds[0]), st.just(ds[1]), st.integers(0, comb(ds[0], ds[1]) - 1))))
def test_rank_unrank_roundtrip_property(dsi):
    d, s, i = dsi
    mask = vertex_unrank(i, d, s)
    assert mask.bit_count() == s and mask < 1 << d
    assert vertex_rank(mask, d, s) == i


def test_rank_rejects_bad_masks():
    with pytest.raises(ValueError):
        vertex_rank(0b111, 4, 2)
    with pytest.raises(ValueError):
        vertex_rank(1 << 5, 4, 1)
    with pytest.raises(ValueError):
        vertex_unrank(6, 4, 2)


def test_small_graphs():
    G = build_graph(GKParams(4, 2, 1))
    assert G.n == 6 and G.num_edges() == 3
    assert all(len(G.neighbors(v)) == 1 for v in range(6))
    G = build_graph(GKParams(5, 2, 1))
    assert G.n == 10 and G.num_edges() == 15
    assert nx.is_isomorphic(nx.Graph(G.edges()), nx.petersen_graph())
    G = build_graph(GKParams(6, 3, 3))
    assert G.num_edges() == comb(20, 2)


@pytest.mark.parametrize("params", list(all_params(7)), ids=str)
def test_edges_match_networkx(params):
    G = build_graph(params)
    H = nx_kneser(params.d, params.s, params.m)
    index = {mask_to_set(int(x)): i for i, x in enumerate(G.masks)}
    theirs = sorted(tuple(sorted((index[a], index[b]))) for a, b in H.edges)
    assert G.edges() == theirs


@pytest.mark.parametrize("params", list(all_params(10)), ids=str)
def test_degree_formula(params):
    G = build_graph(params)
    expect = sum(comb(params.s, i) * comb(params.d - params.s, params.s - i) for i in range(params.m))
    degrees = {len(G.neighbors(v)) for v in range(G.n)}
    assert degrees == {expect} == {params.degree}


@settings(max_examples=100)
@given(st.sampled_from(list(all_params(12))), st.data())
def test_adjacency_symmetric_irreflexive(params, data):
    G = build_graph(params)
    u = data.draw(st.integers(0, G.n - 1))
    v = data.draw(st.integers(0, G.n - 1))
    assert G.adjacent(u, v) == G.adjacent(v, u)
    assert not G.adjacent(u, u)
    assert G.adjacent(u, v) == (u != v and len(G.vertex_set(u) & G.vertex_set(v)) < params.m)


def test_odd_girth_examples():
    assert odd_girth_exceeds(build_graph(GKParams(12, 6, 2)), 3)
    K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    res = odd_girth_exceeds(K3, 3)
    assert not res and len(res.cycle) == 3 and is_odd_cycle(K3, res.cycle)
    P = build_graph(GKParams(5, 2, 1))
    assert odd_girth_exceeds(P, 3)
    res = odd_girth_exceeds(P, 5)
    assert not res.exceeds and len(res.cycle) == 5 and is_odd_cycle(P, res.cycle)


def test_odd_girth_rejects_even_ell():
    with pytest.raises(ValueError):
        odd_girth_exceeds(Graph(3), 4)
    with pytest.raises(ValueError):
        odd_girth_exceeds(Graph(3), 1)


@settings(max_examples=150)
@given(st.integers(1, 11), st.data())
def test_odd_girth_against_double_cover(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    G = Graph(n, edges)
    H = nx.Graph()
    H.add_nodes_from(range(n))
    H.add_edges_from(edges)
    og = nx_odd_girth(H)
    for ell in (3, 5, 7, 9):
        res = odd_girth_exceeds(G, ell)
        assert res.exceeds == (og > ell)
        if not res.exceeds:
            assert is_odd_cycle(G, res.cycle) and len(res.cycle) == og


@pytest.mark.parametrize("d", [2, 4, 6, 8, 10, 12, 14])
def test_small_intersections_kill_short_odd_cycles(d):
    for ell in range(3, d + 1, 2):
        for m in range(1, d // (2 * ell) + 1):
            G = build_graph(GKParams(d, d // 2, m))
            assert odd_girth_exceeds(G, ell), (d, m, ell)


def test_odd_girth_is_tight_above_threshold():
    # m one past the bound admits a short odd cycle
    G = build_graph(GKParams(12, 6, 3))
    res = odd_girth_exceeds(G, 3)
    assert not res and is_odd_cycle(G, res.cycle)


@pytest.mark.parametrize("params", [GKParams(10, 5, 1), GKParams(10, 5, 2), GKParams(12, 6, 2), GKParams(9, 4, 2), GKParams(5, 2, 1)], ids=str)
def test_packed_triangle_check_agrees(params):
    G = build_graph(params)
    a = odd_girth_exceeds(G, 3)
    b = triangle_free_packed(G.packed_adjacency(), G.n)
    assert a.exceeds == b.exceeds
    if not b.exceeds:
        assert is_odd_cycle(G, b.cycle)


def test_induced_and_complement():
    G = build_graph(GKParams(6, 3, 2))
    C = G.complement()
    for u in range(0, G.n, 3):
        for v in range(G.n):
            assert C.adjacent(u, v) == (u != v and not G.adjacent(u, v))
    sub = G.induced([0, 5, 7, 19])
    for i, u in enumerate([0, 5, 7, 19]):
        for j, v in enumerate([0, 5, 7, 19]):
            assert sub.adjacent(i, j) == G.adjacent(u, v)


def test_json_export():
    G = build_graph(GKParams(5, 2, 1))
    data = G.to_json(with_edges=True)
    assert {k: data[k] for k in ("d", "s", "m", "n")} == {"d": 5, "s": 2, "m": 1, "n": 10}
    assert "vertex_encoding" in data and len(data["edges"]) == 15
    assert "edges" not in G.to_json()
