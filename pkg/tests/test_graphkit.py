import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ftca import config
from ftca.errors import EmptySources, NotATree, NotInGraph
from ftca.graphkit import (InducedGraph, connected_component_of, cyclic_components, distance_field,
                           has_cycle, k_core, k_core_mask, k_core_rounds, subtree_depths)
from ftca.grid import Topology

from conftest import sq


def _topo(kind, n):
    return Topology.square(n) if kind == "sq" else Topology.triangular(2 * ((n + 1) // 2))


def _nx(g: InducedGraph) -> nx.MultiGraph:
    """Independent graph view built edge by edge (tori here are at least 3 wide)."""
    t = g.topology
    m = g.flat_mask
    G = nx.MultiGraph()
    G.add_nodes_from(int(i) for i in np.flatnonzero(m))
    nbr = t.neighbor_table()
    for v in np.flatnonzero(m):
        for w in nbr[v]:
            if m[w] and v <= w:
                G.add_edge(int(v), int(w))
    return G


graphs = st.builds(lambda kind, n, p, s: InducedGraph.inactive(config.random(_topo(kind, n), p, s)),
                   st.sampled_from(["sq", "tri"]), st.integers(3, 10), st.floats(0.1, 0.7), st.integers(0, 2**32))


@given(graphs)
def test_components_match_networkx(g):
    G = _nx(g)
    t = g.topology
    for comp in nx.connected_components(G):
        v = t.cell(next(iter(comp)))
        assert connected_component_of(g, v) == frozenset(t.cell(i) for i in comp)


@given(graphs)
def test_kcore_matches_networkx_and_rounds(g):
    G = nx.Graph(_nx(g))
    for k in (2, 3):
        worklist = k_core_mask(g, k)
        assert np.array_equal(worklist, k_core_rounds(g, k))
        core = set(nx.k_core(G, k).nodes)
        assert set(np.flatnonzero(worklist)) == core


@given(graphs)
def test_cycles_match_networkx(g):
    G = _nx(g)
    cyc = cyclic_components(g)
    for comp in nx.connected_components(G):
        sub = G.subgraph(comp)
        cyclic = sub.number_of_edges() >= sub.number_of_nodes()
        assert all(cyc[i] == cyclic for i in comp)
        assert has_cycle(g, [g.topology.cell(i) for i in comp]) == cyclic


def test_double_edge_on_two_torus_is_a_cycle():
    # on a 2-torus (0,0) meets (0,1) twice, left and right
    g = InducedGraph.inactive(sq(["00", "11"]))
    assert has_cycle(g, [(0, 0), (0, 1)])


def test_subtree_depths_path():
    c = sq(["1111111", "1000001", "1111111", "1111111", "1111111", "1111111", "1111111"])
    g = InducedGraph.inactive(c)
    d = subtree_depths(g, (1, 2))
    assert d.sorted_depths() == [2, 0]
    assert d.child_subtree_depth[(0, 2)] is None


def test_subtree_depths_rejects_cycles_and_non_vertices():
    g = InducedGraph.inactive(sq(["000", "000", "000"]))
    with pytest.raises(NotATree):
        subtree_depths(g, (0, 0))
    with pytest.raises(NotInGraph):
        subtree_depths(InducedGraph.inactive(sq(["10", "00"])), (0, 0))


def test_k_core_only_two_or_three():
    with pytest.raises(ValueError):
        k_core(InducedGraph.inactive(sq(["00", "00"])), 4)


def test_distance_field():
    t = Topology.square(5)
    d = distance_field(t, [(0, 0)])
    assert d[2, 2] == 4 and d[4, 4] == 2
    with pytest.raises(EmptySources):
        distance_field(t, [])
