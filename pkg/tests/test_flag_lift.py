import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial.complex_core import per_dim_counts
from dirsimplicial.flag_lift import (
    Digraph,
    UndirectedGraph,
    lift_directed_flag,
    lift_undirected_flag,
    ordered_cliques,
    skeleton_digraph,
    symmetrize,
    to_undirected,
)

four_node_digraph = Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)])


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n, draw(st.lists(st.sampled_from(pairs), unique=True)))


def test_four_node_digraph_has_one_triangle():
    K = lift_directed_flag(four_node_digraph)

    assert per_dim_counts(K) == [4, 5, 1]
    assert K.simplices[2] == ((0, 1, 2),)
    assert (0, 2, 3) not in K


def test_directed_cycle_has_no_triangle():
    K = lift_directed_flag(Digraph(3, [(0, 1), (1, 2), (2, 0)]))

    assert K.dim == 1
    assert per_dim_counts(K) == [3, 3]


def test_undirected_lift():
    g = UndirectedGraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (0, 3)])
    K = lift_undirected_flag(g)

    assert K.simplices[2] == ((0, 1, 2), (0, 2, 3))
    assert all(simplex == tuple(sorted(simplex)) for simplex in K)


def test_max_dim():
    tournament = Digraph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])

    assert per_dim_counts(lift_directed_flag(tournament, 3)) == [4, 6, 4, 1]
    assert lift_directed_flag(tournament, 1).dim == 1

    with pytest.raises(ValueError):
        lift_directed_flag(tournament, 0)


def test_graph_validation():
    with pytest.raises(ValueError):
        Digraph(2, [(1, 1)])

    with pytest.raises(ValueError):
        Digraph(2, [(0, 2)])

    assert Digraph(2, [(0, 1), (0, 1)]).edges == frozenset({(0, 1)})
    assert to_undirected(Digraph(2, [(0, 1), (1, 0)])).edges == frozenset({(0, 1)})


def test_symmetrize_merges_orientations():
    K = lift_directed_flag(Digraph(2, [(0, 1), (1, 0)]))

    assert per_dim_counts(K) == [2, 2]
    assert per_dim_counts(symmetrize(K)) == [2, 1]


@settings(max_examples=50, deadline=None)
@given(digraphs())
def test_one_skeleton_is_the_digraph(g):
    assert skeleton_digraph(lift_directed_flag(g)) == g


@settings(max_examples=50, deadline=None)
@given(digraphs())
def test_cliques_are_ordered_cliques(g):
    for dim_list in ordered_cliques(g, 3):
        for clique in dim_list:
            pairs = [(clique[a], clique[b]) for a in range(len(clique)) for b in range(a + 1, len(clique))]
            assert all(pair in g.edges for pair in pairs)


def test_graphs_wrap_networkx():
    assert isinstance(four_node_digraph.graph, nx.DiGraph)
    assert four_node_digraph.out_neighbors(0) == frozenset({1, 2})
    assert four_node_digraph.in_neighbors(0) == frozenset({3})

    isolated = Digraph(5, [(0, 1)])
    assert isolated.graph.number_of_nodes() == 5
    assert isolated.out_neighbors(4) == frozenset()

    cycle = Digraph.from_networkx(nx.cycle_graph(4, create_using=nx.DiGraph))
    assert cycle == Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])

    undirected = to_undirected(four_node_digraph)
    assert isinstance(undirected.graph, nx.Graph)
    assert undirected.neighbors(0) == frozenset({1, 2, 3})
    assert repr(undirected) == "UndirectedGraph(n=4, edges=[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])"


def test_permuted():
    permuted = four_node_digraph.permuted([3, 2, 1, 0])

    assert permuted.edges == frozenset({(3, 2), (3, 1), (2, 1), (1, 0), (0, 3)})
    assert per_dim_counts(lift_directed_flag(permuted)) == [4, 5, 1]

    with pytest.raises(ValueError):
        four_node_digraph.permuted([0, 0, 1, 2])
