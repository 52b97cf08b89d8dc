"""Graph liftings. Digraph is lifted into directed flag complex (k-simplices are ordered (k+1)-cliques),
undirected graph into flag complex stored in the same container with ascending vertex order.

Graph containers wrap `networkx` graphs with vertices 0..n - 1, so networkx algorithms can be used on
`Digraph.graph` directly.

Examples:
=========

    >>> from dirsimplicial.complex_core import per_dim_counts
    >>> four_cycle_with_chord = Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)])
    >>> per_dim_counts(lift_directed_flag(four_cycle_with_chord))
    [4, 5, 1]
    >>> per_dim_counts(lift_directed_flag(Digraph(3, [(0, 1), (1, 2), (2, 0)])))
    [3, 3]
"""

from __future__ import annotations
from typing import Iterable, Sequence
import functools

import networkx as nx

from .complex_core import DirectedSimplicialComplex


def _checked_edges(n: int, edges: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    checked = []
    for edge in edges:
        u, v = int(edge[0]), int(edge[1])
        if u == v:
            raise ValueError(f"Self loop ({u}, {v}) is not allowed.")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"Edge ({u}, {v}) out of range for {n} vertices.")
        checked.append((u, v))
    return checked


class Digraph:
    """Directed graph without self loops. Edges are deduplicated.

    Attributes:
        n (int): Number of vertices, ids 0..n - 1.
        graph (nx.DiGraph): Underlying networkx graph.
        edges (frozenset[tuple[int, int]]): Directed edges (u, v).
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()) -> None:
        self.n = n
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(range(n))
        self.graph.add_edges_from(_checked_edges(n, edges))
        self.edges = frozenset(self.graph.edges)

    @classmethod
    def from_networkx(cls, graph: nx.DiGraph) -> Digraph:
        """Graph with nodes 0..n - 1, e.g. from `nx.relabel_nodes` or networkx generators."""
        return cls(graph.number_of_nodes(), graph.edges)

    def out_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self.graph.successors(v))

    def in_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self.graph.predecessors(v))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def permuted(self, permutation: Sequence[int]) -> Digraph:
        """Relabel vertex v to permutation[v]."""
        if sorted(permutation) != list(range(self.n)):
            raise ValueError("Permutation must be a bijection on vertex ids.")
        return Digraph.from_networkx(nx.relabel_nodes(self.graph, dict(enumerate(permutation))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={self.sorted_edges()})"


class UndirectedGraph:
    """Undirected graph without self loops. Edges are stored as (min, max) pairs.

    Attributes:
        n (int): Number of vertices, ids 0..n - 1.
        graph (nx.Graph): Underlying networkx graph.
        edges (frozenset[tuple[int, int]]): Edges (u, v) with u < v.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()) -> None:
        self.n = n
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(n))
        self.graph.add_edges_from(_checked_edges(n, edges))
        self.edges = frozenset((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self.graph.neighbors(v))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, edges={self.sorted_edges()})"


def ordered_cliques(g: Digraph, max_dim: int) -> list[list[tuple[int, ...]]]:
    """Ordered cliques grouped by dimension. Frontier of k-cliques is extended by common out-neighbors of all
    its vertices, so only existing cliques are ever touched."""
    frontier = [(v,) for v in range(g.n)]
    by_dim = [frontier]

    for _ in range(max_dim):
        extended = []
        for clique in frontier:
            candidates = functools.reduce(
                frozenset.intersection, (g.out_neighbors(v) for v in clique[1:]), g.out_neighbors(clique[0])
            )
            extended.extend(clique + (w,) for w in sorted(candidates))
        if not extended:
            break
        by_dim.append(extended)
        frontier = extended

    return by_dim


def lift_directed_flag(g: Digraph, max_dim: int = 2) -> DirectedSimplicialComplex:
    """Directed flag complex of g truncated at max_dim.

    Args:
        g (Digraph): Lifted digraph.
        max_dim (int, optional): Maximal simplex dimension. Defaults to 2 (nodes, edges, triangles).

    Returns:
        DirectedSimplicialComplex: Complex whose k-simplices are tuples (v_0, ..., v_k) with (v_i, v_j)
        an edge for all i < j.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be at least 1.")
    return DirectedSimplicialComplex(ordered_cliques(g, max_dim), g.n)


def lift_undirected_flag(g: UndirectedGraph, max_dim: int = 2) -> DirectedSimplicialComplex:
    """Flag complex of g. Every clique is stored once with ascending vertex order.

    Examples:
        >>> from dirsimplicial.complex_core import per_dim_counts
        >>> graph = UndirectedGraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (0, 3)])
        >>> lift_undirected_flag(graph).simplices[2]
        ((0, 1, 2), (0, 2, 3))
    """
    return lift_directed_flag(Digraph(g.n, g.edges), max_dim)


def symmetrize(K: DirectedSimplicialComplex) -> DirectedSimplicialComplex:
    """Forget vertex order. Every simplex is replaced by its sorted representative, duplicates collapse."""
    return DirectedSimplicialComplex(
        [{tuple(sorted(simplex)) for simplex in dim_list} for dim_list in K.simplices], K.n_vertices
    )


def to_undirected(g: Digraph) -> UndirectedGraph:
    return UndirectedGraph(g.n, g.graph.to_undirected().edges)


def skeleton_digraph(K: DirectedSimplicialComplex) -> Digraph:
    """Digraph made of vertices and edges of K."""
    return Digraph(K.n_vertices, K.simplices[1] if K.dim >= 1 else ())
