"""Directed simplicial complexes. Complex is stored per dimension as lexicographically sorted list of vertex
tuples, so every simplex has reproducible id ``SimplexId(dim, index)``.

Examples:
=========

    >>> K = build_complex([(0, 1, 2)])
    >>> per_dim_counts(K)
    [3, 3, 1]
    >>> K.simplex(face_map(K, K.index((0, 1, 2)), 0))
    (1, 2)
    >>> K.simplex(face_map(K, K.index((0, 1)), 5))
    (0,)
"""

from __future__ import annotations
from typing import Iterable, Iterator, NamedTuple, Sequence
import itertools

import numpy as np

from ._errors import DuplicateVertexInTuple, ZeroDimensional

DirectedSimplex = tuple  # Ordered tuple of vertex ids


class SimplexId(NamedTuple):
    dim: int
    index: int


def face(simplex: Sequence[int], i: int) -> tuple[int, ...]:
    """Remove vertex on position i. If i is bigger than simplex dimension, last vertex is removed.

    Args:
        simplex (Sequence[int]): Vertex tuple with at least two vertices.
        i (int): Position of removed vertex.

    Returns:
        tuple[int, ...]: Facet with remaining order preserved.
    """
    k = len(simplex) - 1
    if k < 1:
        raise ZeroDimensional(f"Simplex {tuple(simplex)} has no facets.")
    if i < 0:
        raise ValueError(f"Face map index must be non-negative, got {i}.")
    i = min(i, k)
    return tuple(simplex[:i]) + tuple(simplex[i + 1 :])


def ordered_subtuples(simplex: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All non-empty order preserving selections of positions (subsequences), including simplex itself."""
    for length in range(1, len(simplex) + 1):
        for positions in itertools.combinations(range(len(simplex)), length):
            yield tuple(simplex[p] for p in positions)


def is_ordered_subtuple(small: Sequence[int], big: Sequence[int]) -> bool:
    """Whether `small` is subsequence of `big`."""
    iterator = iter(big)
    return all(vertex in iterator for vertex in small)


class DirectedSimplicialComplex:
    """Immutable directed simplicial complex. Create it with `build_complex`, not with the class itself.

    Attributes:
        n_vertices (int): Number of vertices, vertex ids are 0..n_vertices - 1.
        simplices (tuple[tuple[tuple[int, ...], ...], ...]): Sorted simplices for every dimension.
    """

    def __init__(self, simplices: Sequence[Sequence[tuple[int, ...]]], n_vertices: int) -> None:
        simplices = list(simplices)
        # Trailing empty dimensions would break dim(K)
        while simplices and not simplices[-1]:
            simplices.pop()

        self.n_vertices = n_vertices
        self.simplices = tuple(tuple(sorted(dim_list)) for dim_list in simplices)
        self._lookup = {
            simplex: SimplexId(dim, index)
            for dim, dim_list in enumerate(self.simplices)
            for index, simplex in enumerate(dim_list)
        }
        self._facet_tables: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        """Maximal simplex dimension, -1 for empty complex."""
        return len(self.simplices) - 1

    def count(self, dim: int) -> int:
        return len(self.simplices[dim]) if 0 <= dim < len(self.simplices) else 0

    def simplex(self, simplex_id: SimplexId | tuple[int, int]) -> tuple[int, ...]:
        return self.simplices[simplex_id[0]][simplex_id[1]]

    def index(self, simplex: Sequence[int]) -> SimplexId:
        return self._lookup[tuple(simplex)]

    def get_index(self, simplex: Sequence[int]) -> SimplexId | None:
        return self._lookup.get(tuple(simplex))

    def ids(self, dim: int | None = None) -> Iterator[SimplexId]:
        dims = range(len(self.simplices)) if dim is None else [dim]
        for d in dims:
            for index in range(self.count(d)):
                yield SimplexId(d, index)

    def facet_table(self, dim: int) -> np.ndarray:
        """Array of shape (count(dim), dim + 1) where column i holds index of d_i of every simplex."""
        if dim < 1:
            raise ZeroDimensional("Vertices have no facets.")
        if dim not in self._facet_tables:
            table = np.zeros((self.count(dim), dim + 1), dtype=np.int64)
            for index, simplex in enumerate(self.simplices[dim] if dim <= self.dim else ()):
                for i in range(dim + 1):
                    table[index, i] = self._lookup[face(simplex, i)].index
            table.setflags(write=False)
            self._facet_tables[dim] = table
        return self._facet_tables[dim]

    def __contains__(self, simplex: object) -> bool:
        return tuple(simplex) in self._lookup  # type: ignore

    def __len__(self) -> int:
        return len(self._lookup)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for dim_list in self.simplices:
            yield from dim_list

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedSimplicialComplex):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.simplices))

    def __repr__(self) -> str:
        counts = " ".join(f"{d}:{c}" for d, c in enumerate(per_dim_counts(self)))
        return f"DirectedSimplicialComplex({counts})"


def _check_tuple(simplex: Sequence[int]) -> tuple[int, ...]:
    simplex = tuple(int(vertex) for vertex in simplex)
    if not simplex:
        raise ValueError("Simplex must contain at least one vertex.")
    if len(set(simplex)) != len(simplex):
        raise DuplicateVertexInTuple(f"Vertex repeated in {simplex}.")
    if min(simplex) < 0:
        raise ValueError(f"Vertex ids must be non-negative, got {simplex}.")
    return simplex


def build_complex(
    generators: Iterable[Sequence[int]], n_vertices: int | None = None
) -> DirectedSimplicialComplex:
    """Close generators under ordered subtuples.

    Args:
        generators (Iterable[Sequence[int]]): Directed simplices, e.g. ``[(0, 1, 2), (0, 2, 3)]``.
        n_vertices (int | None, optional): If None, vertex ids are compacted to 0..|V|-1 preserving their
            relative order. If number is given, ids are expected to be already dense and all the vertices
            0..n_vertices - 1 are added even if isolated. Defaults to None.

    Raises:
        DuplicateVertexInTuple: If some generator repeats a vertex.

    Returns:
        DirectedSimplicialComplex: Complex with generators and all their faces.

    Examples:
        >>> per_dim_counts(build_complex([(0, 1, 2), (0, 2, 3)]))
        [4, 5, 2]
        >>> (0, 3) in build_complex([(0, 1, 2), (0, 2, 3)])
        True
    """
    checked = [_check_tuple(simplex) for simplex in generators]

    if n_vertices is None:
        labels = sorted({vertex for simplex in checked for vertex in simplex})
        rank = {label: position for position, label in enumerate(labels)}
        checked = [tuple(rank[vertex] for vertex in simplex) for simplex in checked]
        n_vertices = len(labels)
    else:
        for simplex in checked:
            if max(simplex) >= n_vertices:
                raise ValueError(f"Vertex id in {simplex} out of range for {n_vertices} vertices.")

    by_dim: list[set[tuple[int, ...]]] = [set() for _ in range(max((len(s) for s in checked), default=0))]
    if n_vertices and not by_dim:
        by_dim = [set()]

    for simplex in checked:
        if simplex in by_dim[len(simplex) - 1]:
            continue
        for subtuple in ordered_subtuples(simplex):
            by_dim[len(subtuple) - 1].add(subtuple)

    if by_dim:
        by_dim[0].update((vertex,) for vertex in range(n_vertices))

    return DirectedSimplicialComplex([sorted(dim_set) for dim_set in by_dim], n_vertices)


def face_map(K: DirectedSimplicialComplex, simplex_id: SimplexId, i: int) -> SimplexId:
    """Face map d_i on stored simplex. For i >= dim the last vertex is removed.

    Raises:
        ZeroDimensional: If simplex is a vertex.
    """
    return K.index(face(K.simplex(simplex_id), i))


def skeleton(K: DirectedSimplicialComplex, k: int) -> DirectedSimplicialComplex:
    """Complex of all simplices of K with dimension at most k."""
    if k < 0:
        raise ValueError("Skeleton dimension must be non-negative.")
    if k >= K.dim:
        return K
    return DirectedSimplicialComplex(K.simplices[: k + 1], K.n_vertices)


def per_dim_counts(K: DirectedSimplicialComplex) -> list[int]:
    return [len(dim_list) for dim_list in K.simplices]


def is_inclusive(K: DirectedSimplicialComplex) -> bool:
    """Every facet of every stored simplex is stored (which implies all ordered subtuples are)."""
    return all(
        face(simplex, i) in K
        for dim_list in K.simplices[1:]
        for simplex in dim_list
        for i in range(len(simplex))
    )


def permute_vertices(K: DirectedSimplicialComplex, permutation: Sequence[int]) -> DirectedSimplicialComplex:
    """Relabel vertex v to permutation[v]. Result is isomorphic to K."""
    if sorted(permutation) != list(range(K.n_vertices)):
        raise ValueError("Permutation must be a bijection on vertex ids.")
    return DirectedSimplicialComplex(
        [[tuple(permutation[v] for v in simplex) for simplex in dim_list] for dim_list in K.simplices],
        K.n_vertices,
    )
