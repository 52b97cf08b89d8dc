"""Directed neighbourhoods of simplices. Lower and upper (k, i, j)-adjacencies are stored with their witnesses
(sigma, tau, kappa), because message functions need kappa. Every relation can be turned into sparse operator
(scipy.sparse CSR, rows sigma, columns tau, canonical SimplexId order).

Relations never contain self pairs (sigma, sigma).

Examples:
=========

    >>> from dirsimplicial.complex_core import build_complex
    >>> K = build_complex([(0, 1, 2), (1, 2, 3)])
    >>> relation = lower_adjacency(K, 2, 1, 0, 2)
    >>> [(K.simplex((2, s)), K.simplex((2, t)), K.simplex((1, k))) for s, t, k in relation.witnesses]
    [((0, 1, 2), (1, 2, 3), (1, 2))]
"""

from __future__ import annotations
from typing import Iterable, NamedTuple, Sequence
from typing_extensions import Literal
import itertools

import numpy as np
from scipy import sparse

from .complex_core import DirectedSimplicialComplex, SimplexId, face
from ._errors import IndexOutOfRange, ZeroDimensional


class AdjacencySpec(NamedTuple):
    """One choice of directed adjacency. ``AdjacencySpec("down", 1, 0, 1)`` is the lower (1, 0, 1)-adjacency."""

    direction: Literal["down", "up"]
    k: int
    i: int
    j: int

    @property
    def name(self) -> str:
        return f"{self.direction}_{self.k}_{self.i}_{self.j}"

    @property
    def transposed(self) -> AdjacencySpec:
        return AdjacencySpec(self.direction, self.k, self.j, self.i)

    @classmethod
    def from_name(cls, name: str) -> AdjacencySpec:
        """Parse ``"down_1_0_1"`` like names."""
        try:
            direction, k, i, j = name.split("_")
            spec = cls(direction, int(k), int(i), int(j))  # type: ignore
        except ValueError:
            raise ValueError(f"Relation name must look like 'down_1_0_1', got '{name}'.") from None
        if spec.direction not in ("down", "up") or spec.k < 1 or spec.i < 0 or spec.j < 0:
            raise ValueError(f"Invalid relation '{name}'.")
        return spec

    def max_index(self, dim: int) -> int:
        """Biggest face map index allowed when relating dim-simplices."""
        return dim if self.direction == "down" else dim + self.k

    def is_valid_for(self, dim: int) -> bool:
        if self.direction == "down" and dim < 1:
            return False
        return max(self.i, self.j) <= self.max_index(dim)


class AdjacencyRelation:
    """Relation between simplices of one dimension.

    Attributes:
        spec (AdjacencySpec): Defining direction and indices.
        dim (int): Dimension of related simplices.
        kappa_dim (int): Dimension of witnesses.
        witnesses (np.ndarray): Int array of shape (m, 3) with rows (sigma, tau, kappa) indexes, sorted.
        size (int): Number of dim-simplices (matrix is size x size).
    """

    def __init__(
        self,
        spec: AdjacencySpec,
        dim: int,
        kappa_dim: int,
        witnesses: Iterable[tuple[int, int, int]],
        size: int,
        kappa_size: int,
    ) -> None:
        self.spec = spec
        self.dim = dim
        self.kappa_dim = kappa_dim
        self.size = size
        self.kappa_size = kappa_size
        self.witnesses = np.array(sorted(set(witnesses)), dtype=np.int64).reshape(-1, 3)
        self.witnesses.setflags(write=False)

        rows, cols = self.witnesses[:, 0], self.witnesses[:, 1]
        matrix = sparse.csr_matrix(
            (np.ones(len(rows), dtype=bool), (rows, cols)), shape=(size, size), dtype=bool
        )
        matrix.sum_duplicates()
        self.matrix = matrix

    def __len__(self) -> int:
        return len(self.witnesses)

    def pairs(self) -> set[tuple[int, int]]:
        return {(int(s), int(t)) for s, t, _ in self.witnesses}

    def row(self, sigma: int) -> list[int]:
        return sorted(self.matrix.indices[self.matrix.indptr[sigma] : self.matrix.indptr[sigma + 1]].tolist())

    def message_matrix(self) -> sparse.csr_matrix:
        """Float operator counting witnesses of every (sigma, tau) pair. For k = 1 it equals the boolean one."""
        return sparse.csr_matrix(
            (np.ones(len(self.witnesses)), (self.witnesses[:, 0], self.witnesses[:, 1])),
            shape=(self.size, self.size),
        )

    def kappa_matrix(self) -> sparse.csr_matrix:
        """Float operator of shape (size, kappa_size) counting witnesses kappa of every sigma."""
        return sparse.csr_matrix(
            (np.ones(len(self.witnesses)), (self.witnesses[:, 0], self.witnesses[:, 2])),
            shape=(self.size, self.kappa_size),
        )

    def __repr__(self) -> str:
        return f"AdjacencyRelation({self.spec.name}, dim={self.dim}, witnesses={len(self)})"


class IncidenceRelation:
    """Boundary or coboundary incidence. Pairs are (sigma, tau) indexes with dim(tau) = dim(sigma) -+ 1."""

    def __init__(
        self, kind: Literal["boundary", "coboundary"], dim: int, pairs: np.ndarray, shape: tuple[int, int]
    ) -> None:
        self.kind = kind
        self.dim = dim
        self.pairs = pairs
        self.pairs.setflags(write=False)
        self.matrix = sparse.csr_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=shape, dtype=np.float64
        )

    @property
    def other_dim(self) -> int:
        return self.dim - 1 if self.kind == "boundary" else self.dim + 1


def _check_indices(spec: AdjacencySpec, dim: int) -> None:
    if min(spec.i, spec.j) < 0 or max(spec.i, spec.j) > spec.max_index(dim):
        raise IndexOutOfRange(
            f"Indices ({spec.i}, {spec.j}) out of range 0..{spec.max_index(dim)} for {spec.direction} "
            f"adjacency of {dim}-simplices."
        )


def _subtuples(simplex: Sequence[int], length: int) -> Iterable[tuple[int, ...]]:
    if length == len(simplex):
        return (tuple(simplex),)
    return itertools.combinations(simplex, length)


def lower_adjacency(K: DirectedSimplicialComplex, dim: int, k: int, i: int, j: int) -> AdjacencyRelation:
    """Lower (k, i, j)-adjacency. Sigma and tau are related if some stored kappa of dimension dim - k is ordered
    subtuple of both d_i(sigma) and d_j(tau). If k > dim, kappa is vertex.

    Raises:
        IndexOutOfRange: If i or j is bigger than dim.
    """
    spec = AdjacencySpec("down", k, i, j)
    if dim < 1:
        raise ZeroDimensional("Lower adjacency is defined from dimension 1.")
    if k < 1:
        raise ValueError("k must be at least 1.")
    _check_indices(spec, dim)

    kappa_dim = max(dim - k, 0)
    simplices = K.simplices[dim] if dim <= K.dim else ()

    # kappa -> taus whose d_j contains kappa
    by_kappa: dict[int, list[int]] = {}
    for tau_index, tau in enumerate(simplices):
        for kappa in _subtuples(face(tau, j), kappa_dim + 1):
            by_kappa.setdefault(K.index(kappa).index, []).append(tau_index)

    witnesses = []
    for sigma_index, sigma in enumerate(simplices):
        for kappa in _subtuples(face(sigma, i), kappa_dim + 1):
            kappa_index = K.index(kappa).index
            witnesses.extend(
                (sigma_index, tau_index, kappa_index)
                for tau_index in by_kappa.get(kappa_index, ())
                if tau_index != sigma_index
            )

    return AdjacencyRelation(spec, dim, kappa_dim, witnesses, len(simplices), K.count(kappa_dim))


def upper_adjacency(K: DirectedSimplicialComplex, dim: int, k: int, i: int, j: int) -> AdjacencyRelation:
    """Upper (k, i, j)-adjacency. Sigma and tau are related if some kappa of dimension dim + k has sigma as ordered
    subtuple of d_i(kappa) and tau of d_j(kappa). If k > dim(K) - dim, kappa has dimension dim(K).

    Raises:
        IndexOutOfRange: If i or j is bigger than dim + k.
    """
    spec = AdjacencySpec("up", k, i, j)
    if dim < 0:
        raise ValueError("Dimension must be non-negative.")
    if k < 1:
        raise ValueError("k must be at least 1.")
    _check_indices(spec, dim)

    kappa_dim = dim + k if k <= K.dim - dim else K.dim
    size = K.count(dim)
    witnesses = []

    if kappa_dim > dim:
        for kappa_index, kappa in enumerate(K.simplices[kappa_dim]):
            sigmas = [K.index(s).index for s in _subtuples(face(kappa, i), dim + 1)]
            taus = [K.index(t).index for t in _subtuples(face(kappa, j), dim + 1)]
            witnesses.extend(
                (sigma_index, tau_index, kappa_index)
                for sigma_index in sigmas
                for tau_index in taus
                if sigma_index != tau_index
            )

    return AdjacencyRelation(spec, dim, max(kappa_dim, 0), witnesses, size, K.count(kappa_dim))


def adjacency_relation(K: DirectedSimplicialComplex, dim: int, spec: AdjacencySpec) -> AdjacencyRelation:
    if spec.direction == "down":
        return lower_adjacency(K, dim, spec.k, spec.i, spec.j)
    elif spec.direction == "up":
        return upper_adjacency(K, dim, spec.k, spec.i, spec.j)
    raise ValueError(f"Direction must be 'down' or 'up', got '{spec.direction}'.")


def boundary(K: DirectedSimplicialComplex, simplex_id: SimplexId) -> list[SimplexId]:
    """Facets d_0(sigma), ..., d_dim(sigma) in face map order."""
    simplex = K.simplex(simplex_id)
    result: list[SimplexId] = []
    for i in range(len(simplex)):
        facet = K.index(face(simplex, i))
        if facet not in result:
            result.append(facet)
    return result


def coboundary(K: DirectedSimplicialComplex, simplex_id: SimplexId) -> list[SimplexId]:
    """All stored simplices having sigma as facet, canonical order."""
    dim, index = simplex_id
    if dim + 1 > K.dim:
        return []
    rows = np.nonzero((K.facet_table(dim + 1) == index).any(axis=1))[0]
    return [SimplexId(dim + 1, int(row)) for row in rows]


def boundary_relation(K: DirectedSimplicialComplex, dim: int) -> IncidenceRelation:
    """Pairs (sigma, facet) for all dim-simplices."""
    if dim < 1:
        raise ZeroDimensional("Vertices have no boundary.")
    table = K.facet_table(dim)
    pairs = {(row, int(facet)) for row in range(table.shape[0]) for facet in table[row]}
    return IncidenceRelation(
        "boundary",
        dim,
        np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2),
        (K.count(dim), K.count(dim - 1)),
    )


def coboundary_relation(K: DirectedSimplicialComplex, dim: int) -> IncidenceRelation:
    """Pairs (sigma, cofacet) for all dim-simplices."""
    boundary_pairs = boundary_relation(K, dim + 1).pairs if dim + 1 <= max(K.dim, 1) else np.zeros((0, 2))
    pairs = np.array(sorted({(int(b), int(a)) for a, b in boundary_pairs}), dtype=np.int64).reshape(-1, 2)
    return IncidenceRelation("coboundary", dim, pairs, (K.count(dim), K.count(dim + 1)))


def face_operator(K: DirectedSimplicialComplex, dim: int, i: int) -> sparse.csr_matrix:
    """Operator of shape (count(dim), count(dim - 1)) with one 1 per row, in column d_i(sigma)."""
    table = K.facet_table(dim)
    column = table[:, min(i, dim)]
    return sparse.csr_matrix(
        (np.ones(len(column)), (np.arange(len(column)), column)), shape=(K.count(dim), K.count(dim - 1))
    )


def reachable(relation: AdjacencyRelation, sigma: int, steps: int) -> set[int]:
    """Simplices reachable from sigma by (k, i, j)-simplicial path of length at most steps (sigma included)."""
    visited = {sigma}
    frontier = {sigma}
    for _ in range(steps):
        frontier = {tau for s in frontier for tau in relation.row(s)} - visited
        if not frontier:
            break
        visited |= frontier
    return visited


def to_operator(relation: AdjacencyRelation) -> sparse.csr_matrix:
    """Boolean sparse operator, rows sigma, columns tau, canonical order."""
    return relation.matrix.copy()


def relation_set(
    name: Literal["source_localization", "expressivity", "dirgnn", "full_k1"], dim: int | None = None
) -> list[AdjacencySpec]:
    """Named relation sets used in experiments. `full_k1` needs `dim` (all k = 1 relations valid for it)."""
    down = [AdjacencySpec("down", 1, i, j) for i in (0, 1) for j in (0, 1)]
    if name == "source_localization":
        return down
    if name == "expressivity":
        return down + [AdjacencySpec("up", 1, 2, 0)]
    if name == "dirgnn":
        return [AdjacencySpec("up", 1, 0, 1), AdjacencySpec("up", 1, 1, 0)]
    if name == "full_k1":
        if dim is None:
            raise ValueError("'full_k1' relation set needs dimension.")
        specs = [AdjacencySpec("up", 1, i, j) for i in range(dim + 2) for j in range(dim + 2)]
        if dim >= 1:
            specs = [AdjacencySpec("down", 1, i, j) for i in range(dim + 1) for j in range(dim + 1)] + specs
        return specs
    raise ValueError(f"Unknown relation set '{name}'.")


def undirected_lower_adjacency(K: DirectedSimplicialComplex, dim: int) -> sparse.csr_matrix:
    """Union of all lower (1, i, j)-adjacencies, i.e. sharing any facet. Symmetric on symmetrized complex."""
    result = sparse.csr_matrix((K.count(dim), K.count(dim)), dtype=bool)
    for i in range(dim + 1):
        for j in range(dim + 1):
            result = result + lower_adjacency(K, dim, 1, i, j).matrix
    return result.astype(bool)


def normalized_node_adjacency(K: DirectedSimplicialComplex) -> sparse.csr_matrix:
    """D^-1/2 (A + I) D^-1/2 where A is node adjacency of 1-skeleton with edge directions forgotten."""
    n = K.count(0)
    edges = (
        np.array(K.simplices[1], dtype=np.int64).reshape(-1, 2) if K.dim >= 1 else np.zeros((0, 2), np.int64)
    )
    adjacency = sparse.csr_matrix(
        (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n), dtype=np.float64
    )
    adjacency = ((adjacency + adjacency.T) > 0).astype(np.float64) + sparse.identity(n, format="csr")
    inverse_sqrt = sparse.diags(1 / np.sqrt(np.asarray(adjacency.sum(axis=1)).ravel()))
    return (inverse_sqrt @ adjacency @ inverse_sqrt).tocsr()
