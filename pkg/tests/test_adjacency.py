import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial._errors import IndexOutOfRange, ZeroDimensional
from dirsimplicial.adjacency import (
    AdjacencySpec,
    adjacency_relation,
    boundary,
    boundary_relation,
    coboundary,
    coboundary_relation,
    face_operator,
    lower_adjacency,
    normalized_node_adjacency,
    reachable,
    relation_set,
    to_operator,
    undirected_lower_adjacency,
    upper_adjacency,
)
from dirsimplicial.complex_core import build_complex, face
from dirsimplicial.flag_lift import Digraph, lift_directed_flag, symmetrize


@st.composite
def complexes(draw, max_n=6):
    n = draw(st.integers(3, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=2))
    return lift_directed_flag(Digraph(n, edges), 3)


def _dense(matrix):
    return np.asarray(matrix.todense())


def test_triangles_sharing_edge():
    K = build_complex([(0, 1, 2), (1, 2, 3)])
    relation = lower_adjacency(K, 2, 1, 0, 2)
    sigma, tau, kappa = K.index((0, 1, 2)).index, K.index((1, 2, 3)).index, K.index((1, 2)).index

    assert relation.witnesses.tolist() == [[sigma, tau, kappa]]
    assert relation.kappa_dim == 1


def test_edge_relations_through_nodes():
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    index = {simplex: K.index(simplex).index for simplex in K.simplices[1]}

    target_to_source = lower_adjacency(K, 1, 1, 0, 1)
    assert (index[(0, 1)], index[(1, 2)]) in target_to_source.pairs()
    assert (index[(1, 2)], index[(0, 1)]) not in target_to_source.pairs()

    shared_target = lower_adjacency(K, 1, 1, 0, 0)
    assert (index[(0, 2)], index[(1, 2)]) in shared_target.pairs()
    assert (index[(0, 1)], index[(1, 2)]) not in shared_target.pairs()


def test_upper_relation_through_triangle():
    K = build_complex([(0, 1, 2)])
    relation = upper_adjacency(K, 1, 1, 2, 0)

    assert relation.pairs() == {(K.index((0, 1)).index, K.index((1, 2)).index)}
    assert relation.kappa_dim == 2


def test_upper_relation_above_top_dimension():
    K = build_complex([(0, 1, 2)])

    assert len(upper_adjacency(K, 2, 1, 0, 1)) == 0
    assert upper_adjacency(K, 0, 3, 0, 1).kappa_dim == 2


def test_index_and_dimension_errors():
    K = build_complex([(0, 1, 2)])

    with pytest.raises(IndexOutOfRange):
        lower_adjacency(K, 1, 1, 2, 0)

    with pytest.raises(IndexOutOfRange):
        upper_adjacency(K, 1, 1, 0, 3)

    with pytest.raises(ZeroDimensional):
        lower_adjacency(K, 0, 1, 0, 0)

    with pytest.raises(ValueError):
        AdjacencySpec.from_name("sideways_1_0_1")


def test_spec_names():
    spec = AdjacencySpec.from_name("up_1_2_0")

    assert spec == AdjacencySpec("up", 1, 2, 0)
    assert spec.name == "up_1_2_0"
    assert spec.transposed == AdjacencySpec("up", 1, 0, 2)
    assert len(relation_set("expressivity")) == 5
    assert len(relation_set("full_k1", 1)) == 4 + 9


@settings(max_examples=40, deadline=None)
@given(complexes(), st.data())
def test_transposed_relation_is_transposed_matrix(K, data):
    dim = data.draw(st.integers(1, max(K.dim, 1)))
    direction = data.draw(st.sampled_from(["down", "up"]))
    bound = dim if direction == "down" else dim + 1
    i, j = data.draw(st.integers(0, bound)), data.draw(st.integers(0, bound))
    spec = AdjacencySpec(direction, 1, i, j)

    relation = adjacency_relation(K, dim, spec)
    transposed = adjacency_relation(K, dim, spec.transposed)

    assert (_dense(relation.matrix).T == _dense(transposed.matrix)).all()


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_undirected_lower_is_sharing_any_facet(K):
    for dim in range(1, K.dim + 1):
        simplices = K.simplices[dim]
        expected = np.zeros((len(simplices), len(simplices)), dtype=bool)
        for (a, sigma), (b, tau) in itertools.permutations(enumerate(simplices), 2):
            sigma_facets = {face(sigma, i) for i in range(dim + 1)}
            tau_facets = {face(tau, i) for i in range(dim + 1)}
            expected[a, b] = bool(sigma_facets & tau_facets)

        assert (_dense(undirected_lower_adjacency(K, dim)) == expected).all()


@settings(max_examples=30, deadline=None)
@given(complexes())
def test_undirected_lower_of_symmetrized_complex_is_symmetric(K):
    symmetric = symmetrize(K)
    for dim in range(1, symmetric.dim + 1):
        matrix = _dense(undirected_lower_adjacency(symmetric, dim))
        assert (matrix == matrix.T).all()


def test_message_matrix_matches_boolean_operator():
    K = lift_directed_flag(Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)]))
    relation = lower_adjacency(K, 1, 1, 0, 1)

    assert (_dense(relation.message_matrix()) == _dense(to_operator(relation)).astype(float)).all()
    assert relation.kappa_matrix().shape == (K.count(1), K.count(0))


def test_boundary_and_coboundary():
    K = build_complex([(0, 1, 2)])
    triangle = K.index((0, 1, 2))

    assert [K.simplex(facet) for facet in boundary(K, triangle)] == [(1, 2), (0, 2), (0, 1)]
    assert [K.simplex(cofacet) for cofacet in coboundary(K, K.index((0, 2)))] == [(0, 1, 2)]
    assert coboundary(K, triangle) == []

    down = boundary_relation(K, 2)
    up = coboundary_relation(K, 1)
    assert sorted(map(tuple, down.pairs[:, ::-1].tolist())) == sorted(map(tuple, up.pairs.tolist()))
    assert up.other_dim == 2

    with pytest.raises(ZeroDimensional):
        boundary_relation(K, 0)


def test_face_operator_rows():
    K = build_complex([(0, 1, 2), (1, 2, 3)])
    operator = _dense(face_operator(K, 2, 0))

    assert operator.shape == (2, 5)
    assert (operator.sum(axis=1) == 1).all()
    assert operator[K.index((0, 1, 2)).index, K.index((1, 2)).index] == 1


def test_reachability_on_strip_of_triangles():
    K = build_complex([(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 5)])
    relation = lower_adjacency(K, 2, 1, 0, 2)

    assert reachable(relation, 0, 1) == {0, 1}
    assert reachable(relation, 0, 10) == {0, 1, 2, 3}
    assert reachable(relation, 3, 10) == {3}


def test_normalized_node_adjacency():
    K = lift_directed_flag(Digraph(3, [(0, 1), (1, 2)]))
    matrix = _dense(normalized_node_adjacency(K))

    assert np.allclose(matrix, matrix.T)
    assert np.isclose(matrix[0, 0], 0.5)
    assert np.isclose(matrix[1, 1], 1 / 3)
    assert matrix[0, 2] == 0
