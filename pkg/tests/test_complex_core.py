import pytest
from hypothesis import given, settings, strategies as st

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial._errors import DuplicateVertexInTuple, ZeroDimensional
from dirsimplicial.complex_core import (
    build_complex,
    face,
    face_map,
    is_inclusive,
    per_dim_counts,
    permute_vertices,
    skeleton,
)
from dirsimplicial.flag_lift import Digraph, lift_directed_flag


distinct_tuples = st.lists(st.integers(0, 20), min_size=3, max_size=6, unique=True).map(tuple)


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Digraph(n, edges)


@given(distinct_tuples, st.data())
def test_face_maps_simplicial_identity(simplex, data):
    k = len(simplex) - 1
    j = data.draw(st.integers(1, k))
    i = data.draw(st.integers(0, j - 1))

    assert face(face(simplex, j), i) == face(face(simplex, i), j - 1)


def test_face_edge_cases():
    assert face((0, 1, 2), 7) == (0, 1)
    assert face((3, 1), 0) == (1,)

    with pytest.raises(ZeroDimensional):
        face((4,), 0)

    with pytest.raises(ValueError):
        face((0, 1), -1)


def test_build_complex():
    K = build_complex([(0, 1, 2), (0, 2, 3)])

    assert per_dim_counts(K) == [4, 5, 2]
    assert (2, 3) in K
    assert (3, 2) not in K
    assert is_inclusive(K)
    assert K.simplex(face_map(K, K.index((0, 2, 3)), 1)) == (0, 3)


def test_build_complex_relabels_sparse_vertices():
    K = build_complex([(10, 4)])

    assert K.n_vertices == 2
    assert K.simplices[1] == ((1, 0),)


def test_build_complex_errors():
    with pytest.raises(DuplicateVertexInTuple):
        build_complex([(0, 1, 0)])

    with pytest.raises(ValueError):
        build_complex([(0, 5)], n_vertices=3)


def test_empty_and_isolated():
    empty = build_complex([])
    assert empty.dim == -1
    assert len(empty) == 0

    isolated = build_complex([], n_vertices=3)
    assert isolated.dim == 0
    assert per_dim_counts(isolated) == [3]


def test_facet_table():
    K = build_complex([(0, 1, 2)])
    table = K.facet_table(2)

    assert [K.simplex((1, index)) for index in table[0]] == [(1, 2), (0, 2), (0, 1)]

    with pytest.raises(ZeroDimensional):
        K.facet_table(0)


@settings(max_examples=50, deadline=None)
@given(digraphs())
def test_closure_is_idempotent(g):
    K = lift_directed_flag(g, 3)

    assert is_inclusive(K)
    assert build_complex(list(K), n_vertices=K.n_vertices) == K


@settings(max_examples=50, deadline=None)
@given(digraphs(), st.randoms(use_true_random=False))
def test_permutation_commutes_with_lift(g, random):
    permutation = list(range(g.n))
    random.shuffle(permutation)

    assert lift_directed_flag(g.permuted(permutation)) == permute_vertices(lift_directed_flag(g), permutation)


def test_skeleton():
    K = build_complex([(0, 1, 2, 3)])

    assert per_dim_counts(skeleton(K, 1)) == [4, 6]
    assert skeleton(K, 5) is K

    with pytest.raises(ValueError):
        skeleton(K, -1)
