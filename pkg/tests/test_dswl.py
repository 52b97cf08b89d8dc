import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial import dswl
from dirsimplicial.complex_core import build_complex, permute_vertices
from dirsimplicial.flag_lift import Digraph, lift_directed_flag, symmetrize
from dirsimplicial.models import dirsnn, network


@st.composite
def digraphs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n, draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)))


circulant_12 = dswl.circulant_digraph(6, (1, 2))
circulant_13 = dswl.circulant_digraph(6, (1, 3))


def test_circulant_pair_separates_dswl_from_dwl():
    first, second = lift_directed_flag(circulant_12), lift_directed_flag(circulant_13)

    assert first.count(2) > 0
    assert second.count(2) == 0

    assert not dswl.distinguish_digraphs(circulant_12, circulant_13).distinguished
    _, first_histogram = dswl.dwl_refine(circulant_12)
    _, second_histogram = dswl.dwl_refine(circulant_13)
    assert first_histogram == second_histogram

    for variant in ("full", "reduced"):
        assert dswl.distinguish(first, second, variant).distinguished


def test_counterexample_search_finds_circulants():
    assert dswl.find_counterexample(6, n_min=6) == (circulant_12, circulant_13)
    assert dswl.find_counterexample(2) is None

    with pytest.raises(ValueError):
        dswl.find_counterexample(9)


def test_symmetrization_collapses_pair():
    g1, g2 = dswl.symmetrized_collapse_pair(3)
    K1, K2 = lift_directed_flag(g1), lift_directed_flag(g2)

    assert dswl.distinguish(K1, K2).distinguished
    assert not dswl.distinguish(symmetrize(K1), symmetrize(K2)).distinguished


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_full_and_reduced_rules_end_with_same_partition(g):
    K = lift_directed_flag(g)
    full = dswl.dswl_refine(K, "full").coloring.partition()
    reduced = dswl.dswl_refine(K, "reduced").coloring.partition()

    assert full == reduced


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=5), digraphs(max_n=5))
def test_dwl_distinction_implies_dswl_distinction(g1, g2):
    if dswl.distinguish_digraphs(g1, g2).distinguished:
        assert dswl.distinguish(lift_directed_flag(g1), lift_directed_flag(g2), "reduced").distinguished


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=6), st.randoms(use_true_random=False))
def test_relabeled_complex_is_not_distinguished(g, random):
    permutation = list(range(g.n))
    random.shuffle(permutation)
    K = lift_directed_flag(g)

    assert not dswl.distinguish(K, permute_vertices(K, permutation)).distinguished


def test_color_history_refines_monotonically():
    K = lift_directed_flag(Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)]))
    history = dswl.color_history(K)

    assert history[0].iteration == 0
    sizes = [len(coloring.partition()) for coloring in history]
    assert sizes == sorted(sizes)
    assert history[-1].partition() == dswl.dswl_refine(K).coloring.partition()


def _assert_equal_colors_give_equal_states(K, n_layers=3, seed=0):
    model = dirsnn.expressivity_model(n_layers=n_layers, width=5, use_kappa=True)
    params = dirsnn.init_model_parameters(model, seed)
    inputs = {dim: np.ones((K.count(dim), 1)) for dim in model.dims}
    states = network.hidden_states(dirsnn.build_plan(K, model), params, inputs)
    history = dswl.color_history(K)

    for layer in range(n_layers + 1):
        # Stable colouring stays valid for all later rounds
        coloring = history[min(layer, len(history) - 1)]
        for members in coloring.partition():
            rows = [states[layer][dim][0, index] for dim, index in sorted(members)]
            assert all(np.allclose(row, rows[0], atol=1e-9) for row in rows), (layer, sorted(members))


def test_equal_colors_give_equal_hidden_states():
    for g in [circulant_12, circulant_13, Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)])]:
        _assert_equal_colors_give_equal_states(lift_directed_flag(g))


@settings(max_examples=25, deadline=None)
@given(digraphs(max_n=6), st.integers(0, 100))
def test_dirsnn_is_bounded_by_dswl(g, seed):
    if g.edges:
        _assert_equal_colors_give_equal_states(lift_directed_flag(g), n_layers=2, seed=seed)


def test_dimension_tagged_init():
    K = build_complex([(0, 1)])
    first_round = dswl.color_history(K, dimension_tagged_init=True)[0]

    assert first_round.color((0, 0)) != first_round.color((1, 0))


def test_verdict_json():
    K1, K2 = lift_directed_flag(circulant_12), lift_directed_flag(circulant_13)
    verdict = json.loads(dswl.distinguish(K1, K2).to_json())

    assert verdict["verdict"] == "distinguished"
    assert set(verdict) == {"verdict", "rounds", "histograms"}
    assert len(verdict["histograms"]) == 2


def test_unknown_variant():
    with pytest.raises(ValueError):
        dswl.dswl_refine(build_complex([(0, 1)]), "partial")
