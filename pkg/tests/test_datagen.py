import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial import datagen, evaluate_predictions
from dirsimplicial._errors import EmptyCommunity
from dirsimplicial.flag_lift import Digraph, UndirectedGraph

spec = datagen.SbmSpec(n=12, communities=3, p_in=0.9, p_out=0.05, seed=0)


def test_sbm_orientation_and_density():
    directed = datagen.gen_sbm(spec)
    undirected = datagen.gen_sbm(spec._replace(directed=False))

    assert isinstance(directed, Digraph)
    assert isinstance(undirected, UndirectedGraph)
    assert all((v, u) not in directed.edges for u, v in directed.edges)
    assert len(directed.edges) == len(undirected.edges)


def test_sbm_probabilities():
    complete = datagen.gen_sbm(datagen.SbmSpec(n=6, communities=2, p_in=1, p_out=0, directed=False))

    assert complete.sorted_edges() == [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]


def test_invalid_spec():
    with pytest.raises(ValueError):
        datagen.gen_sbm(datagen.SbmSpec(n=10, communities=3))

    with pytest.raises(ValueError):
        datagen.gen_sbm(datagen.SbmSpec(p_in=1.5))


def test_edge_labels():
    dataset = datagen.build_task(datagen.SbmSpec(n=6, communities=2, p_in=1, p_out=1, seed=0), count=2)
    edges = dataset.complex.simplices[1]

    for edge, label in zip(edges, dataset.labeling.labels):
        first, second = edge[0] // 3, edge[1] // 3
        assert label == (first if first == second else 2)

    assert dataset.classes == 3


@settings(max_examples=20, deadline=None)
@given(st.floats(-10, 10), st.integers(0, 1000))
def test_noise_matches_snr(snr, seed):
    rng = np.random.default_rng(seed)
    clean = rng.normal(size=50)

    noisy = datagen.add_noise(clean, snr, rng)

    assert abs(evaluate_predictions.snr_db(clean, noisy) - snr) < 0.1


def test_infinite_snr_is_noise_free():
    clean = np.arange(5.0)

    assert np.array_equal(datagen.add_noise(clean, math.inf, np.random.default_rng(0)), clean)


def test_signals_are_reproducible_per_sample():
    dataset = datagen.build_task(spec, count=3, seed=4)
    longer = datagen.gen_signals(dataset.complex, dataset.labeling, count=6, seed=4)

    for short, long in zip(dataset.samples, longer):
        assert np.array_equal(short.x, long.x)
        assert short.label == long.label
        assert short.t == long.t


def test_signal_labels_and_orders():
    dataset = datagen.build_task(spec, count=40, seed=1, diffusion_cap=2)

    assert dataset.signals.shape == (40, dataset.complex.count(1))
    assert set(dataset.labels) <= {0, 1, 2}
    assert all(0 <= sample.t <= 2 for sample in dataset.samples)


def test_diffusion_order_is_capped_student_t():
    dataset = datagen.build_task(spec, count=8, seed=2, diffusion_cap=1, student_t_df=3)
    n_edges = dataset.complex.count(1)

    for index, sample in enumerate(dataset.samples):
        rng = np.random.default_rng([2, index])
        rng.normal(0.0, np.sqrt(1 / n_edges), n_edges)
        edges = dataset.labeling.community_edges(int(rng.integers(3)))
        rng.choice(edges, size=min(5, len(edges)), replace=False)
        rng.normal()

        assert sample.t == min(1, int(round(abs(rng.standard_t(3)))))


def test_zero_order_signal_is_spike_on_source_community():
    dataset = datagen.build_task(spec, count=30, seed=3, spike_edges=100, diffusion_cap=0)

    for sample in dataset.samples:
        spike = np.abs(sample.x) > 6 * np.sqrt(1 / dataset.complex.count(1)) + 1e-9
        if spike.any():
            assert set(dataset.labeling.labels[spike]) <= {sample.label}


def test_empty_community():
    with pytest.raises(EmptyCommunity):
        datagen.build_task(datagen.SbmSpec(n=6, communities=2, p_in=0, p_out=0), count=1)


def test_split_sizes():
    labels = np.repeat(np.arange(4), 25)
    train, val, test = datagen.split(labels, (0.8, 0.1, 0.1), seed=1)

    assert (len(train), len(val), len(test)) == (80, 10, 10)
    assert not set(train) & set(val)
    assert not set(val) & set(test)
    assert sorted(np.concatenate([train, val, test]).tolist()) == list(range(100))
    assert np.bincount(labels[train]).tolist() == [20] * 4


def test_split_without_stratification():
    train, val, test = datagen.split([0] * 9 + [1], (0.6, 0.2, 0.2))

    assert len(train) + len(val) + len(test) == 10


def test_split_ratios():
    with pytest.raises(ValueError):
        datagen.split([0, 1], (0.5, 0.6, 0.1))

    train, val, test = datagen.split([0, 1] * 5, (1.0, 0.0, 0.0))
    assert len(train) == 10 and not len(val) and not len(test)
