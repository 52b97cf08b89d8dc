"""Synthetic source localization task.

Nodes of stochastic block model graph are uniformly divided into communities. Graph is lifted into flag
complex, every intra-community edge belongs to its community, all inter-community edges form one extra class.
Sample is spike placed on few edges of one community, diffused with edge operator and noised. Task is to
find the community where spike was placed.

Directed graph is the undirected SBM graph with every edge randomly oriented, so directed and undirected
tasks have the same density.

Examples:
=========

    >>> spec = SbmSpec(n=12, communities=3, p_in=1.0, p_out=0.0, seed=1)
    >>> dataset = build_task(spec, count=6, seed=2)
    >>> dataset.classes, len(dataset), dataset.inputs.shape[2]
    (4, 6, 1)
"""

from __future__ import annotations
from typing import NamedTuple, Sequence
import math

import numpy as np
from scipy import sparse
from sklearn.model_selection import train_test_split
import mylogging

from .adjacency import lower_adjacency, to_operator, undirected_lower_adjacency
from .complex_core import DirectedSimplicialComplex
from .flag_lift import Digraph, UndirectedGraph, lift_directed_flag, lift_undirected_flag
from ._errors import EmptyCommunity


class SbmSpec(NamedTuple):
    """Stochastic block model. Node v belongs to community v // (n / communities)."""

    n: int = 70
    communities: int = 10
    p_in: float = 0.9
    p_out: float = 0.01
    directed: bool = True
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1 or self.communities < 1:
            raise ValueError("Number of nodes and communities must be positive.")
        if self.n % self.communities:
            raise ValueError(
                f"{self.n} nodes cannot be uniformly divided into {self.communities} communities."
            )
        for name in ("p_in", "p_out"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"Probability '{name}' must be in [0, 1], got {getattr(self, name)}.")

    @property
    def community_size(self) -> int:
        return self.n // self.communities


def community_of(node: int | np.ndarray, spec: SbmSpec) -> int | np.ndarray:
    return node // spec.community_size


def gen_sbm(spec: SbmSpec) -> Digraph | UndirectedGraph:
    """Sample graph. Every unordered pair is connected with probability p_in inside community and p_out
    otherwise. In directed mode every sampled edge gets one uniformly random orientation.

    Examples:
        >>> gen_sbm(SbmSpec(n=6, communities=2, p_in=0, p_out=0)).edges
        frozenset()
        >>> gen_sbm(SbmSpec(seed=3)) == gen_sbm(SbmSpec(seed=3))
        True
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    rows, columns = np.triu_indices(spec.n, k=1)
    same_community = community_of(rows, spec) == community_of(columns, spec)
    kept = rng.random(len(rows)) < np.where(same_community, spec.p_in, spec.p_out)
    edges = np.column_stack([rows[kept], columns[kept]])

    if not spec.directed:
        return UndirectedGraph(spec.n, edges.tolist())

    flipped = rng.random(len(edges)) < 0.5
    edges[flipped] = edges[flipped][:, ::-1]
    return Digraph(spec.n, edges.tolist())


class EdgeLabeling(NamedTuple):
    """Class of every edge of complex in canonical order. Classes 0..communities - 1 are intra-community
    edges, class `communities` are inter-community edges."""

    labels: np.ndarray
    communities: int

    @property
    def classes(self) -> int:
        return self.communities + 1

    def community_edges(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.labels == community)


def edge_labels(K: DirectedSimplicialComplex, spec: SbmSpec) -> EdgeLabeling:
    edges = np.array(K.simplices[1] if K.dim >= 1 else (), dtype=np.int64).reshape(-1, 2)
    first, second = community_of(edges[:, 0], spec), community_of(edges[:, 1], spec)
    labels = np.where(first == second, first, spec.communities)
    return EdgeLabeling(labels.astype(np.int64), spec.communities)


class SignalSample(NamedTuple):
    x: np.ndarray
    label: int
    snr_db: float
    t: int


def diffusion_operator(K: DirectedSimplicialComplex, directed: bool = True) -> sparse.csr_matrix:
    """Binary lower (1, 0, 1)-adjacency of edges for directed task, symmetric lower edge adjacency otherwise."""
    if directed:
        return to_operator(lower_adjacency(K, 1, 1, 0, 1))
    return undirected_lower_adjacency(K, 1)


def add_noise(signal: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add white gaussian noise rescaled so that the sample SNR is exactly `snr_db`. Infinite SNR means no
    noise."""
    if math.isinf(snr_db) and snr_db > 0:
        return signal.copy()

    noise = rng.normal(size=signal.shape)
    noise_power = np.mean(noise ** 2)
    signal_power = np.mean(signal ** 2)
    if noise_power == 0 or signal_power == 0:
        return signal.copy()

    target_power = signal_power / 10 ** (snr_db / 10)
    return signal + noise * np.sqrt(target_power / noise_power)


def gen_signals(
    K: DirectedSimplicialComplex,
    labeling: EdgeLabeling,
    count: int = 1000,
    spike_edges: int = 5,
    snr_db: float = math.inf,
    seed: int = 0,
    directed: bool = True,
    diffusion_cap: int = 100,
    student_t_df: float = 10,
) -> list[SignalSample]:
    """Generate spiked and diffused edge signals.

    Sample i has its own generator seeded with (seed, i), so samples do not depend on each other.

    Args:
        K (DirectedSimplicialComplex): Lifted graph.
        labeling (EdgeLabeling): Edge classes from `edge_labels`.
        count (int, optional): Number of samples. Defaults to 1000.
        spike_edges (int, optional): How many edges of source community get the spike. If community is
            smaller, all its edges. Defaults to 5.
        snr_db (float, optional): Signal to noise ratio of the result. Defaults to math.inf (no noise).
        seed (int, optional): Defaults to 0.
        directed (bool, optional): Diffusion operator choice, see `diffusion_operator`. Defaults to True.
        diffusion_cap (int, optional): Max diffusion order. Defaults to 100.
        student_t_df (float, optional): Degrees of freedom of distribution of diffusion order.
            Defaults to 10.

    Raises:
        EmptyCommunity: If some community has no edge.

    Returns:
        list[SignalSample]: Signals with source community as label.
    """
    community_edges = [labeling.community_edges(community) for community in range(labeling.communities)]
    for community, edges in enumerate(community_edges):
        if not len(edges):
            raise EmptyCommunity(f"Community {community} has no edge to place the spike on.")

    operator = diffusion_operator(K, directed).astype(np.float64)
    n_edges = K.count(1)
    samples = []

    for index in range(count):
        rng = np.random.default_rng([seed, index])

        x = rng.normal(0.0, np.sqrt(1 / n_edges), n_edges)
        label = int(rng.integers(labeling.communities))
        edges = community_edges[label]
        spiked = rng.choice(edges, size=min(spike_edges, len(edges)), replace=False)
        x[spiked] += rng.normal()

        t = min(diffusion_cap, int(round(abs(rng.standard_t(student_t_df)))))
        for _ in range(t):
            x = operator @ x

        samples.append(SignalSample(add_noise(x, snr_db, rng), label, snr_db, t))

    return samples


def split(
    labels: Sequence[int], ratios: Sequence[float] = (0.8, 0.1, 0.1), seed: int = 0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stratified train / validation / test indices.

    If some class is too small to be stratified, split is done without stratification and warning is logged.

    Examples:
        >>> train, val, test = split([0, 1] * 50, (0.8, 0.1, 0.1), seed=0)
        >>> len(train), len(val), len(test)
        (80, 10, 10)
    """
    if len(ratios) != 3 or not math.isclose(sum(ratios), 1.0) or min(ratios) < 0:
        raise ValueError(f"Split ratios must be three non-negative numbers summing to 1, got {ratios}.")

    labels = np.asarray(labels)
    indices = np.arange(len(labels))
    empty = np.array([], dtype=np.int64)

    def divide(selected: np.ndarray, second_share: float) -> tuple[np.ndarray, np.ndarray]:
        if second_share <= 0 or not len(selected):
            return selected, empty
        if second_share >= 1:
            return empty, selected
        try:
            first, second = train_test_split(
                selected, test_size=second_share, random_state=seed, stratify=labels[selected]
            )
        except ValueError:
            mylogging.warn("Some class is too small for stratified split. Split is not stratified.")
            first, second = train_test_split(selected, test_size=second_share, random_state=seed)
        return np.sort(first), np.sort(second)

    train_ratio, val_ratio, test_ratio = ratios
    train, rest = divide(indices, val_ratio + test_ratio)
    rest_share = test_ratio / (val_ratio + test_ratio) if val_ratio + test_ratio else 0.0
    val, test = divide(rest, rest_share)
    return train, val, test


class Dataset:
    """Generated task on one complex.

    Attributes:
        complex (DirectedSimplicialComplex): Lifted SBM graph.
        labeling (EdgeLabeling): Edge classes.
        samples (list[SignalSample]): Signals.
        spec (SbmSpec): Generating model.
        snr_db (float): Target SNR of all samples.
        seed (int): Seed of signals.
    """

    def __init__(
        self,
        complex: DirectedSimplicialComplex,
        labeling: EdgeLabeling,
        samples: list[SignalSample],
        spec: SbmSpec,
        snr_db: float,
        seed: int,
    ) -> None:
        self.complex = complex
        self.labeling = labeling
        self.samples = samples
        self.spec = spec
        self.snr_db = snr_db
        self.seed = seed

    @property
    def classes(self) -> int:
        return self.labeling.classes

    @property
    def signals(self) -> np.ndarray:
        """Signals of shape (samples, edges)."""
        return np.array([sample.x for sample in self.samples]).reshape(
            len(self.samples), self.complex.count(1)
        )

    @property
    def inputs(self) -> np.ndarray:
        """Signals with one feature, shape (samples, edges, 1)."""
        return self.signals[:, :, None]

    @property
    def labels(self) -> np.ndarray:
        return np.array([sample.label for sample in self.samples], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.samples)


def build_task(
    spec: SbmSpec,
    count: int = 1000,
    snr_db: float = math.inf,
    seed: int = 0,
    spike_edges: int = 5,
    max_dim: int = 2,
    diffusion_cap: int = 100,
    student_t_df: float = 10,
) -> Dataset:
    """Sample graph, lift it, label edges and generate signals. Graph is sampled with `spec.seed`, signals
    with `seed`."""
    graph = gen_sbm(spec)
    if spec.directed:
        K = lift_directed_flag(graph, max_dim)
    else:
        K = lift_undirected_flag(graph, max_dim)

    labeling = edge_labels(K, spec)
    samples = gen_signals(
        K,
        labeling,
        count=count,
        spike_edges=spike_edges,
        snr_db=snr_db,
        seed=seed,
        directed=spec.directed,
        diffusion_cap=diffusion_cap,
        student_t_df=student_t_df,
    )
    return Dataset(K, labeling, samples, spec, snr_db, seed)
