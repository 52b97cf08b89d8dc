"""Colour refinement tests. D-SWL refines colours of all simplices of directed simplicial complex, D-WL refines
colours of digraph nodes with in and out neighbour multisets.

Two complexes are compared with joint refinement. Both use the same palette in every round, so final colour
histograms can be compared directly. Palette is built from sorted signatures, so colours do not depend on
simplex numbering and refinement of a relabeled complex ends with the same histogram.

Examples:
=========

    >>> from dirsimplicial.flag_lift import lift_directed_flag
    >>> first = lift_directed_flag(circulant_digraph(6, (1, 2)))
    >>> second = lift_directed_flag(circulant_digraph(6, (1, 3)))
    >>> distinguish(first, second).label
    'distinguished'
    >>> distinguish_digraphs(circulant_digraph(6, (1, 2)), circulant_digraph(6, (1, 3))).label
    'not-distinguished'
"""

from __future__ import annotations
from typing import Callable, Iterator, NamedTuple, Sequence
from typing_extensions import Literal
import itertools
import json

import numpy as np
import mylogging

from .adjacency import lower_adjacency, upper_adjacency, AdjacencyRelation
from .complex_core import DirectedSimplicialComplex, SimplexId, per_dim_counts
from .flag_lift import Digraph, lift_directed_flag, symmetrize

Variant = Literal["full", "reduced"]


class StableHistogram(NamedTuple):
    """Per dimension sorted (colour, count) pairs."""

    per_dim: tuple[tuple[tuple[int, int], ...], ...]

    def to_dict(self) -> dict[str, dict[str, int]]:
        return {
            str(dim): {str(color): count for color, count in pairs} for dim, pairs in enumerate(self.per_dim)
        }


class Coloring:
    """Colours of simplices after refinement round `iteration`.

    Attributes:
        colors (tuple[np.ndarray, ...]): Colour of every simplex, one int array per dimension.
        iteration (int): Round t of colouring c^t.
    """

    def __init__(self, colors: Sequence[Sequence[int]], iteration: int) -> None:
        self.colors = tuple(np.array(dim_colors, dtype=np.int64) for dim_colors in colors)
        self.iteration = iteration

    def color(self, simplex_id: SimplexId | tuple[int, int]) -> int:
        return int(self.colors[simplex_id[0]][simplex_id[1]])

    def as_dict(self) -> dict[SimplexId, int]:
        return {
            SimplexId(dim, index): int(color)
            for dim, dim_colors in enumerate(self.colors)
            for index, color in enumerate(dim_colors)
        }

    def partition(self) -> set[frozenset[SimplexId]]:
        """Classes of equally coloured simplices. Independent of concrete colour numbers."""
        classes: dict[int, set[SimplexId]] = {}
        for simplex_id, color in self.as_dict().items():
            classes.setdefault(color, set()).add(simplex_id)
        return {frozenset(members) for members in classes.values()}

    def histogram(self) -> StableHistogram:
        per_dim = []
        for dim_colors in self.colors:
            values, counts = np.unique(dim_colors, return_counts=True)
            per_dim.append(tuple((int(v), int(c)) for v, c in zip(values, counts)))
        return StableHistogram(tuple(per_dim))

    def __repr__(self) -> str:
        return f"Coloring(iteration={self.iteration}, colors={[c.tolist() for c in self.colors]})"


class RefinementResult(NamedTuple):
    coloring: Coloring
    histogram: StableHistogram
    rounds: int


class Verdict(NamedTuple):
    distinguished: bool
    histograms: tuple[StableHistogram, StableHistogram]
    rounds: int

    @property
    def label(self) -> str:
        return "distinguished" if self.distinguished else "not-distinguished"

    def to_json(self) -> str:
        return json.dumps(
            {
                "verdict": self.label,
                "rounds": self.rounds,
                "histograms": [histogram.to_dict() for histogram in self.histograms],
            },
            sort_keys=True,
        )


def _neighbour_lists(relation: AdjacencyRelation) -> list[list[tuple[int, int]]]:
    rows: list[list[tuple[int, int]]] = [[] for _ in range(relation.size)]
    for sigma, tau, kappa in relation.witnesses.tolist():
        rows[sigma].append((tau, kappa))
    return rows


class _ComplexStructure:
    """Neighbourhoods needed by refinement, computed once per complex."""

    def __init__(self, K: DirectedSimplicialComplex, variant: Variant) -> None:
        self.counts = per_dim_counts(K)
        top = K.dim
        self.facets: list[list[list[int]]] = [[] for _ in range(top + 1)]
        self.cofacets: list[list[list[int]]] = [[[] for _ in range(c)] for c in self.counts]
        self.down: list[list[list[list[tuple[int, int]]]]] = [[] for _ in range(top + 1)]
        self.up: list[list[list[list[tuple[int, int]]]]] = [[] for _ in range(top + 1)]

        for dim in range(1, top + 1):
            self.facets[dim] = K.facet_table(dim).tolist()
            for sigma, facets in enumerate(self.facets[dim]):
                for facet in sorted(set(facets)):
                    self.cofacets[dim - 1][facet].append(sigma)

        for dim in range(top + 1):
            if dim < top:
                self.up[dim] = [
                    _neighbour_lists(upper_adjacency(K, dim, 1, i, j))
                    for i in range(dim + 2)
                    for j in range(dim + 2)
                ]
            if variant == "full" and dim >= 1:
                self.down[dim] = [
                    _neighbour_lists(lower_adjacency(K, dim, 1, i, j))
                    for i in range(dim + 1)
                    for j in range(dim + 1)
                ]

    def signature(self, dim: int, sigma: int, colors: list[list[int]], variant: Variant) -> tuple:
        own = colors[dim][sigma]
        boundary = tuple(colors[dim - 1][facet] for facet in self.facets[dim][sigma]) if dim else ()
        up = tuple(
            tuple(sorted((colors[dim][tau], colors[dim + 1][kappa]) for tau, kappa in rows[sigma]))
            for rows in self.up[dim]
        )
        if variant == "reduced":
            return (dim, own, boundary, up)

        coboundary = tuple(sorted(colors[dim + 1][tau] for tau in self.cofacets[dim][sigma]))
        down = tuple(
            tuple(sorted((colors[dim][tau], colors[dim - 1][kappa]) for tau, kappa in rows[sigma]))
            for rows in self.down[dim]
        )
        return (dim, own, boundary, coboundary, down, up)


def _dim_color_counts(all_colors: list[list[list[int]]]) -> tuple[int, ...]:
    top = max((len(colors) for colors in all_colors), default=0)
    return tuple(
        len({color for colors in all_colors if dim < len(colors) for color in colors[dim]})
        for dim in range(top)
    )


def _joint_refine(
    complexes: Sequence[DirectedSimplicialComplex],
    variant: Variant = "full",
    max_rounds: int | None = None,
    dimension_tagged_init: bool = False,
    keep_history: bool = False,
) -> tuple[list[list[list[int]]], int, list[list[list[list[int]]]]]:
    if variant not in ("full", "reduced"):
        raise ValueError(f"Variant must be 'full' or 'reduced', got '{variant}'.")

    structures = [_ComplexStructure(K, variant) for K in complexes]
    all_colors = [
        [[dim if dimension_tagged_init else 0] * count for dim, count in enumerate(structure.counts)]
        for structure in structures
    ]
    history = [all_colors] if keep_history else []

    if max_rounds is None:
        max_rounds = sum(sum(structure.counts) for structure in structures) + 1

    counts = _dim_color_counts(all_colors)
    rounds = 0

    for round_index in range(1, max_rounds + 1):
        signatures = [
            [
                [structure.signature(dim, sigma, colors, variant) for sigma in range(count)]
                for dim, count in enumerate(structure.counts)
            ]
            for structure, colors in zip(structures, all_colors)
        ]
        seen = {s for complex_signatures in signatures for dim_list in complex_signatures for s in dim_list}
        palette = {signature: color for color, signature in enumerate(sorted(seen))}
        new_colors = [
            [[palette[s] for s in dim_list] for dim_list in complex_signatures]
            for complex_signatures in signatures
        ]
        new_counts = _dim_color_counts(new_colors)

        if new_counts == counts:
            break

        all_colors, counts, rounds = new_colors, new_counts, round_index
        if keep_history:
            history.append(all_colors)
    else:
        mylogging.warn(f"Refinement stopped after max_rounds={max_rounds} before colours were stable.")

    return all_colors, rounds, history


def dswl_refine(
    K: DirectedSimplicialComplex,
    variant: Variant = "full",
    max_rounds: int | None = None,
    dimension_tagged_init: bool = False,
) -> RefinementResult:
    """Directed simplicial Weisfeiler-Leman refinement.

    Args:
        K (DirectedSimplicialComplex): Refined complex.
        variant (Literal["full", "reduced"], optional): 'full' hashes own colour, boundary tuple, coboundary
            multiset and all lower and upper pairs. 'reduced' hashes only own colour, boundary tuple and upper
            pairs. Both end with the same partition. Defaults to "full".
        max_rounds (int | None, optional): Bound of rounds. If None, number of simplices + 1. Defaults to None.
        dimension_tagged_init (bool, optional): Start with colour = dimension instead of 0. Defaults to False.

    Returns:
        RefinementResult: Stable colouring, its histogram and number of rounds that refined the partition.

    Examples:
        >>> from dirsimplicial.complex_core import build_complex
        >>> result = dswl_refine(build_complex([(0, 1)]))
        >>> result.coloring.color((0, 0)) != result.coloring.color((0, 1))
        True
    """
    colors, rounds, _ = _joint_refine([K], variant, max_rounds, dimension_tagged_init)
    coloring = Coloring(colors[0], rounds)
    return RefinementResult(coloring, coloring.histogram(), rounds)


def color_history(
    K: DirectedSimplicialComplex,
    variant: Variant = "full",
    max_rounds: int | None = None,
    dimension_tagged_init: bool = False,
) -> list[Coloring]:
    """All colourings c^0, c^1, ... up to the stable one."""
    _, _, history = _joint_refine([K], variant, max_rounds, dimension_tagged_init, keep_history=True)
    return [Coloring(step[0], iteration) for iteration, step in enumerate(history)]


def distinguish(
    K1: DirectedSimplicialComplex,
    K2: DirectedSimplicialComplex,
    variant: Variant = "full",
    max_rounds: int | None = None,
    dimension_tagged_init: bool = False,
) -> Verdict:
    """Complexes are distinguished if their stable colour histograms differ."""
    colors, rounds, _ = _joint_refine([K1, K2], variant, max_rounds, dimension_tagged_init)
    histograms = (Coloring(colors[0], rounds).histogram(), Coloring(colors[1], rounds).histogram())
    return Verdict(histograms[0] != histograms[1], histograms, rounds)


def _joint_dwl(graphs: Sequence[Digraph], max_rounds: int | None = None) -> tuple[list[list[int]], int]:
    in_lists = [[sorted(g.in_neighbors(v)) for v in range(g.n)] for g in graphs]
    out_lists = [[sorted(g.out_neighbors(v)) for v in range(g.n)] for g in graphs]
    all_colors = [[0] * g.n for g in graphs]

    if max_rounds is None:
        max_rounds = sum(g.n for g in graphs) + 1

    def count(colors_list: list[list[int]]) -> int:
        return len({color for colors in colors_list for color in colors})

    colors_count = count(all_colors)
    rounds = 0

    for round_index in range(1, max_rounds + 1):
        signatures = [
            [
                (
                    colors[v],
                    tuple(sorted(colors[u] for u in ins[v])),
                    tuple(sorted(colors[u] for u in outs[v])),
                )
                for v in range(len(colors))
            ]
            for colors, ins, outs in zip(all_colors, in_lists, out_lists)
        ]
        palette = {s: color for color, s in enumerate(sorted({s for graph in signatures for s in graph}))}
        new_colors = [[palette[s] for s in graph] for graph in signatures]
        new_count = count(new_colors)
        if new_count == colors_count:
            break
        all_colors, colors_count, rounds = new_colors, new_count, round_index

    return all_colors, rounds


def dwl_refine(g: Digraph, max_rounds: int | None = None) -> tuple[Coloring, StableHistogram]:
    """Directed 1-WL. Node colour is refined with multisets of in and out neighbour colours.

    Examples:
        >>> coloring, _ = dwl_refine(Digraph(3, [(0, 1), (1, 2)]))
        >>> len(set(coloring.colors[0].tolist()))
        3
    """
    colors, rounds = _joint_dwl([g], max_rounds)
    coloring = Coloring([colors[0]], rounds)
    return coloring, coloring.histogram()


def distinguish_digraphs(g1: Digraph, g2: Digraph, max_rounds: int | None = None) -> Verdict:
    colors, rounds = _joint_dwl([g1, g2], max_rounds)
    histograms = (Coloring([colors[0]], rounds).histogram(), Coloring([colors[1]], rounds).histogram())
    return Verdict(histograms[0] != histograms[1], histograms, rounds)


def circulant_digraph(n: int, steps: Sequence[int]) -> Digraph:
    """Edges i -> i + s (mod n) for every step s. ``circulant_digraph(6, (1, 2))`` is C6(1, 2)."""
    return Digraph(n, [(i, (i + step) % n) for i in range(n) for step in steps])


def _all_digraphs(n: int) -> Iterator[Digraph]:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for mask in range(2 ** len(pairs)):
        yield Digraph(n, [pair for bit, pair in enumerate(pairs) if mask >> bit & 1])


def _random_regular_digraph(
    n: int, degree: int, rng: np.random.Generator, attempts: int = 100
) -> Digraph | None:
    """Union of `degree` random permutations with no fixed point and no shared edge."""
    for _ in range(attempts):
        edges: set[tuple[int, int]] = set()
        for _ in range(degree):
            permutation = rng.permutation(n)
            new = {(v, int(permutation[v])) for v in range(n)}
            if any(u == v for u, v in new) or new & edges:
                break
            edges |= new
        else:
            return Digraph(n, edges)
    return None


def _candidates(n_max: int, trials: int, seed: int, degree: int, n_min: int) -> list[Digraph]:
    rng = np.random.default_rng(seed)
    candidates: list[Digraph] = []

    for n in range(max(n_min, 1), n_max + 1):
        if n <= 3:
            candidates.extend(_all_digraphs(n))
            continue

        candidates.extend(
            circulant_digraph(n, steps) for steps in itertools.combinations(range(1, n), degree)
        )
        for _ in range(trials):
            g = _random_regular_digraph(n, degree, rng)
            if g is not None:
                candidates.append(g)

    return candidates


def _invariant_key(g: Digraph) -> tuple:
    degrees = sorted((len(g.in_neighbors(v)), len(g.out_neighbors(v))) for v in range(g.n))
    return (g.n, len(g.edges), tuple(degrees))


def _candidate_pairs(
    candidates: list[Digraph], key: Callable[[Digraph], tuple] = _invariant_key
) -> Iterator[tuple[Digraph, Digraph]]:
    buckets: dict[tuple, list[Digraph]] = {}
    for g in candidates:
        bucket = buckets.setdefault(key(g), [])
        if g not in bucket:
            bucket.append(g)
    for bucket in buckets.values():
        yield from itertools.combinations(bucket, 2)


def find_counterexample(
    n_max: int,
    trials: int = 20,
    seed: int = 0,
    degree: int = 2,
    n_min: int = 1,
    max_dim: int = 2,
    variant: Variant = "reduced",
) -> tuple[Digraph, Digraph] | None:
    """Search for digraphs that D-WL does not distinguish while D-SWL distinguishes their directed flag lifts.

    All digraphs are tried up to three vertices. From four vertices circulant `degree`-in/`degree`-out
    digraphs are tried first, then `trials` random regular ones per size.

    Args:
        n_max (int): Biggest number of vertices. At most 8.
        trials (int, optional): Random regular digraphs per size. Defaults to 20.
        seed (int, optional): Seed of random candidates. Defaults to 0.
        degree (int, optional): In and out degree of generated regular digraphs. Defaults to 2.
        n_min (int, optional): Smallest number of vertices. Defaults to 1.
        max_dim (int, optional): Dimension of lifts. Defaults to 2.
        variant (Literal["full", "reduced"], optional): D-SWL variant. Defaults to "reduced".

    Returns:
        tuple[Digraph, Digraph] | None: First pair found or None.

    Examples:
        >>> first, second = find_counterexample(6, n_min=6)
        >>> first == circulant_digraph(6, (1, 2)), second == circulant_digraph(6, (1, 3))
        (True, True)
        >>> find_counterexample(2) is None
        True
    """
    if n_max > 8:
        raise ValueError("Search is bounded to n_max <= 8.")

    for g1, g2 in _candidate_pairs(_candidates(n_max, trials, seed, degree, n_min)):
        if distinguish_digraphs(g1, g2).distinguished:
            continue
        K1, K2 = lift_directed_flag(g1, max_dim), lift_directed_flag(g2, max_dim)
        if distinguish(K1, K2, variant).distinguished:
            mylogging.info(f"Counterexample found: {g1} and {g2}")
            return g1, g2

    return None


def symmetrized_collapse_pair(
    n_max: int = 3, trials: int = 20, seed: int = 0, max_dim: int = 2, variant: Variant = "reduced"
) -> tuple[Digraph, Digraph] | None:
    """Search for digraphs whose directed flag lifts are distinguished by D-SWL while their symmetrized lifts
    are not. Symmetrization forgets vertex order and merges such complexes.

    Examples:
        >>> pair = symmetrized_collapse_pair(3)
        >>> pair is not None
        True
    """
    # Degrees may differ, symmetrization forgets them
    candidates = _candidates(n_max, trials, seed, 2, 1)
    for g1, g2 in _candidate_pairs(candidates, key=lambda g: (g.n, len(g.edges))):
        K1, K2 = lift_directed_flag(g1, max_dim), lift_directed_flag(g2, max_dim)
        if not distinguish(K1, K2, variant).distinguished:
            continue
        if not distinguish(symmetrize(K1), symmetrize(K2), variant).distinguished:
            return g1, g2

    return None
