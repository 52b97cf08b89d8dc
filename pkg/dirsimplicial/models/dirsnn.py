"""Directed simplicial neural network. Convolutional instantiation, every neighbourhood has its own weight.

For simplex sigma of dimension d one layer computes

    x'_sigma = nonlinearity(x_sigma W_self + sum_N m_N + m_B + m_C + bias)

where m_N sums x_tau W_N (plus x_kappa W'_N if `use_kappa`) over witnesses (tau, kappa) of adjacency N and
m_B, m_C sum facets and cofacets. Boundary and coboundary may also use one weight per face map
(`per_face_boundary`).

Examples:
=========

    >>> import numpy as np
    >>> from dirsimplicial.complex_core import build_complex
    >>> K = build_complex([(0, 1), (1, 2), (2, 0)])
    >>> model = source_localization_model(n_layers=1, width=4, classes=2)
    >>> params = init_model_parameters(model)
    >>> model_forward(K, model, params, SignalTensor(1, np.ones((3, 1)))).shape
    (2,)
"""

from __future__ import annotations
from typing import Mapping, NamedTuple, Sequence, Union
from typing_extensions import Literal

import numpy as np
from scipy import sparse

from ..adjacency import (
    AdjacencySpec,
    adjacency_relation,
    boundary_relation,
    coboundary_relation,
    face_operator,
    normalized_node_adjacency,
    relation_set,
    undirected_lower_adjacency,
)
from ..complex_core import DirectedSimplicialComplex
from .._errors import ShapeMismatch
from .network import (
    LayerPlan,
    NetworkPlan,
    Parameters,
    Term,
    forward,
    init_parameters,
    initial_signals,
    layer_step,
)

Neighbourhood = Union[AdjacencySpec, str]

# Operators that are not directed adjacencies, used by baselines
SPECIAL_OPERATORS = {"undirected_lower": 1, "gcn_normalized": 0}


class SignalTensor(NamedTuple):
    """Features of all simplices of one dimension, rows in canonical simplex order."""

    dim: int
    values: np.ndarray


class LayerSpec(NamedTuple):
    relations: tuple[Neighbourhood, ...] = ()
    use_boundary: bool = False
    use_coboundary: bool = False
    in_features: int = 1
    out_features: int = 16
    use_kappa: bool = False
    nonlinearity: Literal["relu", "identity"] = "relu"
    per_face_boundary: bool = False
    aggregation: Literal["sum", "mean"] = "sum"
    use_self: bool = True


class ModelSpec(NamedTuple):
    """Architecture.

    Attributes:
        layers (tuple[LayerSpec, ...]): Message passing layers.
        classes (int): Number of classes.
        head_widths (tuple[int, ...]): Hidden widths of MLP head.
        dims (tuple[int, ...]): Working dimensions updated by every layer.
        readout (str): Only 'max'.
        seed (int): Seed of weight initialization.
        input_projection (tuple[tuple[int, int], ...]): Pairs (target, source). Signal of target dimension is
            sum of signals of its cofaces of source dimension, e.g. (0, 1) projects edges on their nodes.
        readout_dims (tuple[int, ...] | None): Pooled dimensions. If None, all working dimensions.
        name (str): Name in result tables.
    """

    layers: tuple[LayerSpec, ...]
    classes: int
    head_widths: tuple[int, ...] = ()
    dims: tuple[int, ...] = (1,)
    readout: str = "max"
    seed: int = 0
    input_projection: tuple[tuple[int, int], ...] = ()
    readout_dims: tuple[int, ...] | None = None
    name: str = "Dir-SNN"


def validate_model(model: ModelSpec) -> None:
    if model.classes < 2:
        raise ValueError("Model needs at least two classes.")
    if model.readout != "max":
        raise ValueError(f"Only 'max' readout is implemented, got '{model.readout}'.")
    if not model.layers:
        raise ValueError("Model needs at least one layer.")

    for index, layer in enumerate(model.layers):
        if not (layer.relations or layer.use_boundary or layer.use_coboundary):
            raise ValueError(f"Layer {index} has no relation, boundary nor coboundary enabled.")
        if index and model.layers[index - 1].out_features != layer.in_features:
            raise ShapeMismatch(
                f"Layer {index} expects {layer.in_features} features, previous layer gives "
                f"{model.layers[index - 1].out_features}."
            )


def parse_relations(relations: str | Sequence[str | AdjacencySpec], dim: int = 1) -> list[Neighbourhood]:
    """Relations from config. Name of relation set or list of names like 'down_1_0_1' or 'undirected_lower'.

    Examples:
        >>> [relation.name for relation in parse_relations("expressivity")][-1]
        'up_1_2_0'
        >>> parse_relations(["down_1_1_0", "undirected_lower"])
        [AdjacencySpec(direction='down', k=1, i=1, j=0), 'undirected_lower']
    """
    if isinstance(relations, str):
        return relation_set(relations, dim)  # type: ignore
    return [
        relation
        if isinstance(relation, AdjacencySpec) or relation in SPECIAL_OPERATORS
        else AdjacencySpec.from_name(relation)
        for relation in relations
    ]


def _kappa_dim(relation: AdjacencySpec, dim: int) -> int:
    return max(dim - relation.k, 0) if relation.direction == "down" else dim + relation.k


def term_names(layer: LayerSpec, dim: int, dims: Sequence[int]) -> list[str]:
    """Names of weights of target dimension `dim`, terms whose source is not working dimension are left out."""
    names = []
    for relation in layer.relations:
        if isinstance(relation, str):
            if relation not in SPECIAL_OPERATORS:
                raise ValueError(f"Unknown operator '{relation}'.")
            if (relation == "gcn_normalized" and dim == 0) or (relation == "undirected_lower" and dim >= 1):
                names.append(relation)
        elif relation.is_valid_for(dim):
            names.append(relation.name)
            if layer.use_kappa and _kappa_dim(relation, dim) in dims:
                names.append(f"{relation.name}/kappa")

    if layer.use_boundary and dim >= 1 and dim - 1 in dims:
        names.extend([f"boundary_{i}" for i in range(dim + 1)] if layer.per_face_boundary else ["boundary"])
    if layer.use_coboundary and dim + 1 in dims:
        names.extend(
            [f"coboundary_{i}" for i in range(dim + 2)] if layer.per_face_boundary else ["coboundary"]
        )
    return names


def parameter_shapes(model: ModelSpec) -> dict[str, tuple[int, ...]]:
    validate_model(model)
    shapes: dict[str, tuple[int, ...]] = {}

    for index, layer in enumerate(model.layers):
        weight = (layer.in_features, layer.out_features)
        for dim in model.dims:
            prefix = f"layer{index}/d{dim}/"
            if layer.use_self:
                shapes[prefix + "self"] = weight
            for name in term_names(layer, dim, model.dims):
                shapes[prefix + name] = weight
            shapes[prefix + "bias"] = (layer.out_features,)

    readout_dims = model.readout_dims if model.readout_dims is not None else model.dims
    widths = [len(readout_dims) * model.layers[-1].out_features, *model.head_widths, model.classes]
    for index in range(len(widths) - 1):
        shapes[f"head{index}/weight"] = (widths[index], widths[index + 1])
        shapes[f"head{index}/bias"] = (widths[index + 1],)

    return shapes


def init_model_parameters(model: ModelSpec, seed: int | None = None) -> Parameters:
    return init_parameters(parameter_shapes(model), model.seed if seed is None else seed)


def _mean(operator: sparse.spmatrix) -> sparse.csr_matrix:
    row_sums = np.asarray(operator.sum(axis=1)).ravel()
    scale = np.divide(1.0, row_sums, out=np.zeros_like(row_sums, dtype=np.float64), where=row_sums > 0)
    return (sparse.diags(scale) @ operator).tocsr()


def face_projection(K: DirectedSimplicialComplex, source_dim: int) -> sparse.csr_matrix:
    """Operator of shape (count(source_dim - 1), count(source_dim)), face signal = sum of its coface signals."""
    return boundary_relation(K, source_dim).matrix.T.tocsr()


class _TermBuilder:
    """Builds and caches operators of one complex."""

    def __init__(self, K: DirectedSimplicialComplex, dims: Sequence[int]) -> None:
        self.K = K
        self.dims = dims
        self.relations: dict = {}

    def _relation(self, dim: int, spec: AdjacencySpec):
        if (dim, spec) not in self.relations:
            self.relations[(dim, spec)] = adjacency_relation(self.K, dim, spec)
        return self.relations[(dim, spec)]

    def terms(self, layer: LayerSpec, dim: int) -> list[Term]:
        K = self.K
        names = set(term_names(layer, dim, self.dims))
        terms = []

        for relation in layer.relations:
            if isinstance(relation, str):
                if relation not in names:
                    continue
                if relation == "undirected_lower":
                    operator = undirected_lower_adjacency(K, dim).astype(np.float64).tocsr()
                else:
                    operator = normalized_node_adjacency(K)
                terms.append(Term(relation, dim, operator))
                continue

            if relation.name not in names:
                continue
            built = self._relation(dim, relation)
            terms.append(Term(relation.name, dim, built.message_matrix()))
            kappa_name = f"{relation.name}/kappa"
            # Upper kappa of clamped relation may have lower dimension than nominal
            if kappa_name in names and built.kappa_dim in self.dims:
                terms.append(Term(kappa_name, built.kappa_dim, built.kappa_matrix()))

        if "boundary" in names:
            terms.append(Term("boundary", dim - 1, boundary_relation(K, dim).matrix))
        for i in range(dim + 1):
            if f"boundary_{i}" in names:
                terms.append(Term(f"boundary_{i}", dim - 1, face_operator(K, dim, i)))

        if "coboundary" in names:
            terms.append(Term("coboundary", dim + 1, coboundary_relation(K, dim).matrix))
        for i in range(dim + 2):
            if f"coboundary_{i}" in names:
                terms.append(Term(f"coboundary_{i}", dim + 1, face_operator(K, dim + 1, i).T.tocsr()))

        if layer.aggregation == "mean":
            terms = [term._replace(operator=_mean(term.operator)) for term in terms]
        elif layer.aggregation != "sum":
            raise ValueError(f"Aggregation must be 'sum' or 'mean', got '{layer.aggregation}'.")

        return terms


def build_plan(K: DirectedSimplicialComplex, model: ModelSpec) -> NetworkPlan:
    """Bind model to operators of complex K."""
    validate_model(model)
    builder = _TermBuilder(K, model.dims)
    layers = [
        LayerPlan(
            index, {dim: builder.terms(layer, dim) for dim in model.dims}, layer.use_self, layer.nonlinearity
        )
        for index, layer in enumerate(model.layers)
    ]
    input_maps = {}
    for target, source in model.input_projection:
        if target != source - 1:
            raise ValueError("Only projection on faces one dimension lower is supported.")
        input_maps[target] = (source, face_projection(K, source))

    return NetworkPlan(
        layers,
        model.dims,
        {dim: K.count(dim) for dim in model.dims},
        input_maps,
        model.readout_dims,
        head_depth=len(model.head_widths) + 1,
    )


def _as_inputs(
    x: SignalTensor | Mapping[int, np.ndarray] | np.ndarray, model: ModelSpec
) -> dict[int, np.ndarray]:
    if isinstance(x, SignalTensor):
        return {x.dim: x.values}
    if isinstance(x, np.ndarray):
        source_dims = {source for _, source in model.input_projection}
        return {next(iter(source_dims)) if source_dims else model.dims[0]: x}
    return dict(x)


def layer_forward(
    K: DirectedSimplicialComplex,
    layer: LayerSpec,
    params: Mapping[str, np.ndarray],
    x: SignalTensor,
    others: Mapping[int, np.ndarray] | None = None,
) -> SignalTensor:
    """One Dir-SNN layer on signal of one dimension.

    Args:
        K (DirectedSimplicialComplex): Complex.
        layer (LayerSpec): Layer definition.
        params (Mapping[str, np.ndarray]): Weights with layer local names, e.g. 'self', 'bias', 'down_1_0_1',
            'boundary'.
        x (SignalTensor): Updated signal.
        others (Mapping[int, np.ndarray] | None, optional): Signals of other dimensions used by boundary,
            coboundary and kappa terms. Defaults to None.

    Raises:
        ShapeMismatch: If signal does not fit the complex or weights.

    Returns:
        SignalTensor: New signal of the same dimension.
    """
    signals = {x.dim: np.asarray(x.values, dtype=np.float64), **dict(others or {})}
    dims = tuple(sorted(signals))
    plan = NetworkPlan(
        [
            LayerPlan(
                0, {x.dim: _TermBuilder(K, dims).terms(layer, x.dim)}, layer.use_self, layer.nonlinearity
            )
        ],
        dims,
        {dim: K.count(dim) for dim in dims},
    )
    prefixed = {f"layer0/d{x.dim}/{name}": value for name, value in params.items()}
    hidden = initial_signals(plan, signals)
    new_hidden, _ = layer_step(plan.layers[0], prefixed, hidden, [x.dim])
    return SignalTensor(x.dim, new_hidden[x.dim][0])


def model_forward(
    K: DirectedSimplicialComplex,
    model: ModelSpec,
    params: Mapping[str, np.ndarray],
    x: SignalTensor | Mapping[int, np.ndarray] | np.ndarray,
) -> np.ndarray:
    """Class logits. Batched input (batch, simplices, features) gives (batch, classes), single sample gives
    (classes,)."""
    inputs = _as_inputs(x, model)
    single = all(np.ndim(values) == 2 for values in inputs.values())
    logits, _ = forward(build_plan(K, model), params, inputs)
    return logits[0] if single else logits


def dirsnn_model(
    n_layers: int,
    width: int,
    classes: int,
    relations: Sequence[Neighbourhood],
    dims: Sequence[int] = (1,),
    in_features: int = 1,
    head_widths: Sequence[int] = (),
    use_boundary: bool = False,
    use_coboundary: bool = False,
    use_kappa: bool = False,
    per_face_boundary: bool = False,
    aggregation: Literal["sum", "mean"] = "sum",
    nonlinearity: Literal["relu", "identity"] = "relu",
    seed: int = 0,
    name: str = "Dir-SNN",
) -> ModelSpec:
    layers = tuple(
        LayerSpec(
            relations=tuple(relations),
            use_boundary=use_boundary,
            use_coboundary=use_coboundary,
            in_features=in_features if index == 0 else width,
            out_features=width,
            use_kappa=use_kappa,
            nonlinearity=nonlinearity,
            per_face_boundary=per_face_boundary,
            aggregation=aggregation,
        )
        for index in range(n_layers)
    )
    return ModelSpec(layers, classes, tuple(head_widths), tuple(dims), seed=seed, name=name)


def source_localization_model(n_layers: int, width: int, classes: int, **options) -> ModelSpec:
    """Dir-SNN on edges with the four lower (1, i, j)-adjacencies, i, j in {0, 1}."""
    options.setdefault("relations", relation_set("source_localization"))
    return dirsnn_model(n_layers, width, classes, **options)


def expressivity_model(n_layers: int, width: int, classes: int = 2, **options) -> ModelSpec:
    """Dir-SNN on nodes, edges and triangles with the four lower adjacencies, upper (1, 2, 0)-adjacency,
    boundary and coboundary."""
    options.setdefault("relations", relation_set("expressivity"))
    options.setdefault("dims", (0, 1, 2))
    options.setdefault("use_boundary", True)
    options.setdefault("use_coboundary", True)
    return dirsnn_model(n_layers, width, classes, **options)
