"""Operator network engine shared by Dir-SNN and baselines.

Every layer updates signals of all working dimensions with

    x'_d = nonlinearity(x_d W_self + sum over terms (Op x_source) W_term + bias)

where Op is sparse operator of one neighbourhood (adjacency, kappa, boundary, coboundary...). Signals of
working dimensions are then max-pooled over simplices, concatenated and fed into MLP head. Gradients are
computed by hand in `backward`.

Signals are batched with shape (batch, simplices, features). Two dimensional (simplices, features) input is
handled as batch of one.
"""

from __future__ import annotations
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy import sparse

from .._errors import ShapeMismatch


class Term(NamedTuple):
    """One neighbourhood of target dimension.

    Attributes:
        name (str): Parameter name suffix, e.g. 'down_1_0_1', 'down_1_0_1/kappa' or 'boundary'.
        source_dim (int): Dimension whose signal is aggregated.
        operator (sparse.spmatrix): Shape (count(target), count(source)).
    """

    name: str
    source_dim: int
    operator: sparse.spmatrix


class LayerPlan(NamedTuple):
    index: int
    terms: dict[int, list[Term]]
    use_self: bool
    nonlinearity: str


class NetworkPlan:
    """Operators of one complex bound to one model architecture.

    Attributes:
        layers (list[LayerPlan]): Terms of every layer and target dimension.
        dims (tuple[int, ...]): Working dimensions.
        sizes (dict[int, int]): Number of simplices of every working dimension.
        input_maps (dict[int, tuple[int, sparse.spmatrix]]): Fixed input projections. Signal of key dimension
            is computed from signal of source dimension, e.g. nodes from edges.
        readout_dims (tuple[int, ...]): Dimensions that are max-pooled.
        head_depth (int): Number of affine layers in MLP head.
    """

    def __init__(
        self,
        layers: Sequence[LayerPlan],
        dims: Sequence[int],
        sizes: Mapping[int, int],
        input_maps: Mapping[int, tuple[int, sparse.spmatrix]] | None = None,
        readout_dims: Sequence[int] | None = None,
        head_depth: int = 1,
    ) -> None:
        self.layers = list(layers)
        self.dims = tuple(sorted(dims))
        self.sizes = dict(sizes)
        self.input_maps = dict(input_maps or {})
        self.readout_dims = tuple(sorted(readout_dims)) if readout_dims is not None else self.dims
        self.head_depth = head_depth


class Parameters(dict):
    """Named weight arrays, e.g. ``layer0/d1/down_1_0_1`` or ``head0/weight``."""

    def count(self) -> int:
        return int(sum(value.size for value in self.values()))

    def copy(self) -> Parameters:
        return Parameters({name: value.copy() for name, value in self.items()})

    def is_finite(self) -> bool:
        return all(np.isfinite(value).all() for value in self.values())


def init_parameters(shapes: Mapping[str, tuple[int, ...]], seed: int = 0) -> Parameters:
    """Weights uniform in +-1/sqrt(fan_in), biases zero. Order of `shapes` defines order of random draws."""
    rng = np.random.default_rng(seed)
    params = Parameters()
    for name, shape in shapes.items():
        if name.endswith("bias"):
            params[name] = np.zeros(shape)
        else:
            bound = 1 / np.sqrt(max(shape[0], 1))
            params[name] = rng.uniform(-bound, bound, size=shape)
    return params


def _relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0)


def _relu_derivative(z: np.ndarray) -> np.ndarray:
    return (z > 0).astype(z.dtype)


ACTIVATIONS = {
    "relu": (_relu, _relu_derivative),
    "identity": (lambda z: z, np.ones_like),
}


def apply_operator(operator: sparse.spmatrix, values: np.ndarray) -> np.ndarray:
    """Sparse operator times signal. Works for (simplices, features) and (batch, simplices, features)."""
    if operator.shape[1] != values.shape[-2]:
        raise ShapeMismatch(
            f"Operator with {operator.shape[1]} columns applied on signal of {values.shape[-2]} simplices."
        )
    if values.ndim == 2:
        return np.asarray(operator @ values)

    batch, n, features = values.shape
    flat = values.transpose(1, 0, 2).reshape(n, batch * features)
    result = np.asarray(operator @ flat).reshape(operator.shape[0], batch, features)
    return result.transpose(1, 0, 2)


def _matmul(values: np.ndarray, weight: np.ndarray, name: str) -> np.ndarray:
    if values.shape[-1] != weight.shape[0]:
        raise ShapeMismatch(
            f"Signal with {values.shape[-1]} features does not fit weight '{name}' {weight.shape}."
        )
    return values @ weight


def initial_signals(plan: NetworkPlan, inputs: Mapping[int, np.ndarray]) -> dict[int, np.ndarray]:
    hidden = {}
    for dim in plan.dims:
        if dim in inputs:
            values = np.asarray(inputs[dim], dtype=np.float64)
        elif dim in plan.input_maps:
            source, operator = plan.input_maps[dim]
            if source not in inputs:
                raise ShapeMismatch(f"Input of dimension {source} needed for projection to {dim} is missing.")
            values = apply_operator(operator, np.asarray(inputs[source], dtype=np.float64))
        else:
            raise ShapeMismatch(f"No input signal for working dimension {dim}.")

        if values.ndim == 2:
            values = values[None, :, :]
        if values.shape[1] != plan.sizes[dim]:
            raise ShapeMismatch(
                f"Signal of dimension {dim} has {values.shape[1]} rows, complex has {plan.sizes[dim]} simplices."
            )
        hidden[dim] = values

    batches = {values.shape[0] for values in hidden.values()}
    if len(batches) > 1:
        raise ShapeMismatch(f"Signals of different dimensions have different batch sizes {batches}.")
    return hidden


def layer_step(
    layer: LayerPlan, params: Mapping[str, np.ndarray], hidden: Mapping[int, np.ndarray], dims: Sequence[int]
) -> tuple[dict[int, np.ndarray], dict[int, tuple[np.ndarray, list[np.ndarray]]]]:
    """One layer for all target dimensions. Returns new signals and (pre activation, messages) cache."""
    activation = ACTIVATIONS[layer.nonlinearity][0]
    new_hidden = {}
    cache = {}

    for dim in dims:
        prefix = f"layer{layer.index}/d{dim}/"
        bias = params[prefix + "bias"]
        values = hidden[dim]
        pre = np.zeros(values.shape[:-1] + bias.shape)

        if layer.use_self:
            pre += _matmul(values, params[prefix + "self"], prefix + "self")

        messages = []
        for term in layer.terms.get(dim, []):
            message = apply_operator(term.operator, hidden[term.source_dim])
            pre += _matmul(message, params[prefix + term.name], prefix + term.name)
            messages.append(message)

        pre += bias
        new_hidden[dim] = activation(pre)
        cache[dim] = (pre, messages)

    return new_hidden, cache


def _max_pool(
    plan: NetworkPlan, hidden: Mapping[int, np.ndarray]
) -> tuple[np.ndarray, list[np.ndarray | None]]:
    pooled = []
    positions: list[np.ndarray | None] = []
    for dim in plan.readout_dims:
        values = hidden[dim]
        if values.shape[1] == 0:
            # Missing dimension of complex is read as zeros
            pooled.append(np.zeros((values.shape[0], values.shape[2])))
            positions.append(None)
        else:
            argmax = values.argmax(axis=1)
            pooled.append(np.take_along_axis(values, argmax[:, None, :], axis=1)[:, 0, :])
            positions.append(argmax)
    return np.concatenate(pooled, axis=1), positions


class ForwardCache(NamedTuple):
    layers: list[tuple[dict[int, np.ndarray], dict[int, tuple[np.ndarray, list[np.ndarray]]]]]
    last_hidden: dict[int, np.ndarray]
    positions: list[np.ndarray | None]
    head: list[tuple[np.ndarray, np.ndarray]]


def forward(
    plan: NetworkPlan, params: Mapping[str, np.ndarray], inputs: Mapping[int, np.ndarray]
) -> tuple[np.ndarray, ForwardCache]:
    """Logits of shape (batch, classes) and cache for `backward`."""
    hidden = initial_signals(plan, inputs)
    layer_caches = []

    for layer in plan.layers:
        new_hidden, cache = layer_step(layer, params, hidden, plan.dims)
        layer_caches.append((hidden, cache))
        hidden = new_hidden

    pooled, positions = _max_pool(plan, hidden)

    head_cache = []
    values = pooled
    for index in range(plan.head_depth):
        weight_name = f"head{index}/weight"
        pre = _matmul(values, params[weight_name], weight_name) + params[f"head{index}/bias"]
        head_cache.append((values, pre))
        values = _relu(pre) if index < plan.head_depth - 1 else pre

    return values, ForwardCache(layer_caches, hidden, positions, head_cache)


def hidden_states(
    plan: NetworkPlan, params: Mapping[str, np.ndarray], inputs: Mapping[int, np.ndarray]
) -> list[dict[int, np.ndarray]]:
    """Signals after every layer, first item is input."""
    hidden = initial_signals(plan, inputs)
    states = [hidden]
    for layer in plan.layers:
        hidden, _ = layer_step(layer, params, hidden, plan.dims)
        states.append(hidden)
    return states


def cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean softmax cross entropy and its gradient with respect to logits."""
    labels = np.asarray(labels, dtype=np.int64)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probabilities = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    batch = len(labels)
    loss = -log_probabilities[np.arange(batch), labels].mean()

    gradient = np.exp(log_probabilities)
    gradient[np.arange(batch), labels] -= 1
    return float(loss), gradient / batch


def backward(
    plan: NetworkPlan, params: Mapping[str, np.ndarray], cache: ForwardCache, dlogits: np.ndarray
) -> Parameters:
    """Gradients of all parameters. Parameters without operator in this plan get zero gradient."""
    grads = Parameters({name: np.zeros_like(value) for name, value in params.items()})

    delta = dlogits
    for index in reversed(range(plan.head_depth)):
        values, pre = cache.head[index]
        if index < plan.head_depth - 1:
            delta = delta * _relu_derivative(pre)
        grads[f"head{index}/weight"] += values.T @ delta
        grads[f"head{index}/bias"] += delta.sum(axis=0)
        delta = delta @ params[f"head{index}/weight"].T

    dhidden = {dim: np.zeros_like(values) for dim, values in cache.last_hidden.items()}
    features = next(iter(cache.last_hidden.values())).shape[2] if cache.last_hidden else 0
    for position, (dim, argmax) in enumerate(zip(plan.readout_dims, cache.positions)):
        if argmax is None:
            continue
        dpooled = delta[:, position * features : (position + 1) * features]
        np.put_along_axis(dhidden[dim], argmax[:, None, :], dpooled[:, None, :], axis=1)

    for layer, (hidden_in, layer_cache) in zip(reversed(plan.layers), reversed(cache.layers)):
        derivative = ACTIVATIONS[layer.nonlinearity][1]
        dhidden_in = {dim: np.zeros_like(values) for dim, values in hidden_in.items()}

        for dim in plan.dims:
            prefix = f"layer{layer.index}/d{dim}/"
            pre, messages = layer_cache[dim]
            dpre = dhidden[dim] * derivative(pre)

            grads[prefix + "bias"] += dpre.sum(axis=(0, 1))
            if layer.use_self:
                grads[prefix + "self"] += np.einsum("bnf,bng->fg", hidden_in[dim], dpre)
                dhidden_in[dim] += dpre @ params[prefix + "self"].T

            for term, message in zip(layer.terms.get(dim, []), messages):
                grads[prefix + term.name] += np.einsum("bnf,bng->fg", message, dpre)
                dmessage = dpre @ params[prefix + term.name].T
                dhidden_in[term.source_dim] += apply_operator(term.operator.T, dmessage)

        dhidden = dhidden_in

    return grads


def loss_and_gradients(
    plan: NetworkPlan, params: Mapping[str, np.ndarray], inputs: Mapping[int, np.ndarray], labels: np.ndarray
) -> tuple[float, Parameters, np.ndarray]:
    logits, cache = forward(plan, params, inputs)
    loss, dlogits = cross_entropy(logits, labels)
    return loss, backward(plan, params, cache, dlogits), logits
