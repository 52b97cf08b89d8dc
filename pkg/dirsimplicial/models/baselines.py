"""Baselines compared with Dir-SNN.

    - SNN: undirected convolutional simplicial network with lower adjacency (edges sharing a node).
    - Dir-GNN: separate aggregation of in and out neighbours of nodes.
    - GCN: symmetric normalized convolution of nodes.

GNN baselines of edge tasks work on nodes, node signal is sum of signals of incident edges.

Single layer functions (`snn_forward`, `dirgnn_forward`, `gcn_forward`) are written directly from their
operators. Models for training are built with the same engine as Dir-SNN.
"""

from __future__ import annotations
from typing import Mapping

import numpy as np
from scipy import sparse

from ..adjacency import relation_set, undirected_lower_adjacency, normalized_node_adjacency
from ..complex_core import DirectedSimplicialComplex
from ..flag_lift import Digraph
from .._errors import ShapeMismatch
from .dirsnn import ModelSpec, dirsnn_model, face_projection
from .network import ACTIVATIONS


def edge_to_node_projection(K: DirectedSimplicialComplex) -> sparse.csr_matrix:
    """Operator (nodes x edges). Node feature is sum of features of incident edges, incidence is read from
    boundary relation."""
    return face_projection(K, 1)


def _check(x: np.ndarray, rows: int, weight: np.ndarray) -> None:
    if x.shape[0] != rows or x.shape[1] != weight.shape[0]:
        raise ShapeMismatch(f"Signal {x.shape} does not fit {rows} rows and weight {weight.shape}.")


def snn_forward(
    K: DirectedSimplicialComplex,
    params: Mapping[str, np.ndarray],
    x: np.ndarray,
    dim: int = 1,
    nonlinearity: str = "relu",
) -> np.ndarray:
    """x W_self + A x W + b with A the undirected lower adjacency.

    Param names are 'self', 'undirected_lower' and 'bias'.
    """
    _check(x, K.count(dim), params["self"])
    operator = undirected_lower_adjacency(K, dim).astype(np.float64)
    pre = x @ params["self"] + (operator @ x) @ params["undirected_lower"] + params["bias"]
    return ACTIVATIONS[nonlinearity][0](pre)


def _in_out(g: Digraph) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    edges = np.array(g.sorted_edges(), dtype=np.int64).reshape(-1, 2)
    ones = np.ones(len(edges))
    out_adjacency = sparse.csr_matrix((ones, (edges[:, 0], edges[:, 1])), shape=(g.n, g.n))
    return out_adjacency.T.tocsr(), out_adjacency


def dirgnn_forward(
    g: Digraph, params: Mapping[str, np.ndarray], x: np.ndarray, nonlinearity: str = "relu"
) -> np.ndarray:
    """x W_self + A_in x W_in + A_out x W_out + b. Param names 'self', 'in', 'out', 'bias'."""
    _check(x, g.n, params["self"])
    in_adjacency, out_adjacency = _in_out(g)
    pre = (
        x @ params["self"]
        + (in_adjacency @ x) @ params["in"]
        + (out_adjacency @ x) @ params["out"]
        + params["bias"]
    )
    return ACTIVATIONS[nonlinearity][0](pre)


def gcn_forward(
    K: DirectedSimplicialComplex, params: Mapping[str, np.ndarray], x: np.ndarray, nonlinearity: str = "relu"
) -> np.ndarray:
    """A_hat x W + b with A_hat = D^-1/2 (A + I) D^-1/2. Param names 'weight', 'bias'."""
    _check(x, K.count(0), params["weight"])
    return ACTIVATIONS[nonlinearity][0](normalized_node_adjacency(K) @ x @ params["weight"] + params["bias"])


def snn_model(n_layers: int, width: int, classes: int, **options) -> ModelSpec:
    options.setdefault("relations", ["undirected_lower"])
    options.setdefault("name", "SNN")
    return dirsnn_model(n_layers, width, classes, **options)


def dirgnn_model(n_layers: int, width: int, classes: int, project_edges: bool = True, **options) -> ModelSpec:
    """Dir-GNN is Dir-SNN on nodes with upper (1, 0, 1) and (1, 1, 0) adjacencies (in and out neighbours)."""
    options.setdefault("relations", relation_set("dirgnn"))
    options.setdefault("name", "Dir-GNN")
    options["dims"] = (0,)
    model = dirsnn_model(n_layers, width, classes, **options)
    return model._replace(input_projection=((0, 1),)) if project_edges else model


def gcn_model(n_layers: int, width: int, classes: int, project_edges: bool = True, **options) -> ModelSpec:
    options.setdefault("name", "GCN")
    options["relations"] = ["gcn_normalized"]
    options["dims"] = (0,)
    model = dirsnn_model(n_layers, width, classes, **options)
    model = model._replace(layers=tuple(layer._replace(use_self=False) for layer in model.layers))
    return model._replace(input_projection=((0, 1),)) if project_edges else model


def dirgnn_layer_params(params: Mapping[str, np.ndarray], layer: int = 0) -> dict[str, np.ndarray]:
    """Rename engine weights of Dir-GNN model layer to names of `dirgnn_forward`."""
    prefix = f"layer{layer}/d0/"
    return {
        "self": params[prefix + "self"],
        "in": params[prefix + "up_1_0_1"],
        "out": params[prefix + "up_1_1_0"],
        "bias": params[prefix + "bias"],
    }
