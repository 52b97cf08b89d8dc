"""Subpackage with Dir-SNN and baseline models and the numpy training kernel.

All models are built by one engine (`network`). Model is defined by `ModelSpec`, bound to operators of concrete
complex with `dirsnn.build_plan` and trained with `training.train`.

Models for source localization are created from `models_assignment` with the same signature
``builder(n_layers, width, classes, **options)``.

Examples:
=========

    >>> import numpy as np
    >>> from dirsimplicial.flag_lift import Digraph, lift_directed_flag
    >>> K = lift_directed_flag(Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]))
    >>> model = models_assignment["Dir-SNN"](n_layers=2, width=8, classes=2)
    >>> data = [training.GraphSamples.from_complex(K, model, {1: np.ones((4, 5, 1))}, [0, 1, 0, 1])]
    >>> params, trace = training.train(model, data, epochs=2, batch=2)
    >>> list(trace.to_df().columns)
    ['epoch', 'split', 'loss', 'accuracy']
"""

from . import network
from . import dirsnn
from . import baselines
from . import training

__all__ = ["network", "dirsnn", "baselines", "training"]


models_assignment = {
    "Dir-SNN": dirsnn.source_localization_model,
    "SNN": baselines.snn_model,
    "Dir-GNN": baselines.dirgnn_model,
    "GCN": baselines.gcn_model,
}
