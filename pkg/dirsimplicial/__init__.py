# -*- coding: utf-8 -*-

"""
.. image:: https://img.shields.io/badge/License-MIT-yellow.svg
    :target: https://opensource.org/licenses/MIT
    :alt: License: MIT


Library for directed simplicial complexes and neural networks on them. Lift a directed graph into its directed
flag complex, build directed (k, i, j)-adjacencies, compare complexes with colour refinement (D-SWL) and train
directed simplicial networks (Dir-SNN) and their baselines with a small numpy kernel.

There are two experiments built in. Expressivity shows that Dir-SNN separates digraphs that directed graph
networks can not and source localization benchmark compares Dir-SNN, SNN, Dir-GNN and GCN on edge signals
diffused over stochastic block model graphs.

Installation
============

Python >=3.9 (Windows, Linux, macOS)

.. code-block:: console

    pip install dirsimplicial

How to
======

Most of the configuration is done in `configuration.py` (via `config` object). Every setting can be also passed
as keyword argument of main functions, in ini config file or in command line.

Examples:
=========

    >>> import dirsimplicial
    >>> from dirsimplicial.flag_lift import Digraph, lift_directed_flag
    ...
    >>> K = lift_directed_flag(Digraph(4, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 1)]))
    >>> dirsimplicial.main.counts_line(K)
    '0:4 1:5 2:1'
    >>> from dirsimplicial.adjacency import lower_adjacency
    >>> len(lower_adjacency(K, 1, 1, 0, 1))
    5

Check whether colour refinement distinguishes two complexes

    >>> a = lift_directed_flag(Digraph(3, [(0, 1), (1, 2), (0, 2)]))
    >>> b = lift_directed_flag(Digraph(3, [(0, 1), (1, 2), (2, 0)]))
    >>> dirsimplicial.dswl.distinguish(a, b).distinguished
    True

Configure and print the plan of the benchmark without training

    >>> dirsimplicial.config.update({"use_config_preset": "desk", "dry_run": True})
    >>> result = dirsimplicial.bench()  # doctest: +SKIP

Command line

.. code-block:: console

    dirsimplicial lift graph.txt --out complex.txt
    dirsimplicial dswl a.txt b.txt --variant reduced
    dirsimplicial bench --profile desk --out results --seed 0
"""

__version__ = "0.1.0"
__license__ = "MIT"

__all__ = [
    "_result_classes",
    "adjacency",
    "best_params",
    "complex_core",
    "config",
    "_configuration",
    "datagen",
    "dswl",
    "evaluate_predictions",
    "flag_lift",
    "_helpers",
    "_main_loop",
    "main",
    "models",
    "serialization",
    "lift",
    "export_adjacency",
    "dswl_test",
    "expressivity",
    "bench",
    "generate_dataset",
]

from . import (
    _result_classes,
    adjacency,
    best_params,
    complex_core,
    configuration as _configuration,
    datagen,
    dswl,
    evaluate_predictions,
    flag_lift,
    _helpers,
    _main_loop,
    models,
    serialization,
    main,
)

# Just shortcuts to avoid importing from main
from .main import (
    lift,
    export_adjacency,
    dswl_test,
    expressivity,
    bench,
    generate_dataset,
)

from .configuration import config

import sys

import mylogging

if sys.version_info.major < 3 or (sys.version_info.major == 3 and sys.version_info.minor < 9):
    raise RuntimeError(mylogging.return_str("Python version >= 3.9 necessary."))
