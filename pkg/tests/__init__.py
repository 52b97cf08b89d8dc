""" Test module. Auto pytest that can be started in IDE or with::

    python -m pytest . --cov dirsimplicial --cov-report xml:.coverage.xml

in terminal in tests folder.
"""

from . import (
    test_adjacency,
    test_best_params,
    test_complex_core,
    test_configuration,
    test_datagen,
    test_dswl,
    test_evaluate_predictions,
    test_flag_lift,
    test_main,
    test_models,
    test_serialization,
)

__all__ = [
    "test_adjacency",
    "test_best_params",
    "test_complex_core",
    "test_configuration",
    "test_datagen",
    "test_dswl",
    "test_evaluate_predictions",
    "test_flag_lift",
    "test_main",
    "test_models",
    "test_serialization",
]
