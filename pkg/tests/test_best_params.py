import math

import numpy as np
import pytest

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial.best_params import Evaluated, optimize


def test_best_score_wins():
    best_kwargs, best, table = optimize(
        lambda width: Evaluated(width / 100, width), {"width": [4, 16, 8]}, details=2
    )

    assert best_kwargs == {"width": 16}
    assert best.score == 0.16
    assert table["width"].tolist() == [4, 16, 8]


def test_ties_broken_by_parameters_then_layers():
    best_kwargs, _, _ = optimize(
        lambda n_layers, width: Evaluated(0.9, width), {"n_layers": [1, 2], "width": [32, 16]}
    )
    assert best_kwargs == {"n_layers": 1, "width": 16}

    best_kwargs, _, _ = optimize(lambda n_layers: Evaluated(0.9, 100, n_layers), {"n_layers": [3, 2]})
    assert best_kwargs == {"n_layers": 2}


def test_failed_combination_is_nan():
    def evaluate(width):
        if width == 8:
            raise RuntimeError("Diverged.")
        return Evaluated(0.1, width)

    best_kwargs, _, table = optimize(evaluate, {"width": [8, 4]})

    assert best_kwargs == {"width": 4}
    assert math.isnan(table["score"].iloc[0])


def test_all_failed():
    with pytest.raises(RuntimeError):
        optimize(lambda width: Evaluated(np.nan, width), {"width": [1, 2]})
