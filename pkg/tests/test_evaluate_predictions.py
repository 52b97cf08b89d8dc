import math

import numpy as np
import pandas as pd
import pytest

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial import evaluate_predictions


def test_accuracy():
    assert evaluate_predictions.accuracy([1, 1, 2], [1, 1, 2]) == 1.0
    assert evaluate_predictions.accuracy(np.array([0, 1]), np.array([1, 0])) == 0.0
    assert math.isnan(evaluate_predictions.accuracy([], []))

    with pytest.raises(ValueError):
        evaluate_predictions.accuracy([0, 1], [0])


def test_confusion():
    matrix = evaluate_predictions.confusion([0, 2, 2, 1], [0, 2, 1, 1], classes=3)

    assert matrix.shape == (3, 3)
    assert matrix.loc[1, 2] == 1
    assert matrix.loc[1, 1] == 1
    assert int(np.trace(matrix.values)) == 3


def test_snr():
    clean = np.array([1.0, -1.0, 1.0, -1.0])

    assert evaluate_predictions.snr_db(clean, clean) == math.inf
    assert np.isclose(evaluate_predictions.snr_db(clean, clean * 1.1), 20)


def test_summarize_keeps_order_and_single_run_std():
    results = pd.DataFrame(
        {
            "model": ["Dir-SNN", "Dir-SNN", "GCN", "Dir-SNN"],
            "snr_db": [0, 0, 0, -5],
            "accuracy": [0.8, 0.6, 0.5, 0.4],
        }
    )
    summary = evaluate_predictions.summarize(results)

    assert summary[["model", "snr_db"]].values.tolist() == [["Dir-SNN", 0], ["GCN", 0], ["Dir-SNN", -5]]
    assert np.allclose(summary["mean"], [0.7, 0.5, 0.4])
    assert summary["std"].iloc[1] == 0
    assert summary["std"].iloc[0] > 0
