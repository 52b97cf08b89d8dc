"""Module with functions that compare predicted classes with reality and summarize repeated runs."""

from __future__ import annotations
from typing import Sequence

import numpy as np
import pandas as pd
from sklearn.metrics import accuracy_score, confusion_matrix


def accuracy(predicted: np.ndarray | Sequence[int], labels: np.ndarray | Sequence[int]) -> float:
    """Fraction of correctly predicted classes.

    Examples:
        >>> accuracy([0, 1, 1, 0], [0, 1, 0, 0])
        0.75
    """
    predicted, labels = np.asarray(predicted), np.asarray(labels)
    if len(predicted) != len(labels):
        raise ValueError("Predicted and labels length not equal.")
    if not len(labels):
        return np.nan
    return float(accuracy_score(labels, predicted))


def confusion(predicted: Sequence[int], labels: Sequence[int], classes: int) -> pd.DataFrame:
    """Confusion matrix, rows are real classes, columns predicted ones."""
    matrix = confusion_matrix(labels, predicted, labels=list(range(classes)))
    return pd.DataFrame(matrix, index=range(classes), columns=range(classes))


def snr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    """10 log10 of power of clean signal divided by power of added noise."""
    clean = np.asarray(clean, dtype=np.float64)
    noise = np.asarray(noisy, dtype=np.float64) - clean
    noise_power = np.mean(noise ** 2)
    if noise_power == 0:
        return np.inf
    return float(10 * np.log10(np.mean(clean ** 2) / noise_power))


def summarize(results: pd.DataFrame, by: Sequence[str] = ("model", "snr_db")) -> pd.DataFrame:
    """Mean and std of accuracy over seeds. Std of one run is 0. Groups keep order of first appearance."""
    grouped = results.groupby(list(by), sort=False)["accuracy"]
    summary = grouped.agg(["mean", "std"]).reset_index()
    summary["std"] = summary["std"].fillna(0.0)
    return summary
