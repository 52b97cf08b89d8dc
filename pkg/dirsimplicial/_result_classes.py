"""This module define classes (types) that main functions will return so it's possible to use
static type analysis, intellisense etc."""

from __future__ import annotations
import json

import pandas as pd

from .configuration import Config


class RunRecord:
    """One benchmark cell, i.e. model selected by grid search for one SNR and seed."""

    def __init__(
        self,
        config_hash: str,
        seed: int,
        model: str,
        snr_db: float,
        accuracy: float,
        layers: int | None,
        width: int | None,
        parameters: int | None,
        val_accuracy: float,
        metrics: list[dict],
        wall_clock: float,
        error: str | None = None,
        logs_list: list | None = None,
        warnings_list: list | None = None,
    ):
        self.config_hash = config_hash
        self.seed = seed
        self.model = model
        self.snr_db = snr_db
        self.accuracy = accuracy
        self.layers = layers
        self.width = width
        self.parameters = parameters
        self.val_accuracy = val_accuracy
        self.metrics = metrics
        self.wall_clock = wall_clock
        self.error = error
        self.logs_list = logs_list or []
        self.warnings_list = warnings_list or []

    @property
    def key(self) -> tuple[str, float, int]:
        return (self.model, self.snr_db, self.seed)

    def to_json(self) -> str:
        """One line of runs.jsonl. Wall clock is excluded, so the line is reproducible."""
        return json.dumps(
            {
                "config_hash": self.config_hash,
                "seed": self.seed,
                "model": self.model,
                "snr_db": self.snr_db,
                "accuracy": self.accuracy,
                "layers": self.layers,
                "width": self.width,
                "parameters": self.parameters,
                "val_accuracy": self.val_accuracy,
                "metrics": self.metrics,
                "error": self.error,
            },
            sort_keys=True,
        )


class Tables:
    def __init__(self, simple: str, simple_table_df: pd.DataFrame):
        self.simple = simple
        self.simple_table_df = simple_table_df


class BenchResult:
    def __init__(
        self,
        results_df: pd.DataFrame,
        plot_df: pd.DataFrame,
        records: list[RunRecord],
        tables: Tables | None,
        config: Config,
        config_hash: str,
    ):
        self.results_df = results_df
        self.plot_df = plot_df
        self.records = records
        self.tables = tables
        self.config = config
        self.config_hash = config_hash


class ExpressivityResult:
    def __init__(self, accuracies: dict[str, list[float]], tables: Tables):
        self.accuracies = accuracies
        self.tables = tables

    def mean(self, model: str) -> float:
        return sum(self.accuracies[model]) / len(self.accuracies[model])
