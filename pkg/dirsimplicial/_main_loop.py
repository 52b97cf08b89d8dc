"""Internal function that can run on multiple processes at once. It will do grid search of one model on one
generated dataset and evaluate the selected model on test data."""

from __future__ import annotations
from typing import Any
import time

import numpy as np
import mylogging

from . import best_params
from ._result_classes import RunRecord
from .datagen import Dataset
from .models import models_assignment
from .models.dirsnn import build_plan, parse_relations
from .models.training import GraphSamples, Hyperparameters, evaluate, train


def model_options(config: dict[str, Any], model_name: str) -> dict[str, Any]:
    """Architecture options of model from config values. Dir-SNN specific ones are used only for Dir-SNN."""
    options = {
        "head_widths": config["head_widths"],
        "nonlinearity": config["nonlinearity"],
        "aggregation": config["aggregation"],
    }
    if model_name == "Dir-SNN":
        options.update(
            relations=parse_relations(config["relations"]),
            use_boundary=config["use_boundary"],
            use_coboundary=config["use_coboundary"],
            use_kappa=config["use_kappa"],
            per_face_boundary=config["per_face_boundary"],
        )
    return options


def hyperparameters(config: dict[str, Any], seed: int) -> Hyperparameters:
    return Hyperparameters(
        learning_rate=config["learning_rate"],
        epochs=config["epochs"],
        batch=config["batch"],
        optimizer=config["optimizer"],
        seed=seed,
        beta_1=config["beta_1"],
        beta_2=config["beta_2"],
        adam_epsilon=config["adam_epsilon"],
    )


# This is core function... It has to be 1st level function to be able to use in multiprocessing.
def train_and_evaluate(
    config: dict[str, Any],
    config_hash: str,
    model_name: str,
    snr_db: float,
    seed: int,
    dataset: Dataset,
    split_indices: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> dict[tuple[str, float, int], RunRecord]:
    """Inner function, that can run in parallel with multiprocessing. If model fails, it's logged and record
    with nan accuracy is returned, so other cells are not affected.

    Note:
        config is just a dictionary passed as param, so cannot use dot syntax here.

    Returns:
        dict[tuple[str, float, int], RunRecord]: Record keyed by (model, snr_db, seed).
    """
    logs_list: list = []
    warnings_list: list = []

    if config["multiprocessing"]:
        mylogging.config.OUTPUT = config["logger_output"]
        mylogging.config.LEVEL = config["logger_level"]
        mylogging.config.FILTER = config["logger_filter"]
        mylogging.config.COLORIZE = config["logger_color"]
        logs_redirect = mylogging.redirect_logs_and_warnings_to_lists(logs_list, warnings_list)

    start = time.time()
    train_index, val_index, test_index = split_indices
    inputs, labels = dataset.inputs, dataset.labels

    try:
        options = model_options(config, model_name)
        hyper = hyperparameters(config, seed)

        def evaluate_kwargs(n_layers: int, width: int) -> best_params.Evaluated:
            model = models_assignment[model_name](
                n_layers=n_layers, width=width, classes=dataset.classes, seed=seed, **options
            )
            plan = build_plan(dataset.complex, model)
            train_data = GraphSamples(plan, {1: inputs[train_index]}, labels[train_index])
            val_data = GraphSamples(plan, {1: inputs[val_index]}, labels[val_index])

            params, trace = train(model, [train_data], [val_data], hyper)
            val_accuracy = evaluate(params, [val_data])[1]
            return best_params.Evaluated(val_accuracy, params.count(), (plan, params, trace))

        best_kwargs, best, _ = best_params.optimize(
            evaluate_kwargs,
            {"n_layers": config["layers_grid"], "width": config["width_grid"]},
            name=model_name,
        )
        plan, params, trace = best.payload
        test_accuracy = evaluate(params, [GraphSamples(plan, {1: inputs[test_index]}, labels[test_index])])[1]

        record = RunRecord(
            config_hash,
            seed,
            model_name,
            snr_db,
            test_accuracy,
            best_kwargs["n_layers"],
            best_kwargs["width"],
            best.parameters,
            best.score,
            trace.records,
            time.time() - start,
        )
        mylogging.info(f"{model_name}, SNR {snr_db} dB, seed {seed}: test accuracy {test_accuracy:.3f}.")

    except (Exception,):
        error_message = f"Error in '{model_name}' model with SNR {snr_db} dB and seed {seed}"
        mylogging.traceback(caption=error_message)
        record = RunRecord(
            config_hash,
            seed,
            model_name,
            snr_db,
            np.nan,
            None,
            None,
            None,
            np.nan,
            [],
            time.time() - start,
            error=error_message,
        )

    finally:
        if config["multiprocessing"]:
            logs_redirect.close_redirect()

    record.logs_list = logs_list
    record.warnings_list = warnings_list

    return {record.key: record}
