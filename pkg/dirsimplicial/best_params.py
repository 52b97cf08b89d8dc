"""Module with function optimize that find the best parameters of model on a grid. Every combination of
parameters is trained and evaluated on validation data. Best is the one with the best validation score, ties
are broken by fewer trainable parameters, then by fewer layers.
"""

from __future__ import annotations
from typing import Any, Callable, NamedTuple, Sequence
import itertools

import numpy as np
import pandas as pd
import mylogging


class Evaluated(NamedTuple):
    """Result of one evaluated combination.

    Attributes:
        score (float): Validation accuracy. Nan if training failed.
        parameters (int): Number of trainable parameters.
        payload (Any): Anything caller needs later, e.g. trained weights.
    """

    score: float
    parameters: int
    payload: Any = None


def _rank(kwargs: dict[str, Any], evaluated: Evaluated) -> tuple[float, int, int]:
    score = evaluated.score if np.isfinite(evaluated.score) else -np.inf
    return (-score, evaluated.parameters, kwargs.get("n_layers", 0))


def optimize(
    evaluate_kwargs: Callable[..., Evaluated],
    kwargs_grid: dict[str, Sequence[Any]],
    name: str = "Your model",
    details: int = 0,
) -> tuple[dict[str, Any], Evaluated, pd.DataFrame]:
    """Evaluate all combinations of parameters and return the best one.

    Args:
        evaluate_kwargs (Callable[..., Evaluated]): Train model with given kwargs and return its validation
            score (eg. ``evaluate_kwargs(n_layers=2, width=16)``).
        kwargs_grid (dict[str, Sequence[Any]]): Tried values of every argument
            (eg: ``{"n_layers": [1, 2, 3], "width": [16, 32, 64]}``).
        name (str, optional): Name of model to be displayed in logs. Defaults to 'Your model'.
        details (int, optional): 0 log nothing, 1 log best parameters, 2 log every evaluated combination.
            Defaults to 0.

    Raises:
        RuntimeError: If no combination was evaluated successfully.

    Returns:
        tuple[dict[str, Any], Evaluated, pd.DataFrame]: Best kwargs, their evaluation and table with all
        evaluated combinations.

    Examples:
        >>> best_kwargs, best, table = optimize(
        ...     lambda n_layers, width: Evaluated(0.5 if width == 8 else 0.4, n_layers * width),
        ...     {"n_layers": [2, 1], "width": [8, 16]},
        ... )
        >>> best_kwargs
        {'n_layers': 1, 'width': 8}
    """
    keys = list(kwargs_grid)
    results: list[tuple[dict[str, Any], Evaluated]] = []

    for values in itertools.product(*kwargs_grid.values()):
        kwargs = dict(zip(keys, values))
        try:
            evaluated = evaluate_kwargs(**kwargs)
        except Exception:
            mylogging.traceback(f"Evaluation of {name} with parameters {kwargs} failed.")
            evaluated = Evaluated(np.nan, 0)

        results.append((kwargs, evaluated))
        if details > 1:
            mylogging.info(
                f"{name} {kwargs}: score {evaluated.score:.4f}, {evaluated.parameters} parameters."
            )

    if not any(np.isfinite(evaluated.score) for _, evaluated in results):
        raise RuntimeError(mylogging.return_str(f"No parameters combination of {name} was evaluated."))

    best_kwargs, best = min(results, key=lambda result: _rank(*result))

    if details:
        mylogging.info(f"Best parameters of {name} are {best_kwargs} with score {best.score:.4f}.")

    table = pd.DataFrame(
        [
            {**kwargs, "score": evaluated.score, "parameters": evaluated.parameters}
            for kwargs, evaluated in results
        ]
    )

    return best_kwargs, best, table
