"""Training of operator networks. Adam (or plain SGD) on mean cross entropy, mini batches drawn with seeded
permutation, so two runs with the same seed give identical metrics.

Samples are grouped by complex (`GraphSamples`), because samples of one batch forward pass must share
operators. Source localization has one group with all signals, expressivity test has one group per complex.
"""

from __future__ import annotations
from typing import Mapping, NamedTuple, Sequence
from pathlib import Path

import numpy as np
import pandas as pd
import mylogging

from ..complex_core import DirectedSimplicialComplex
from ..evaluate_predictions import accuracy
from .._errors import NonFiniteLoss, ShapeMismatch
from .dirsnn import ModelSpec, build_plan, init_model_parameters
from .network import NetworkPlan, Parameters, cross_entropy, forward, loss_and_gradients


class GraphSamples:
    """Signals on one complex.

    Attributes:
        plan (NetworkPlan): Model bound to the complex.
        inputs (dict[int, np.ndarray]): Signals of shape (samples, simplices, features) by dimension.
        labels (np.ndarray): Class of every sample.
    """

    def __init__(self, plan: NetworkPlan, inputs: Mapping[int, np.ndarray], labels: Sequence[int]) -> None:
        self.plan = plan
        self.inputs = {dim: np.asarray(values, dtype=np.float64) for dim, values in inputs.items()}
        self.labels = np.asarray(labels, dtype=np.int64)

        for dim, values in self.inputs.items():
            if values.ndim != 3 or values.shape[0] != len(self.labels):
                raise ShapeMismatch(
                    f"Inputs of dimension {dim} must have shape (samples, simplices, features) with "
                    f"{len(self.labels)} samples, got {values.shape}."
                )

    @classmethod
    def from_complex(
        cls,
        K: DirectedSimplicialComplex,
        model: ModelSpec,
        inputs: Mapping[int, np.ndarray],
        labels: Sequence[int],
    ) -> GraphSamples:
        return cls(build_plan(K, model), inputs, labels)

    def __len__(self) -> int:
        return len(self.labels)

    def take(self, indices: Sequence[int] | np.ndarray) -> GraphSamples:
        indices = np.asarray(indices, dtype=np.int64)
        return GraphSamples(
            self.plan, {dim: values[indices] for dim, values in self.inputs.items()}, self.labels[indices]
        )


class Hyperparameters(NamedTuple):
    learning_rate: float = 1e-3
    epochs: int = 100
    batch: int = 32
    optimizer: str = "adam"
    seed: int = 0
    beta_1: float = 0.9
    beta_2: float = 0.999
    adam_epsilon: float = 1e-8


class MetricsTrace:
    """Loss and accuracy of every epoch and split."""

    columns = ["epoch", "split", "loss", "accuracy"]

    def __init__(self) -> None:
        self.records: list[dict] = []

    def add(self, epoch: int, split: str, loss: float, accuracy_value: float) -> None:
        self.records.append({"epoch": epoch, "split": split, "loss": loss, "accuracy": accuracy_value})

    def last(self, split: str = "train") -> dict | None:
        selected = [record for record in self.records if record["split"] == split]
        return selected[-1] if selected else None

    def to_df(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=self.columns)

    def to_csv(self, path: str | Path) -> None:
        self.to_df().to_csv(path, index=False, float_format="%.12g", lineterminator="\n")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricsTrace):
            return NotImplemented
        return self.records == other.records

    def __len__(self) -> int:
        return len(self.records)


class Adam:
    def __init__(
        self,
        params: Mapping[str, np.ndarray],
        learning_rate: float,
        beta_1: float,
        beta_2: float,
        epsilon: float,
    ) -> None:
        self.learning_rate = learning_rate
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.epsilon = epsilon
        self.moment = {name: np.zeros_like(value) for name, value in params.items()}
        self.velocity = {name: np.zeros_like(value) for name, value in params.items()}
        self.steps = 0

    def step(self, params: dict[str, np.ndarray], grads: Mapping[str, np.ndarray]) -> None:
        self.steps += 1
        correction_1 = 1 - self.beta_1 ** self.steps
        correction_2 = 1 - self.beta_2 ** self.steps

        for name, grad in grads.items():
            self.moment[name] = self.beta_1 * self.moment[name] + (1 - self.beta_1) * grad
            self.velocity[name] = self.beta_2 * self.velocity[name] + (1 - self.beta_2) * grad ** 2
            params[name] -= (
                self.learning_rate
                * (self.moment[name] / correction_1)
                / (np.sqrt(self.velocity[name] / correction_2) + self.epsilon)
            )


class Sgd:
    def __init__(self, learning_rate: float) -> None:
        self.learning_rate = learning_rate

    def step(self, params: dict[str, np.ndarray], grads: Mapping[str, np.ndarray]) -> None:
        for name, grad in grads.items():
            params[name] -= self.learning_rate * grad


def predict(params: Mapping[str, np.ndarray], data: Sequence[GraphSamples]) -> list[np.ndarray]:
    """Logits of every group."""
    return [forward(group.plan, params, group.inputs)[0] for group in data if len(group)]


def evaluate(params: Mapping[str, np.ndarray], data: Sequence[GraphSamples]) -> tuple[float, float]:
    """Mean cross entropy and accuracy over all samples of all groups."""
    total = sum(len(group) for group in data)
    if not total:
        return np.nan, np.nan

    loss_sum = 0.0
    predicted, labels = [], []
    for group, logits in zip([group for group in data if len(group)], predict(params, data)):
        loss, _ = cross_entropy(logits, group.labels)
        loss_sum += loss * len(group)
        predicted.append(logits.argmax(axis=1))
        labels.append(group.labels)

    return loss_sum / total, accuracy(np.concatenate(predicted), np.concatenate(labels))


def train(
    model: ModelSpec,
    train_data: Sequence[GraphSamples],
    val_data: Sequence[GraphSamples] = (),
    hyper: Hyperparameters | None = None,
    params: Parameters | None = None,
    **kwargs,
) -> tuple[Parameters, MetricsTrace]:
    """Train model with mini batches.

    Args:
        model (ModelSpec): Trained architecture. Used for weight initialization.
        train_data (Sequence[GraphSamples]): Training samples grouped by complex.
        val_data (Sequence[GraphSamples], optional): Validation samples, only evaluated. Defaults to ().
        hyper (Hyperparameters | None, optional): Learning rate, epochs, batch, optimizer, seed... If None,
            defaults are used. Defaults to None.
        params (Parameters | None, optional): Initial weights. If None, initialized from `hyper.seed`.
            Defaults to None.
        **kwargs: Overwrite fields of `hyper`, e.g. ``epochs=10``.

    Raises:
        NonFiniteLoss: If loss of some batch is nan or inf.

    Returns:
        tuple[Parameters, MetricsTrace]: Trained weights and per epoch train and validation loss and accuracy.
    """
    hyper = (hyper or Hyperparameters())._replace(**kwargs)
    params = init_model_parameters(model, hyper.seed) if params is None else params.copy()

    if hyper.optimizer == "adam":
        optimizer: Adam | Sgd = Adam(
            params, hyper.learning_rate, hyper.beta_1, hyper.beta_2, hyper.adam_epsilon
        )
    elif hyper.optimizer == "sgd":
        optimizer = Sgd(hyper.learning_rate)
    else:
        raise ValueError(f"Optimizer must be 'adam' or 'sgd', got '{hyper.optimizer}'.")

    for group in train_data:
        if len(group) and (group.labels.min() < 0 or group.labels.max() >= model.classes):
            raise ValueError(f"Labels must be in 0..{model.classes - 1}.")

    rng = np.random.default_rng(hyper.seed)
    index = [(group_index, i) for group_index, group in enumerate(train_data) for i in range(len(group))]
    trace = MetricsTrace()

    for epoch in range(1, hyper.epochs + 1):
        order = rng.permutation(len(index))

        for start in range(0, len(index), hyper.batch):
            batch = [index[position] for position in order[start : start + hyper.batch]]
            grads = Parameters({name: np.zeros_like(value) for name, value in params.items()})
            batch_loss = 0.0

            for group_index in sorted({group_index for group_index, _ in batch}):
                selected = [i for g, i in batch if g == group_index]
                part = train_data[group_index].take(selected)
                loss, part_grads, _ = loss_and_gradients(part.plan, params, part.inputs, part.labels)
                weight = len(selected) / len(batch)
                batch_loss += loss * weight
                for name, grad in part_grads.items():
                    grads[name] += weight * grad

            if not np.isfinite(batch_loss):
                raise NonFiniteLoss(
                    f"Loss is {batch_loss} in epoch {epoch}. Try lower learning rate or check input signals."
                )

            optimizer.step(params, grads)

        trace.add(epoch, "train", *evaluate(params, train_data))
        if val_data:
            trace.add(epoch, "val", *evaluate(params, val_data))

    last = trace.last("val") or trace.last("train")
    if last:
        mylogging.info(
            f"{model.name} trained for {hyper.epochs} epochs, {last['split']} accuracy {last['accuracy']:.3f}."
        )

    return params, trace


def grad_check(
    plan: NetworkPlan,
    params: Mapping[str, np.ndarray],
    inputs: Mapping[int, np.ndarray],
    labels: Sequence[int],
    epsilon: float = 1e-6,
    fraction: float = 0.05,
    seed: int = 0,
    absolute_tolerance: float = 1e-8,
) -> float:
    """Compare analytic gradient with central finite differences.

    Error of one parameter entry is |analytic - numeric| / max(|analytic|, |numeric|, 1e-12). Entries where
    |analytic - numeric| <= `absolute_tolerance` count as exact match, finite differences cannot resolve
    smaller differences.

    Args:
        plan (NetworkPlan): Model bound to complex.
        params (Mapping[str, np.ndarray]): Weights. Not changed.
        inputs (Mapping[int, np.ndarray]): Signals by dimension.
        labels (Sequence[int]): Classes of samples.
        epsilon (float, optional): Step of finite difference, from 1e-7 to 1e-4. Defaults to 1e-6.
        fraction (float, optional): Checked fraction of entries of every weight, at least one entry.
            Defaults to 0.05.
        seed (int, optional): Seed of entry selection. Defaults to 0.
        absolute_tolerance (float, optional): Differences treated as rounding noise. Defaults to 1e-8.

    Returns:
        float: Max relative error.
    """
    if not 1e-7 <= epsilon <= 1e-4:
        raise ValueError("Epsilon must be in [1e-7, 1e-4].")

    labels = np.asarray(labels, dtype=np.int64)
    checked = Parameters({name: np.array(value, dtype=np.float64) for name, value in params.items()})
    _, grads, _ = loss_and_gradients(plan, checked, inputs, labels)

    def loss_value() -> float:
        logits, _ = forward(plan, checked, inputs)
        return cross_entropy(logits, labels)[0]

    rng = np.random.default_rng(seed)
    max_error = 0.0

    for name in sorted(checked):
        values = checked[name]
        count = max(1, int(np.ceil(fraction * values.size)))
        for position in rng.choice(values.size, size=min(count, values.size), replace=False):
            original = values.flat[position]
            values.flat[position] = original + epsilon
            loss_plus = loss_value()
            values.flat[position] = original - epsilon
            loss_minus = loss_value()
            values.flat[position] = original

            numeric = (loss_plus - loss_minus) / (2 * epsilon)
            analytic = grads[name].flat[position]
            difference = abs(analytic - numeric)
            if difference <= absolute_tolerance:
                continue
            error = difference / max(abs(analytic), abs(numeric), 1e-12)
            max_error = max(max_error, error)

    return float(max_error)
