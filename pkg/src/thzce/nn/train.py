"""Mini-batch training loop with validation-based early stopping."""

from __future__ import annotations

import numpy as np

from ..errors import NumericalError, TrainingDivergedError
from ..rng import STREAM_TRAIN_SHUFFLE, derive
from ..config import TrainConfig
from .adam import adam_step, init_adam
from .network import backward, forward, mse_and_grad
from .params import Params, copy_params, params_finite
from .specs import ModelSpec

_DIVERGENCE_FACTOR = 1e3


def evaluate_mse(params: Params, spec: ModelSpec, x: np.ndarray, y: np.ndarray) -> float:
    pred, _ = forward(params, spec, x)
    return mse_and_grad(pred, y)[0]


def train(
    spec: ModelSpec,
    params: Params,
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_val: np.ndarray,
    y_val: np.ndarray,
    cfg: TrainConfig,
) -> tuple[Params, dict]:
    """Train ``params`` on (x_train, y_train) with Adam and MSE loss.

    Shuffled mini-batches, one validation pass per epoch; stops once the
    validation MSE has failed to improve on the best seen for more than
    ``cfg.patience`` consecutive epochs and restores the best parameters
    (the untrained starting point counts as the epoch-0 candidate).  Aborts
    with ``TrainingDivergedError`` if the train loss exceeds 1000x its
    starting value.

    Returns the best parameters and a history dict with per-epoch
    ``train_loss``/``val_loss`` plus the pre-training baselines.
    """
    if len(x_train) == 0 or len(x_val) == 0:
        raise ValueError("training and validation splits must be non-empty")
    rng = derive(cfg.seed, STREAM_TRAIN_SHUFFLE)
    state = init_adam(params)

    initial_train = evaluate_mse(params, spec, x_train, y_train)
    initial_val = evaluate_mse(params, spec, x_val, y_val)
    best_val = initial_val
    best_params = copy_params(params)
    best_epoch = 0
    bad_epochs = 0
    history: dict = {
        "initial_train_loss": initial_train,
        "initial_val_loss": initial_val,
        "train_loss": [],
        "val_loss": [],
    }

    n = len(x_train)
    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(n)
        sq_err_sum = 0.0
        value_count = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start: start + cfg.batch_size]
            pred, cache = forward(params, spec, x_train[idx])
            loss, dpred = mse_and_grad(pred, y_train[idx])
            grads = backward(params, spec, cache, dpred)
            params, state = adam_step(params, grads, state, cfg)
            if not params_finite(params):
                raise NumericalError(f"non-finite parameter after update in epoch {epoch}")
            sq_err_sum += loss * pred.size
            value_count += pred.size
        train_loss = sq_err_sum / value_count
        val_loss = evaluate_mse(params, spec, x_val, y_val)
        history["train_loss"].append(train_loss)
        history["val_loss"].append(val_loss)

        if train_loss > _DIVERGENCE_FACTOR * max(initial_train, np.finfo(float).tiny):
            raise TrainingDivergedError(
                f"train loss {train_loss:.3e} exceeded 1000x its initial value "
                f"{initial_train:.3e} in epoch {epoch}"
            )

        if val_loss < best_val:
            best_val = val_loss
            best_params = copy_params(params)
            best_epoch = epoch
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs > cfg.patience:
                break

    history["best_epoch"] = best_epoch
    history["best_val_loss"] = best_val
    return best_params, history
