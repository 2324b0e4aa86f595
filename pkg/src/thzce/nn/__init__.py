"""From-scratch sequence regressors: BiLSTM-GRU, LSTM and DNN with exact
analytic backpropagation, Adam, and an early-stopping training loop."""

from .adam import AdamState, adam_step, init_adam
from .checkpoint import load_model, save_model
from .network import backward, forward, mse_and_grad, predict
from .params import init_params
from .specs import ARCHS, ModelSpec
from .train import train

__all__ = [
    "ARCHS",
    "AdamState",
    "ModelSpec",
    "adam_step",
    "backward",
    "forward",
    "init_adam",
    "init_params",
    "load_model",
    "mse_and_grad",
    "predict",
    "save_model",
    "train",
]
