"""Whole-network forward/backward passes for the three architectures.

bilstm-gru: a bidirectional LSTM (separate forward/backward parameter sets,
per-timestep concatenation) feeds a GRU; a single shared output neuron maps
each GRU state to one output value.  lstm: same with a unidirectional LSTM
and no GRU.  dnn: tanh hidden layers on the flat feature vector, linear out.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericalError
from .cells import gru_backward, gru_forward, lstm_backward, lstm_forward
from .params import Params, zeros_like_params
from .specs import ModelSpec


def _check_finite(arr: np.ndarray, layer: str) -> None:
    if np.all(np.isfinite(arr)):
        return
    if arr.ndim == 3:
        bad_steps = np.where(~np.isfinite(arr).all(axis=(0, 2)))[0]
        raise NumericalError(
            f"non-finite activation in {layer} at step {int(bad_steps[0])}"
        )
    raise NumericalError(f"non-finite activation in {layer}")


def forward(params: Params, spec: ModelSpec, x: np.ndarray) -> tuple[np.ndarray, dict]:
    """Predictions plus the cache needed by :func:`backward`.

    ``x`` is one feature vector of length ``spec.seq_len`` or a batch of them;
    the prediction has length ``spec.output_dim`` per sample.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    xb = np.atleast_2d(x)
    if xb.ndim != 2 or xb.shape[1] != spec.seq_len:
        raise ValueError(f"input shape {x.shape} does not match seq_len {spec.seq_len}")
    _check_finite(xb, "input")

    cache: dict = {"single": single}
    if spec.arch == "dnn":
        act = xb
        activations = [act]
        for i in range(1, len(spec.dnn_hidden) + 1):
            z = act @ params[f"dense{i}.w"].T + params[f"dense{i}.b"]
            act = np.tanh(z)
            _check_finite(act, f"dense{i}")
            activations.append(act)
        pred = act @ params["out.w"].T + params["out.b"]
        _check_finite(pred, "out")
        cache["activations"] = activations
    else:
        xs = xb[:, :, np.newaxis]
        if spec.arch == "bilstm-gru":
            h_fw, cache_fw = lstm_forward(
                xs, params["bilstm_fw.wx"], params["bilstm_fw.wh"], params["bilstm_fw.b"]
            )
            xs_rev = np.ascontiguousarray(xs[:, ::-1])
            h_bw_rev, cache_bw = lstm_forward(
                xs_rev, params["bilstm_bw.wx"], params["bilstm_bw.wh"], params["bilstm_bw.b"]
            )
            seq = np.concatenate([h_fw, h_bw_rev[:, ::-1]], axis=2)
            _check_finite(seq, "bilstm")
            states, cache_gru = gru_forward(
                seq, params["gru.wx"], params["gru.wh"], params["gru.b"]
            )
            _check_finite(states, "gru")
            cache.update(lstm_fw=cache_fw, lstm_bw=cache_bw, gru=cache_gru)
        else:
            states, cache_lstm = lstm_forward(
                xs, params["lstm.wx"], params["lstm.wh"], params["lstm.b"]
            )
            _check_finite(states, "lstm")
            cache.update(lstm=cache_lstm)
        pred = states @ params["head.w"] + params["head.b"][0]
        _check_finite(pred, "head")
        cache["states"] = states

    if single:
        pred = pred[0]
    return pred, cache


def backward(params: Params, spec: ModelSpec, cache: dict, grad_out: np.ndarray) -> Params:
    """Gradients of the loss with respect to every parameter.

    ``grad_out`` is the loss gradient at the network output, shaped like the
    prediction that ``cache`` came from.
    """
    grad_out = np.asarray(grad_out, dtype=np.float64)
    if cache["single"]:
        grad_out = grad_out[np.newaxis, :]
    grads = zeros_like_params(params)

    if spec.arch == "dnn":
        activations = cache["activations"]
        grads["out.w"] = grad_out.T @ activations[-1]
        grads["out.b"] = grad_out.sum(axis=0)
        d_act = grad_out @ params["out.w"]
        for i in range(len(spec.dnn_hidden), 0, -1):
            dz = d_act * (1.0 - activations[i] ** 2)
            grads[f"dense{i}.w"] = dz.T @ activations[i - 1]
            grads[f"dense{i}.b"] = dz.sum(axis=0)
            d_act = dz @ params[f"dense{i}.w"]
        return grads

    states = cache["states"]
    grads["head.w"] = np.einsum("bt,bth->h", grad_out, states)
    grads["head.b"] = np.array([grad_out.sum()])
    d_states = grad_out[:, :, np.newaxis] * params["head.w"]

    if spec.arch == "bilstm-gru":
        d_seq, dwx, dwh, db = gru_backward(
            d_states, cache["gru"], params["gru.wx"], params["gru.wh"]
        )
        grads["gru.wx"], grads["gru.wh"], grads["gru.b"] = dwx, dwh, db
        hidden = spec.hidden_units
        _, dwx, dwh, db = lstm_backward(
            d_seq[:, :, :hidden], cache["lstm_fw"],
            params["bilstm_fw.wx"], params["bilstm_fw.wh"],
        )
        grads["bilstm_fw.wx"], grads["bilstm_fw.wh"], grads["bilstm_fw.b"] = dwx, dwh, db
        d_bw_rev = np.ascontiguousarray(d_seq[:, ::-1, hidden:])
        _, dwx, dwh, db = lstm_backward(
            d_bw_rev, cache["lstm_bw"],
            params["bilstm_bw.wx"], params["bilstm_bw.wh"],
        )
        grads["bilstm_bw.wx"], grads["bilstm_bw.wh"], grads["bilstm_bw.b"] = dwx, dwh, db
    else:
        _, dwx, dwh, db = lstm_backward(
            d_states, cache["lstm"], params["lstm.wx"], params["lstm.wh"]
        )
        grads["lstm.wx"], grads["lstm.wh"], grads["lstm.b"] = dwx, dwh, db
    return grads


def predict(params: Params, spec: ModelSpec, x: np.ndarray) -> np.ndarray:
    return forward(params, spec, x)[0]


def mse_and_grad(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error over every batch element and output dimension."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(f"prediction {pred.shape} and target {target.shape} must match")
    diff = pred - target
    loss = float(np.mean(diff**2))
    return loss, 2.0 * diff / diff.size
