"""Parameter initialization and tree utilities.

Parameters live in an ordered name->array dict so the optimizer, the
checkpoint format and the finite-difference tests can all walk them the same
way.  Initialization is Glorot-uniform per matrix; LSTM forget-gate biases
start at one so the cell state is not erased before learning begins.
"""

from __future__ import annotations

import numpy as np

from .specs import ModelSpec

Params = dict[str, np.ndarray]


def _glorot(rng: np.random.Generator, shape: tuple[int, int], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _lstm_block(rng: np.random.Generator, d_in: int, hidden: int) -> dict[str, np.ndarray]:
    b = np.zeros(4 * hidden)
    b[hidden: 2 * hidden] = 1.0  # forget gate
    return {
        "wx": _glorot(rng, (4 * hidden, d_in), d_in, hidden),
        "wh": _glorot(rng, (4 * hidden, hidden), hidden, hidden),
        "b": b,
    }


def _gru_block(rng: np.random.Generator, d_in: int, hidden: int) -> dict[str, np.ndarray]:
    return {
        "wx": _glorot(rng, (3 * hidden, d_in), d_in, hidden),
        "wh": _glorot(rng, (3 * hidden, hidden), hidden, hidden),
        "b": np.zeros(3 * hidden),
    }


def init_params(spec: ModelSpec, rng: np.random.Generator) -> Params:
    """Fresh parameters for ``spec`` in a stable iteration order."""
    h = spec.hidden_units
    params: Params = {}
    if spec.arch == "bilstm-gru":
        for name in ("bilstm_fw", "bilstm_bw"):
            block = _lstm_block(rng, spec.features_per_step, h)
            for key, arr in block.items():
                params[f"{name}.{key}"] = arr
        block = _gru_block(rng, 2 * h, h)
        for key, arr in block.items():
            params[f"gru.{key}"] = arr
        params["head.w"] = _glorot(rng, (h,), h, 1)
        params["head.b"] = np.zeros(1)
    elif spec.arch == "lstm":
        block = _lstm_block(rng, spec.features_per_step, h)
        for key, arr in block.items():
            params[f"lstm.{key}"] = arr
        params["head.w"] = _glorot(rng, (h,), h, 1)
        params["head.b"] = np.zeros(1)
    else:  # dnn
        widths = [spec.seq_len, *spec.dnn_hidden]
        for i, (d_in, d_out) in enumerate(zip(widths[:-1], widths[1:]), start=1):
            params[f"dense{i}.w"] = _glorot(rng, (d_out, d_in), d_in, d_out)
            params[f"dense{i}.b"] = np.zeros(d_out)
        params["out.w"] = _glorot(
            rng, (spec.output_dim, widths[-1]), widths[-1], spec.output_dim
        )
        params["out.b"] = np.zeros(spec.output_dim)
    return params


def zeros_like_params(params: Params) -> Params:
    return {name: np.zeros_like(arr) for name, arr in params.items()}


def copy_params(params: Params) -> Params:
    return {name: arr.copy() for name, arr in params.items()}


def params_finite(params: Params) -> bool:
    return all(np.all(np.isfinite(arr)) for arr in params.values())
