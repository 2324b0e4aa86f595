"""Adam optimizer over named parameter dicts."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..config import TrainConfig
from .params import Params, zeros_like_params

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdamState:
    m: Params
    v: Params
    t: int = 0


def init_adam(params: Params) -> AdamState:
    return AdamState(m=zeros_like_params(params), v=zeros_like_params(params), t=0)


def adam_step(
    params: Params, grads: Params, state: AdamState, cfg: TrainConfig
) -> tuple[Params, AdamState]:
    """One bias-corrected Adam update; returns fresh params and state.

    A non-finite gradient rejects the whole step: the parameters and moments
    are returned unchanged and the event is logged.
    """
    if any(not np.all(np.isfinite(g)) for g in grads.values()):
        logger.warning("adam: non-finite gradient at step %d, skipping update", state.t + 1)
        return params, state

    t = state.t + 1
    bc1 = 1.0 - cfg.beta1**t
    bc2 = 1.0 - cfg.beta2**t
    new_params: Params = {}
    new_m: Params = {}
    new_v: Params = {}
    for name, p in params.items():
        g = grads[name]
        m = cfg.beta1 * state.m[name] + (1.0 - cfg.beta1) * g
        v = cfg.beta2 * state.v[name] + (1.0 - cfg.beta2) * g**2
        m_hat = m / bc1
        v_hat = v / bc2
        new_params[name] = p - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
        new_m[name] = m
        new_v[name] = v
    return new_params, AdamState(m=new_m, v=new_v, t=t)
