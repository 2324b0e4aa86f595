"""Recurrent cell forward/backward passes, batch-vectorized over samples.

LSTM (gate order i, f, g, o):

    i = sig(Wx_i x + Wh_i h + b_i)      f = sig(Wx_f x + Wh_f h + b_f)
    g = tanh(Wx_g x + Wh_g h + b_g)     o = sig(Wx_o x + Wh_o h + b_o)
    c' = f*c + i*g                      h' = o*tanh(c')

GRU (gate order z, r, candidate; the update gate drives the new content):

    z = sig(Wx_z x + Wh_z h + b_z)      r = sig(Wx_r x + Wh_r h + b_r)
    n = tanh(Wx_n x + Wh_n (r*h) + b_n)
    h' = (1 - z)*h + z*n

Backward passes return exact analytic gradients of whatever scalar loss the
upstream gradient came from; they are validated against central finite
differences in the test suite.
"""

from __future__ import annotations

import numpy as np


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    neg = ~pos
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[neg])
    out[neg] = ex / (1.0 + ex)
    return out


def lstm_forward(
    x: np.ndarray, wx: np.ndarray, wh: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, dict]:
    """Run an LSTM over ``x`` of shape (B, T, D); returns hidden states (B, T, H)."""
    batch, steps, _ = x.shape
    hidden = wh.shape[1]
    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))
    h_seq = np.empty((batch, steps, hidden))
    trace = []
    for t in range(steps):
        xt = x[:, t, :]
        z = xt @ wx.T + h @ wh.T + b
        i = sigmoid(z[:, :hidden])
        f = sigmoid(z[:, hidden: 2 * hidden])
        g = np.tanh(z[:, 2 * hidden: 3 * hidden])
        o = sigmoid(z[:, 3 * hidden:])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        trace.append((xt, h, c, i, f, g, o, tc))
        h = o * tc
        c = c_new
        h_seq[:, t, :] = h
    return h_seq, {"x_shape": x.shape, "trace": trace}


def lstm_backward(
    d_hseq: np.ndarray, cache: dict, wx: np.ndarray, wh: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Gradients (dx, dwx, dwh, db) given upstream gradients on every hidden state."""
    batch, steps, _ = cache["x_shape"]
    hidden = wh.shape[1]
    trace = cache["trace"]
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(4 * hidden)
    dx = np.zeros(cache["x_shape"])
    dh_next = np.zeros((batch, hidden))
    dc_next = np.zeros((batch, hidden))
    for t in reversed(range(steps)):
        xt, h_prev, c_prev, i, f, g, o, tc = trace[t]
        dh = d_hseq[:, t, :] + dh_next
        do = dh * tc
        dc = dc_next + dh * o * (1.0 - tc**2)
        df = dc * c_prev
        di = dc * g
        dg = dc * i
        dc_next = dc * f
        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g**2),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dwx += dz.T @ xt
        dwh += dz.T @ h_prev
        db += dz.sum(axis=0)
        dx[:, t, :] = dz @ wx
        dh_next = dz @ wh
    return dx, dwx, dwh, db


def gru_forward(
    x: np.ndarray, wx: np.ndarray, wh: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, dict]:
    """Run a GRU over ``x`` of shape (B, T, D); returns hidden states (B, T, H)."""
    batch, steps, _ = x.shape
    hidden = wh.shape[1]
    h = np.zeros((batch, hidden))
    h_seq = np.empty((batch, steps, hidden))
    trace = []
    for t in range(steps):
        xt = x[:, t, :]
        ax = xt @ wx.T + b
        z = sigmoid(ax[:, :hidden] + h @ wh[:hidden].T)
        r = sigmoid(ax[:, hidden: 2 * hidden] + h @ wh[hidden: 2 * hidden].T)
        rh = r * h
        n = np.tanh(ax[:, 2 * hidden:] + rh @ wh[2 * hidden:].T)
        trace.append((xt, h, z, r, rh, n))
        h = (1.0 - z) * h + z * n
        h_seq[:, t, :] = h
    return h_seq, {"x_shape": x.shape, "trace": trace}


def gru_backward(
    d_hseq: np.ndarray, cache: dict, wx: np.ndarray, wh: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    batch, steps, _ = cache["x_shape"]
    hidden = wh.shape[1]
    trace = cache["trace"]
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(3 * hidden)
    dx = np.zeros(cache["x_shape"])
    dh_next = np.zeros((batch, hidden))
    for t in reversed(range(steps)):
        xt, h_prev, z, r, rh, n = trace[t]
        dh = d_hseq[:, t, :] + dh_next
        dz_gate = dh * (n - h_prev)
        dn = dh * z
        dh_prev = dh * (1.0 - z)
        dan = dn * (1.0 - n**2)
        drh = dan @ wh[2 * hidden:]
        dr = drh * h_prev
        dh_prev += drh * r
        daz = dz_gate * z * (1.0 - z)
        dar = dr * r * (1.0 - r)
        dh_prev += daz @ wh[:hidden] + dar @ wh[hidden: 2 * hidden]
        da = np.concatenate([daz, dar, dan], axis=1)
        dwx += da.T @ xt
        db += da.sum(axis=0)
        dwh[:hidden] += daz.T @ h_prev
        dwh[hidden: 2 * hidden] += dar.T @ h_prev
        dwh[2 * hidden:] += dan.T @ rh
        dx[:, t, :] = da @ wx
        dh_next = dh_prev
    return dx, dwx, dwh, db
