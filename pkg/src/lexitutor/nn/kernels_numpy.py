"""Reference implementation of the recurrent-cell kernels in plain numpy.

These functions define the numerical contract; the compiled twin in
``_lstm_kernel.pyx`` must agree with them to floating-point tolerance.
Gate order within every 4H-wide array is input, forget, cell-candidate,
output, and that order is binding for checkpoint layout.

Works for float32 and float64 alike (the compiled kernel is float32-only).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit


def lstm_step(x, h_prev, c_prev, Wx, Wh, b):
    """One cell update. x: [B,D], h_prev/c_prev: [B,H] -> (h, c), both [B,H]."""
    H = h_prev.shape[-1]
    z = x @ Wx.T + h_prev @ Wh.T + b
    i = expit(z[..., 0 * H : 1 * H])
    f = expit(z[..., 1 * H : 2 * H])
    g = np.tanh(z[..., 2 * H : 3 * H])
    o = expit(z[..., 3 * H : 4 * H])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def lstm_forward(X, Wx, Wh, b, h0=None, c0=None):
    """Run the cell over a [B, T, D] batch.

    Returns (H_seq [B,T,H], cache). The cache holds everything the backward
    pass needs: inputs, post-activation gates, cell states, tanh(c), and the
    initial state.
    """
    B, T, D = X.shape
    H = Wh.shape[1]
    dtype = X.dtype
    if h0 is None:
        h0 = np.zeros((B, H), dtype=dtype)
    if c0 is None:
        c0 = np.zeros((B, H), dtype=dtype)

    gates = np.empty((B, T, 4 * H), dtype=dtype)
    C = np.empty((B, T, H), dtype=dtype)
    tanh_c = np.empty((B, T, H), dtype=dtype)
    H_seq = np.empty((B, T, H), dtype=dtype)

    # the input projection has no recurrence: one big matmul up front
    X_proj = X.reshape(B * T, D) @ Wx.T
    X_proj = X_proj.reshape(B, T, 4 * H)

    h, c = h0, c0
    for t in range(T):
        z = X_proj[:, t] + h @ Wh.T + b
        i = expit(z[:, 0 * H : 1 * H])
        f = expit(z[:, 1 * H : 2 * H])
        g = np.tanh(z[:, 2 * H : 3 * H])
        o = expit(z[:, 3 * H : 4 * H])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates[:, t, 0 * H : 1 * H] = i
        gates[:, t, 1 * H : 2 * H] = f
        gates[:, t, 2 * H : 3 * H] = g
        gates[:, t, 3 * H : 4 * H] = o
        C[:, t] = c
        tanh_c[:, t] = tc
        H_seq[:, t] = h

    cache = (X, gates, C, tanh_c, h0, c0)
    return H_seq, cache


def lstm_backward(cache, Wx, Wh, dH_seq, dh_last=None, dc_last=None):
    """Backpropagation through time over a cached forward run.

    dH_seq carries the upstream gradient for every step output ([B,T,H]);
    dh_last / dc_last, when given, are added at the final step (gradients
    reaching the cell through its final state rather than its outputs).

    Returns (dX, dWx, dWh, db, dh0, dc0).
    """
    X, gates, C, tanh_c, h0, c0 = cache
    B, T, D = X.shape
    H = C.shape[-1]
    dtype = X.dtype

    dZ = np.empty((B, T, 4 * H), dtype=dtype)
    dh_next = np.zeros((B, H), dtype=dtype) if dh_last is None else dh_last.astype(dtype, copy=True)
    dc_next = np.zeros((B, H), dtype=dtype) if dc_last is None else dc_last.astype(dtype, copy=True)

    for t in range(T - 1, -1, -1):
        i = gates[:, t, 0 * H : 1 * H]
        f = gates[:, t, 1 * H : 2 * H]
        g = gates[:, t, 2 * H : 3 * H]
        o = gates[:, t, 3 * H : 4 * H]
        tc = tanh_c[:, t]
        c_prev = C[:, t - 1] if t > 0 else c0

        dh = dH_seq[:, t] + dh_next
        do = dh * tc
        dc = dh * o * (1 - tc * tc) + dc_next
        di = dc * g
        df = dc * c_prev
        dg = dc * i
        dc_next = dc * f

        dZ[:, t, 0 * H : 1 * H] = di * i * (1 - i)
        dZ[:, t, 1 * H : 2 * H] = df * f * (1 - f)
        dZ[:, t, 2 * H : 3 * H] = dg * (1 - g * g)
        dZ[:, t, 3 * H : 4 * H] = do * o * (1 - o)
        dh_next = dZ[:, t] @ Wh

    # h_{t-1} sequence: h0 followed by the first T-1 outputs (h = o * tanh(c))
    H_prev = np.empty((B, T, H), dtype=dtype)
    H_prev[:, 0] = h0
    if T > 1:
        H_prev[:, 1:] = gates[:, :-1, 3 * H : 4 * H] * tanh_c[:, :-1]

    dZ2 = dZ.reshape(B * T, 4 * H)
    dX = (dZ2 @ Wx).reshape(B, T, D)
    dWx = dZ2.T @ X.reshape(B * T, D)
    dWh = dZ2.T @ H_prev.reshape(B * T, H)
    db = dZ.sum(axis=(0, 1))
    return dX, dWx, dWh, db, dh_next, dc_next
