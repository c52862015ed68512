"""Layer objects with explicit forward/backward passes.

Each layer caches what its backward pass needs and accumulates parameter
gradients into its Param objects. Inputs may be single samples or batches;
recurrent layers always take [B, T, D].
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidConfig, ShapeError, StateError
from . import backend, kernels_numpy
from .params import Param, glorot_uniform


def lstm_step(x, h_prev, c_prev, Wx, Wh, b):
    """Single cell update on unbatched [D]/[H] vectors or [B,*] batches."""
    if Wx.shape[0] != 4 * Wh.shape[1] or Wh.shape[0] != Wh.shape[1] * 4:
        raise ShapeError(f"gate matrices disagree: Wx {Wx.shape}, Wh {Wh.shape}")
    if x.shape[-1] != Wx.shape[1] or h_prev.shape[-1] != Wh.shape[1]:
        raise ShapeError(
            f"input {x.shape} / state {h_prev.shape} do not match Wx {Wx.shape}, Wh {Wh.shape}"
        )
    return kernels_numpy.lstm_step(x, h_prev, c_prev, Wx, Wh, b)


class Embedding:
    """Word-id lookup table. ids of any shape S map to output of shape S + (dim,)."""

    def __init__(self, vocab_size, dim, rng, dtype=np.float32, name="embedding"):
        self.vocab_size = vocab_size
        self.E = Param(glorot_uniform(rng, (vocab_size, dim), dtype), f"{name}.E")
        self._ids = None

    def forward(self, ids):
        ids = np.asarray(ids)
        if ids.size and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise IndexError(f"word id out of range for vocabulary of {self.vocab_size}")
        self._ids = ids
        return self.E.value[ids]

    def backward(self, dout):
        if self._ids is None:
            raise StateError("embedding backward called before forward")
        np.add.at(self.E.grad, self._ids, dout)
        return None

    @property
    def params(self):
        return [self.E]


class Lstm:
    """Recurrent cell over [B, T, D], via the selected kernel backend.

    Gate order in the stacked parameter arrays is input, forget,
    cell-candidate, output.
    """

    def __init__(self, input_dim, hidden, rng, dtype=np.float32,
                 return_sequences=False, name="lstm"):
        self.input_dim = input_dim
        self.hidden = hidden
        self.return_sequences = return_sequences
        self.Wx = Param(glorot_uniform(rng, (4 * hidden, input_dim), dtype), f"{name}.W_x")
        self.Wh = Param(glorot_uniform(rng, (4 * hidden, hidden), dtype), f"{name}.W_h")
        b = np.zeros(4 * hidden, dtype=dtype)
        b[hidden : 2 * hidden] = 1.0  # forget-gate bias starts open
        self.b = Param(b, f"{name}.b")
        self._cache = None
        self._state_grads = None  # (dh0, dc0) after backward

    def forward(self, x, h0=None, c0=None):
        if x.ndim != 3 or x.shape[2] != self.input_dim:
            raise ShapeError(f"expected [B, T, {self.input_dim}], got {x.shape}")
        kern = backend.kernels_for(x.dtype)
        H_seq, cache = kern.lstm_forward(x, self.Wx.value, self.Wh.value, self.b.value, h0, c0)
        self._cache = cache
        return H_seq if self.return_sequences else H_seq[:, -1]

    def backward(self, dout, dh_last=None, dc_last=None):
        """dout: [B,T,H] when returning sequences, else [B,H]. Returns dx [B,T,D]."""
        if self._cache is None:
            raise StateError("lstm backward called before forward")
        X = self._cache[0]
        B, T, _ = X.shape
        if self.return_sequences:
            dH_seq = dout
        else:
            dH_seq = np.zeros((B, T, self.hidden), dtype=X.dtype)
            dH_seq[:, -1] = dout
        kern = backend.kernels_for(X.dtype)
        dX, dWx, dWh, db, dh0, dc0 = kern.lstm_backward(
            self._cache, self.Wx.value, self.Wh.value, dH_seq, dh_last, dc_last
        )
        self.Wx.grad += dWx
        self.Wh.grad += dWh
        self.b.grad += db
        self._state_grads = (dh0, dc0)
        return dX

    @property
    def params(self):
        return [self.Wx, self.Wh, self.b]


class BiLstm:
    """Two cells over opposite time directions, outputs concatenated to 2H."""

    def __init__(self, input_dim, hidden, rng, dtype=np.float32,
                 return_sequences=False, name="lstm"):
        self.hidden = hidden
        self.return_sequences = return_sequences
        self.fwd = Lstm(input_dim, hidden, rng, dtype, return_sequences=True,
                        name=f"{name}_fwd")
        self.bwd = Lstm(input_dim, hidden, rng, dtype, return_sequences=True,
                        name=f"{name}_bwd")

    def forward(self, x):
        out_f = self.fwd.forward(x)
        out_b = self.bwd.forward(np.ascontiguousarray(x[:, ::-1]))
        if self.return_sequences:
            return np.concatenate([out_f, out_b[:, ::-1]], axis=-1)
        return np.concatenate([out_f[:, -1], out_b[:, -1]], axis=-1)

    def backward(self, dout):
        H = self.hidden
        if self.return_sequences:
            d_f = np.ascontiguousarray(dout[..., :H])
            d_b = np.ascontiguousarray(dout[:, ::-1, H:])
        else:
            B, T = self.fwd._cache[0].shape[:2]
            d_f = np.zeros((B, T, H), dtype=dout.dtype)
            d_f[:, -1] = dout[..., :H]
            d_b = np.zeros((B, T, H), dtype=dout.dtype)
            d_b[:, -1] = dout[..., H:]
        dx_f = self.fwd.backward(d_f)
        dx_b = self.bwd.backward(d_b)
        return dx_f + dx_b[:, ::-1]

    @property
    def params(self):
        return self.fwd.params + self.bwd.params


def dropout_forward(x, rate, train, rng):
    """Inverted dropout: identity at inference, mask-and-rescale in training.

    Returns (output, mask) where mask already carries the 1/(1-rate) scale.
    """
    if not 0 <= rate < 1:
        raise InvalidConfig(f"dropout rate must be in [0, 1), got {rate}")
    if not train or rate == 0:
        return x, None
    keep = (rng.random(x.shape) >= rate).astype(x.dtype)
    mask = keep / x.dtype.type(1 - rate)
    return x * mask, mask


class Dropout:
    def __init__(self, rate):
        if not 0 <= rate < 1:
            raise InvalidConfig(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self._mask = None

    def forward(self, x, train=False, rng=None):
        out, self._mask = dropout_forward(x, self.rate, train, rng)
        return out

    def backward(self, dout):
        return dout if self._mask is None else dout * self._mask

    @property
    def params(self):
        return []


class Dense:
    """Affine map with optional ReLU. x: [B, D] (or [D]) -> [B, U]."""

    def __init__(self, input_dim, units, rng, dtype=np.float32,
                 activation=None, name="dense"):
        if activation not in (None, "relu"):
            raise InvalidConfig(f"unsupported activation {activation!r}")
        self.activation = activation
        self.W = Param(glorot_uniform(rng, (units, input_dim), dtype), f"{name}.W")
        self.b = Param(np.zeros(units, dtype=dtype), f"{name}.b")
        self._cache = None

    def forward(self, x):
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.shape[1] != self.W.shape[1]:
            raise ShapeError(f"expected input dim {self.W.shape[1]}, got {x.shape[1]}")
        z = x @ self.W.value.T + self.b.value
        out = np.maximum(z, 0) if self.activation == "relu" else z
        self._cache = (x, out, squeeze)
        return out[0] if squeeze else out

    def backward(self, dout):
        if self._cache is None:
            raise StateError("dense backward called before forward")
        x, out, squeeze = self._cache
        if squeeze:
            dout = dout[None, :]
        if self.activation == "relu":
            dout = dout * (out > 0)
        self.W.grad += dout.T @ x
        self.b.grad += dout.sum(axis=0)
        dx = dout @ self.W.value
        return dx[0] if squeeze else dx

    @property
    def params(self):
        return [self.W, self.b]


class DotAttention:
    """Parameter-free dot-product attention pooling keys/values with a query.

    query: [B, H]; keys and values: [B, T, H]. Callers may pass the same
    array for keys and values; gradients then accumulate additively.
    """

    def __init__(self):
        self._cache = None

    def forward(self, query, keys, values):
        if query.ndim != 2 or keys.ndim != 3 or keys.shape[-1] != query.shape[-1]:
            raise ShapeError(f"query {query.shape} incompatible with keys {keys.shape}")
        if values.shape != keys.shape:
            raise ShapeError(f"values {values.shape} must match keys {keys.shape}")
        scores = np.einsum("bth,bh->bt", keys, query)
        from .functional import softmax

        weights = softmax(scores)
        out = np.einsum("bt,bth->bh", weights, values)
        self._cache = (query, keys, values, weights)
        return out

    def backward(self, dout):
        """Returns (dquery, dkeys, dvalues)."""
        if self._cache is None:
            raise StateError("attention backward called before forward")
        query, keys, values, weights = self._cache
        dvalues = np.einsum("bt,bh->bth", weights, dout)
        dweights = np.einsum("bh,bth->bt", dout, values)
        # softmax jacobian: ds = w * (dw - sum(w * dw))
        dscores = weights * (dweights - (weights * dweights).sum(axis=1, keepdims=True))
        dquery = np.einsum("bt,bth->bh", dscores, keys)
        dkeys = np.einsum("bt,bh->bth", dscores, query)
        return dquery, dkeys, dvalues

    @property
    def params(self):
        return []
