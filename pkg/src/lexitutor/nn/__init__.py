"""Dense numeric substrate: layers, loss, optimizer, and gradient checking."""

from .backend import active_backend, compiled_available
from .functional import cross_entropy_batch, cross_entropy_loss, softmax, softmax_ce_grad
from .gradcheck import GradCheckReport, grad_check
from .layers import (
    BiLstm,
    Dense,
    DotAttention,
    Dropout,
    Embedding,
    Lstm,
    dropout_forward,
    lstm_step,
)
from .optim import Adam
from .params import Param, glorot_uniform, make_rng, spawn_rngs

__all__ = [
    "active_backend",
    "compiled_available",
    "softmax",
    "cross_entropy_loss",
    "cross_entropy_batch",
    "softmax_ce_grad",
    "grad_check",
    "GradCheckReport",
    "Embedding",
    "Lstm",
    "BiLstm",
    "Dropout",
    "Dense",
    "DotAttention",
    "dropout_forward",
    "lstm_step",
    "Adam",
    "Param",
    "glorot_uniform",
    "make_rng",
    "spawn_rngs",
]
