"""Stateless numeric ops: softmax, cross-entropy, and their shared backward."""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import ClampWarning, NumericError

PROB_FLOOR = 1e-12


def softmax(z):
    """Max-subtracted softmax over the last axis. Rows sum to 1."""
    z = np.asarray(z)
    if np.isnan(z).any():
        raise NumericError("softmax received NaN input")
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy_loss(probs, target: int) -> float:
    """Negative log-likelihood of one target under a probability vector.

    Probabilities at or below the floor are clamped (with ClampWarning) so the
    log stays finite.
    """
    p = float(probs[target])
    if p < PROB_FLOOR:
        warnings.warn("probability clamped to 1e-12 in cross-entropy", ClampWarning)
        p = PROB_FLOOR
    return -np.log(p)


def cross_entropy_batch(probs, targets):
    """Mean cross-entropy over a batch. probs: [B, V], targets: [B] ids."""
    picked = probs[np.arange(len(targets)), targets]
    if (picked < PROB_FLOOR).any():
        warnings.warn("probability clamped to 1e-12 in cross-entropy", ClampWarning)
        picked = np.maximum(picked, PROB_FLOOR)
    return float(-np.log(picked).mean())


def softmax_ce_grad(probs, targets):
    """Gradient of mean cross-entropy w.r.t. the softmax LOGITS: (p - onehot)/B."""
    grad = probs.copy()
    grad[np.arange(len(targets)), targets] -= 1
    return grad / len(targets)
