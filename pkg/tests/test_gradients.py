"""Finite-difference verification of every backward pass.

All checks run in float64 through the numpy kernel path so the comparison is
limited by the math, not by float32 rounding; a separate parity suite ties
the compiled float32 kernel to the same numbers.
"""

import numpy as np
import pytest

from lexitutor.model import ModelConfig, build_model
from lexitutor.nn import (
    BiLstm,
    Dense,
    DotAttention,
    Dropout,
    Embedding,
    Lstm,
    grad_check,
    make_rng,
    softmax,
    softmax_ce_grad,
)
from lexitutor.nn.params import Param

TOL = 1e-4
EPS = 1e-5


def weighted_sum_loss(out, weights):
    return float((out * weights).sum())


class TestGradCheckItself:
    def test_linear_function_exact(self):
        p = Param(np.array([1.0, 2.0, 3.0]), "p")
        coeff = np.array([2.0, -1.0, 0.5])

        def loss():
            p.zero_grad()
            p.grad += coeff
            return float(coeff @ p.value)

        report = grad_check(loss, [p], eps=1e-6, tol=1e-9)
        assert report.passed
        assert report.max_rel_error < 1e-9

    def test_corrupted_backward_fails(self):
        p = Param(np.array([1.0, 2.0]), "p")

        def loss():
            p.zero_grad()
            p.grad += np.array([1.0, 1.0])  # wrong: true gradient is [2, 2]
            return float(2.0 * p.value.sum())

        assert not grad_check(loss, [p], eps=1e-6, tol=TOL).passed


class TestLayerGradients:
    def test_dense(self):
        rng = make_rng(0)
        for activation in (None, "relu"):
            layer = Dense(4, 3, rng, dtype=np.float64, activation=activation)
            x = Param(make_rng(1).normal(size=(2, 4)), "x")
            w = make_rng(2).normal(size=(2, 3))

            def loss():
                for p in layer.params:
                    p.zero_grad()
                out = layer.forward(x.value)
                x.grad[...] = layer.backward(w)
                return weighted_sum_loss(out, w)

            report = grad_check(loss, layer.params + [x], eps=EPS, tol=TOL)
            assert report.passed, (activation, report.per_param)

    def test_embedding(self):
        layer = Embedding(6, 3, make_rng(0), dtype=np.float64)
        ids = np.array([[2, 2, 4, 0]])
        w = make_rng(1).normal(size=(1, 4, 3))

        def loss():
            layer.E.zero_grad()
            out = layer.forward(ids)
            layer.backward(w)
            return weighted_sum_loss(out, w)

        assert grad_check(loss, [layer.E], eps=EPS, tol=TOL).passed

    def test_lstm_sequences(self):
        # 2-step case, D=3, H=4, checked at the documented epsilon
        layer = Lstm(3, 4, make_rng(0), dtype=np.float64, return_sequences=True)
        x = Param(make_rng(1).normal(size=(2, 2, 3)), "x")
        w = make_rng(2).normal(size=(2, 2, 4))

        def loss():
            for p in layer.params:
                p.zero_grad()
            out = layer.forward(x.value)
            x.grad[...] = layer.backward(w)
            return weighted_sum_loss(out, w)

        report = grad_check(loss, layer.params + [x], eps=1e-3, tol=TOL)
        assert report.passed, report.per_param

    def test_lstm_final_only(self):
        layer = Lstm(3, 4, make_rng(3), dtype=np.float64, return_sequences=False)
        x = Param(make_rng(4).normal(size=(2, 3, 3)), "x")
        w = make_rng(5).normal(size=(2, 4))

        def loss():
            for p in layer.params:
                p.zero_grad()
            out = layer.forward(x.value)
            x.grad[...] = layer.backward(w)
            return weighted_sum_loss(out, w)

        assert grad_check(loss, layer.params + [x], eps=EPS, tol=TOL).passed

    def test_lstm_duplicated_inputs_accumulate(self):
        # feeding the same vector at both timesteps sums their gradients
        layer = Lstm(3, 4, make_rng(6), dtype=np.float64, return_sequences=True)
        base = Param(make_rng(7).normal(size=(1, 3)), "base")
        w = make_rng(8).normal(size=(1, 2, 4))

        def loss():
            for p in layer.params:
                p.zero_grad()
            x = np.stack([base.value, base.value], axis=1)
            out = layer.forward(x)
            dx = layer.backward(w)
            base.grad[...] = dx[:, 0] + dx[:, 1]
            return weighted_sum_loss(out, w)

        assert grad_check(loss, [base], eps=EPS, tol=TOL).passed

    def test_bidirectional(self):
        layer = BiLstm(3, 4, make_rng(9), dtype=np.float64, return_sequences=True)
        x = Param(make_rng(10).normal(size=(2, 3, 3)), "x")
        w = make_rng(11).normal(size=(2, 3, 8))

        def loss():
            for p in layer.params:
                p.zero_grad()
            out = layer.forward(x.value)
            x.grad[...] = layer.backward(w)
            return weighted_sum_loss(out, w)

        assert grad_check(loss, layer.params + [x], eps=EPS, tol=TOL).passed

    def test_dropout_fixed_mask(self):
        x = Param(make_rng(12).normal(size=(3, 5)), "x")
        mask = (make_rng(13).random((3, 5)) >= 0.4) / 0.6
        w = make_rng(14).normal(size=(3, 5))

        def loss():
            x.zero_grad()
            out = x.value * mask
            x.grad[...] = w * mask
            return weighted_sum_loss(out, w)

        assert grad_check(loss, [x], eps=EPS, tol=TOL).passed

    def test_attention(self):
        att = DotAttention()
        q = Param(make_rng(15).normal(size=(2, 4)), "q")
        kv = Param(make_rng(16).normal(size=(2, 3, 4)), "kv")
        w = make_rng(17).normal(size=(2, 4))

        def loss():
            q.zero_grad()
            kv.zero_grad()
            out = att.forward(q.value, kv.value, kv.value)
            dq, dk, dv = att.backward(w)
            q.grad[...] = dq
            kv.grad[...] = dk + dv
            return weighted_sum_loss(out, w)

        assert grad_check(loss, [q, kv], eps=EPS, tol=TOL).passed

    def test_softmax_cross_entropy_logit_gradient(self):
        z = Param(make_rng(18).normal(size=(2, 5)), "z")
        targets = np.array([1, 3])

        def loss():
            z.zero_grad()
            probs = softmax(z.value)
            z.grad[...] = softmax_ce_grad(probs, targets)
            picked = probs[np.arange(2), targets]
            return float(-np.log(picked).mean())

        assert grad_check(loss, [z], eps=EPS, tol=TOL).passed


def model_loss_fn(model, ids, targets, input_param=None):
    """Closure computing mean cross-entropy and backpropagating it."""

    def loss():
        model.zero_grads()
        probs = model.forward(ids, train=False)
        model.backward(softmax_ce_grad(probs, targets))
        picked = probs[np.arange(len(targets)), targets]
        return float(-np.log(picked).mean())

    return loss


PRESET_CASES = [
    ("simple", False, False),
    ("stacked", False, False),
    ("stacked", True, False),
    ("encdec", False, False),
    ("encdec", False, True),
    ("encdec", True, True),
]


class TestFullModelGradients:
    @pytest.mark.parametrize("preset,bidi,attention", PRESET_CASES)
    def test_preset_end_to_end(self, preset, bidi, attention):
        config = ModelConfig(
            preset=preset,
            vocab_size=7,
            embed_dim=3,
            hidden=4,
            window=3,
            dropout_rate=0.0,  # deterministic loss for differencing
            bidirectional_first_layer=bidi,
            use_attention=attention,
        )
        model = build_model(config, make_rng(20), dtype=np.float64)
        ids = np.array([[1, 2, 3], [4, 5, 6]])
        targets = np.array([2, 5])
        report = grad_check(model_loss_fn(model, ids, targets), model.params(),
                            eps=EPS, tol=TOL)
        assert report.passed, (preset, bidi, attention, report.per_param)
