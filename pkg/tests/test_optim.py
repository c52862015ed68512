"""Adam update rule behavior."""

import numpy as np
import numpy.testing as npt
import pytest

from lexitutor.errors import InvalidConfig
from lexitutor.nn import Adam
from lexitutor.nn.params import Param


def test_zero_gradient_no_change():
    p = Param(np.array([1.0, -2.0, 3.0]))
    before = p.value.copy()
    Adam([p], lr=0.1).step()
    npt.assert_array_equal(p.value, before)


def test_single_step_is_signed_lr():
    # with constant gradient g, bias correction makes the first step -lr*sign(g)
    lr = 1e-3
    p = Param(np.zeros(4))
    p.grad[...] = np.array([0.5, -0.25, 3.0, -1e-3])
    Adam([p], lr=lr).step()
    npt.assert_allclose(p.value, -lr * np.sign([0.5, -0.25, 3.0, -1e-3]), rtol=1e-3)


def test_parameters_update_independently():
    a = Param(np.zeros(2))
    b = Param(np.zeros(3))
    opt = Adam([a, b], lr=0.01)
    a.grad[...] = 1.0
    opt.step()
    assert (a.value != 0).all()
    npt.assert_array_equal(b.value, 0)


def test_moments_accumulate_across_steps():
    p = Param(np.zeros(1))
    opt = Adam([p], lr=0.1)
    for _ in range(10):
        p.grad[...] = 1.0
        opt.step()
    # constant gradient: every step moves by about -lr
    npt.assert_allclose(p.value, -10 * 0.1, rtol=1e-2)


def test_zero_grad_clears():
    p = Param(np.ones(3))
    p.grad[...] = 5.0
    Adam([p]).zero_grad()
    npt.assert_array_equal(p.grad, 0)


def test_invalid_lr():
    with pytest.raises(InvalidConfig):
        Adam([Param(np.ones(1))], lr=0.0)


def test_float32_stays_float32():
    p = Param(np.zeros(2, dtype=np.float32))
    p.grad[...] = 1.0
    Adam([p]).step()
    assert p.value.dtype == np.float32
