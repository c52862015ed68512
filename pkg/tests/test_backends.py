"""Compiled kernel vs numpy fallback: same numbers, to float32 rounding."""

import numpy as np
import numpy.testing as npt
import pytest

from lexitutor.nn import backend, kernels_numpy, make_rng

compiled = pytest.importorskip(
    "lexitutor.nn._lstm_kernel", reason="compiled kernel not built"
)


def random_case(seed, B=4, T=6, D=5, H=7):
    rng = make_rng(seed)
    X = rng.normal(size=(B, T, D)).astype(np.float32)
    Wx = rng.normal(size=(4 * H, D), scale=0.4).astype(np.float32)
    Wh = rng.normal(size=(4 * H, H), scale=0.4).astype(np.float32)
    b = rng.normal(size=4 * H, scale=0.1).astype(np.float32)
    return X, Wx, Wh, b


@pytest.mark.parametrize("seed", range(5))
def test_forward_parity(seed):
    X, Wx, Wh, b = random_case(seed)
    H_np, _ = kernels_numpy.lstm_forward(X, Wx, Wh, b)
    H_cy, _ = compiled.lstm_forward(X, Wx, Wh, b)
    npt.assert_allclose(H_cy, H_np, rtol=1e-5, atol=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_backward_parity(seed):
    X, Wx, Wh, b = random_case(seed)
    rng = make_rng(seed + 100)
    dH = rng.normal(size=(X.shape[0], X.shape[1], Wh.shape[1])).astype(np.float32)

    _, cache_np = kernels_numpy.lstm_forward(X, Wx, Wh, b)
    _, cache_cy = compiled.lstm_forward(X, Wx, Wh, b)
    outs_np = kernels_numpy.lstm_backward(cache_np, Wx, Wh, dH)
    outs_cy = compiled.lstm_backward(cache_cy, Wx, Wh, dH)
    for name, a, c in zip(("dX", "dWx", "dWh", "db", "dh0", "dc0"), outs_np, outs_cy):
        npt.assert_allclose(c, a, rtol=1e-4, atol=1e-5, err_msg=name)


def test_initial_state_and_final_grads_parity():
    X, Wx, Wh, b = random_case(11, B=2, T=3, D=4, H=5)
    rng = make_rng(12)
    h0 = rng.normal(size=(2, 5)).astype(np.float32)
    c0 = rng.normal(size=(2, 5)).astype(np.float32)
    dH = rng.normal(size=(2, 3, 5)).astype(np.float32)
    dh_last = rng.normal(size=(2, 5)).astype(np.float32)
    dc_last = rng.normal(size=(2, 5)).astype(np.float32)

    H_np, cache_np = kernels_numpy.lstm_forward(X, Wx, Wh, b, h0, c0)
    H_cy, cache_cy = compiled.lstm_forward(X, Wx, Wh, b, h0, c0)
    npt.assert_allclose(H_cy, H_np, rtol=1e-5, atol=1e-6)
    outs_np = kernels_numpy.lstm_backward(cache_np, Wx, Wh, dH, dh_last, dc_last)
    outs_cy = compiled.lstm_backward(cache_cy, Wx, Wh, dH, dh_last, dc_last)
    for a, c in zip(outs_np, outs_cy):
        npt.assert_allclose(c, a, rtol=1e-4, atol=1e-5)


def test_dispatch_by_dtype():
    # float64 always routes to the numpy module, float32 to the active backend
    assert backend.kernels_for(np.dtype(np.float64)) is kernels_numpy
    expected = compiled if backend.active_backend() == "cython" else kernels_numpy
    assert backend.kernels_for(np.dtype(np.float32)) is expected


def test_active_backend_name():
    assert backend.active_backend() in ("cython", "numpy")
