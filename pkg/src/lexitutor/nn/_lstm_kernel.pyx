# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled float32 twin of kernels_numpy: cell forward and BPTT backward.

Projections run through numpy's own BLAS (keeping the process on a single
thread pool). The gate math and gate-gradient math, which the fallback
spreads over a dozen temporaries, run as restrict-qualified C block
functions that the compiler auto-vectorizes, including the exp/tanh calls.
Gate order (input, forget, cell-candidate, output) matches the numpy
fallback and is binding for checkpoint layout.
"""

import numpy as np

cdef extern from *:
    """
    #include <math.h>

    /* z + recurrent + bias, then sigmoid/tanh per gate block (i,f,g,o) */
    __attribute__((noinline)) static void lx_gate_activate(float* restrict gates, const float* restrict z,
                                 const float* restrict r, const float* restrict b,
                                 long H) {
        long G = 4 * H, k;
        for (k = 0; k < G; k++) gates[k] = z[k] + r[k] + b[k];
        for (k = 0; k < 2 * H; k++) gates[k] = 1.0f / (1.0f + expf(-gates[k]));
        for (k = 2 * H; k < 3 * H; k++) gates[k] = tanhf(gates[k]);
        for (k = 3 * H; k < G; k++) gates[k] = 1.0f / (1.0f + expf(-gates[k]));
    }

    __attribute__((noinline)) static void lx_cell_update(const float* restrict gates, const float* restrict c_prev,
                               float* restrict c, float* restrict tanh_c,
                               float* restrict h, long H) {
        long k;
        for (k = 0; k < H; k++)
            c[k] = gates[H + k] * c_prev[k] + gates[k] * gates[2 * H + k];
        for (k = 0; k < H; k++) tanh_c[k] = tanhf(c[k]);
        for (k = 0; k < H; k++) h[k] = gates[3 * H + k] * tanh_c[k];
    }

    __attribute__((noinline)) static void lx_gate_grads(const float* restrict gates, const float* restrict tanh_c,
                              const float* restrict c_prev, const float* restrict dh_out,
                              float* restrict dh, float* restrict dc,
                              float* restrict dz, long H) {
        long k;
        for (k = 0; k < H; k++) {
            float iv = gates[k], fv = gates[H + k];
            float gv = gates[2 * H + k], ov = gates[3 * H + k];
            float tc = tanh_c[k];
            float dhv = dh_out[k] + dh[k];
            float dov = dhv * tc;
            float dcv = dhv * ov * (1.0f - tc * tc) + dc[k];
            dz[k] = (dcv * gv) * iv * (1.0f - iv);
            dz[H + k] = (dcv * c_prev[k]) * fv * (1.0f - fv);
            dz[2 * H + k] = (dcv * iv) * (1.0f - gv * gv);
            dz[3 * H + k] = dov * ov * (1.0f - ov);
            dc[k] = dcv * fv;
        }
    }

    __attribute__((noinline)) static void lx_mul_rows(float* restrict out, const float* restrict a,
                            const float* restrict b, long n) {
        for (long k = 0; k < n; k++) out[k] = a[k] * b[k];
    }

    __attribute__((noinline)) static void lx_accumulate(double* restrict acc, const float* restrict x, long n) {
        for (long k = 0; k < n; k++) acc[k] += x[k];
    }
    """
    void lx_gate_activate(float* gates, const float* z, const float* r,
                          const float* b, long H) nogil
    void lx_cell_update(const float* gates, const float* c_prev, float* c,
                        float* tanh_c, float* h, long H) nogil
    void lx_gate_grads(const float* gates, const float* tanh_c, const float* c_prev,
                       const float* dh_out, float* dh, float* dc, float* dz, long H) nogil
    void lx_mul_rows(float* out, const float* a, const float* b, long n) nogil
    void lx_accumulate(double* acc, const float* x, long n) nogil


def lstm_forward(X_in, Wx_in, Wh_in, b_in, h0=None, c0=None):
    """Same contract as kernels_numpy.lstm_forward, float32 only."""
    X_arr = np.ascontiguousarray(X_in, dtype=np.float32)
    Wx_arr = np.ascontiguousarray(Wx_in, dtype=np.float32)
    Wh_arr = np.ascontiguousarray(Wh_in, dtype=np.float32)
    b_arr = np.ascontiguousarray(b_in, dtype=np.float32)

    cdef int B = X_arr.shape[0], T = X_arr.shape[1]
    cdef int H = Wh_arr.shape[1]
    cdef int G = 4 * H

    h0_arr = np.zeros((B, H), dtype=np.float32) if h0 is None \
        else np.ascontiguousarray(h0, dtype=np.float32)
    c0_arr = np.zeros((B, H), dtype=np.float32) if c0 is None \
        else np.ascontiguousarray(c0, dtype=np.float32)

    # input projection for every step at once
    Z_arr = np.matmul(X_arr.reshape(B * T, -1), Wx_arr.T).reshape(B, T, G)
    R_arr = np.empty((B, G), dtype=np.float32)  # recurrent projection, reused
    gates_arr = np.empty((B, T, G), dtype=np.float32)
    C_arr = np.empty((B, T, H), dtype=np.float32)
    tanh_c_arr = np.empty((B, T, H), dtype=np.float32)
    H_seq_arr = np.empty((B, T, H), dtype=np.float32)

    cdef float[:, :, ::1] Z = Z_arr, gates = gates_arr, C = C_arr
    cdef float[:, :, ::1] tanh_c = tanh_c_arr, H_seq = H_seq_arr
    cdef float[:, ::1] R = R_arr, c0v = c0_arr
    cdef float[::1] b = b_arr
    cdef int t, r

    Wh_T = Wh_arr.T
    h_prev = h0_arr
    for t in range(T):
        np.matmul(h_prev, Wh_T, out=R_arr)
        with nogil:
            for r in range(B):
                lx_gate_activate(&gates[r, t, 0], &Z[r, t, 0], &R[r, 0], &b[0], H)
                lx_cell_update(&gates[r, t, 0],
                               &c0v[r, 0] if t == 0 else &C[r, t - 1, 0],
                               &C[r, t, 0], &tanh_c[r, t, 0], &H_seq[r, t, 0], H)
        h_prev = H_seq_arr[:, t, :]

    cache = (X_arr, gates_arr, C_arr, tanh_c_arr, h0_arr, c0_arr)
    return H_seq_arr, cache


def lstm_backward(cache, Wx_in, Wh_in, dH_in, dh_last=None, dc_last=None):
    """Same contract as kernels_numpy.lstm_backward, float32 only."""
    X_arr, gates_arr, C_arr, tanh_c_arr, h0_arr, c0_arr = cache
    Wx_arr = np.ascontiguousarray(Wx_in, dtype=np.float32)
    Wh_arr = np.ascontiguousarray(Wh_in, dtype=np.float32)
    dH_arr = np.ascontiguousarray(dH_in, dtype=np.float32)

    cdef int B = X_arr.shape[0], T = X_arr.shape[1], D = X_arr.shape[2]
    cdef int H = C_arr.shape[2]
    cdef int G = 4 * H

    dh_arr = np.zeros((B, H), dtype=np.float32) if dh_last is None \
        else np.ascontiguousarray(dh_last, dtype=np.float32).copy()
    dc_arr = np.zeros((B, H), dtype=np.float32) if dc_last is None \
        else np.ascontiguousarray(dc_last, dtype=np.float32).copy()

    dZ_arr = np.empty((B, T, G), dtype=np.float32)
    Hprev_arr = np.empty((B, T, H), dtype=np.float32)
    db_arr = np.zeros(G, dtype=np.float64)

    cdef float[:, :, ::1] gates = gates_arr, C = C_arr, tanh_c = tanh_c_arr
    cdef float[:, :, ::1] dZ = dZ_arr, Hprev = Hprev_arr, dH = dH_arr
    cdef float[:, ::1] dh = dh_arr, dc = dc_arr, h0 = h0_arr, c0 = c0_arr
    cdef double[::1] db = db_arr
    cdef int t, r, j

    for t in range(T - 1, -1, -1):
        with nogil:
            for r in range(B):
                lx_gate_grads(&gates[r, t, 0], &tanh_c[r, t, 0],
                              &c0[r, 0] if t == 0 else &C[r, t - 1, 0],
                              &dH[r, t, 0], &dh[r, 0], &dc[r, 0], &dZ[r, t, 0], H)
        np.matmul(dZ_arr[:, t, :], Wh_arr, out=dh_arr)

    with nogil:
        # h_{t-1} rows: h0 then the first T-1 outputs (h = o * tanh(c))
        for r in range(B):
            for j in range(H):
                Hprev[r, 0, j] = h0[r, j]
            for t in range(1, T):
                lx_mul_rows(&Hprev[r, t, 0], &gates[r, t - 1, 3 * H], &tanh_c[r, t - 1, 0], H)
            for t in range(T):
                lx_accumulate(&db[0], &dZ[r, t, 0], G)

    dZ2 = dZ_arr.reshape(B * T, G)
    dX = np.matmul(dZ2, Wx_arr).reshape(B, T, D)
    dWx = np.matmul(dZ2.T, X_arr.reshape(B * T, D))
    dWh = np.matmul(dZ2.T, Hprev_arr.reshape(B * T, H))
    return (dX, dWx, dWh, db_arr.astype(np.float32), dh_arr, dc_arr)
