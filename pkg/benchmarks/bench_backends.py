"""Benchmark the compiled recurrence kernel against the numpy fallback.

Times the raw sequence forward/backward kernels at several shapes, then an
end-to-end training epoch of the default stacked preset. Run:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from lexitutor.corpus import Level, prepare_level_data
from lexitutor.data import corpus_path
from lexitutor.model import ModelConfig, build_model
from lexitutor.nn import backend, compiled_available, kernels_numpy, make_rng
from lexitutor.training import TrainConfig, train


def time_call(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def kernel_case(module, B, T, D, H, seed=0):
    rng = make_rng(seed)
    X = rng.normal(size=(B, T, D)).astype(np.float32)
    Wx = rng.normal(size=(4 * H, D), scale=0.3).astype(np.float32)
    Wh = rng.normal(size=(4 * H, H), scale=0.3).astype(np.float32)
    b = np.zeros(4 * H, dtype=np.float32)
    dH = rng.normal(size=(B, T, H)).astype(np.float32)

    def forward():
        module.lstm_forward(X, Wx, Wh, b)

    _, cache = module.lstm_forward(X, Wx, Wh, b)

    def backward():
        module.lstm_backward(cache, Wx, Wh, dH)

    return time_call(forward), time_call(backward)


def bench_kernels():
    from lexitutor.nn import _lstm_kernel as compiled

    print(f"{'shape (BxTxDxH)':<22} {'numpy fwd':>10} {'cython fwd':>11} "
          f"{'numpy bwd':>10} {'cython bwd':>11} {'speedup f/b':>12}")
    for B, T, D, H in [(150, 10, 70, 100), (64, 6, 32, 64), (512, 10, 70, 100),
                       (32, 20, 16, 32)]:
        nf, nb = kernel_case(kernels_numpy, B, T, D, H)
        cf, cb = kernel_case(compiled, B, T, D, H)
        print(f"{B}x{T}x{D}x{H:<10} {nf * 1e3:>9.2f}ms {cf * 1e3:>10.2f}ms "
              f"{nb * 1e3:>9.2f}ms {cb * 1e3:>10.2f}ms {nf / cf:>6.2f}/{nb / cb:.2f}")


def bench_epoch():
    root = corpus_path("synthetic_corpus")
    vocab, split = prepare_level_data(root, Level.PRE_INTERMEDIATE, 125, 10, seed=0)

    results = {}
    for name in ("numpy", "cython"):
        import importlib
        import os

        os.environ["LEXITUTOR_BACKEND"] = name
        importlib.reload(backend)
        config = ModelConfig(preset="stacked", vocab_size=len(vocab), embed_dim=70,
                             hidden=100, window=10, dropout_rate=0.6)
        model = build_model(config, make_rng(0), vocab=vocab,
                            level=Level.PRE_INTERMEDIATE)
        started = time.perf_counter()
        train(model, split, TrainConfig(epochs=2, batch_size=150, seed=0))
        results[name] = (time.perf_counter() - started) / 2
    print(f"\nstacked preset, full epoch ({len(split.train)} samples, batch 150):")
    for name, seconds in results.items():
        print(f"  {name:<7} {seconds:.2f}s/epoch")
    print(f"  speedup {results['numpy'] / results['cython']:.2f}x")


if __name__ == "__main__":
    print(f"active backend: {backend.active_backend()}")
    if not compiled_available():
        raise SystemExit("compiled kernel not built; nothing to compare")
    bench_kernels()
    bench_epoch()
