"""Time every kernel under both backends and check they agree.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

The first numba call of each kernel includes compilation and is reported
separately as ``first_call``.
"""

import argparse
import time

import numpy as np

from coarsegrain import _kernels


def workloads(scale, rng):
    n = int(4000 * scale)
    X = np.linspace(0.0, 1.5, n)[:, None]
    f = 0.1 * np.floor(X[:, 0] / 0.1)
    alphas = np.array([0.05, 0.1, 0.15, 0.25, 0.5, 1.0])
    Q = rng.uniform(0, 1.5, (int(20000 * scale), 1))
    Xs = X[:: max(1, n // 200)]
    fs = f[:: max(1, n // 200)]
    noise = rng.normal(0, 0.03, (int(20000 * scale), 12))
    u = rng.random((int(200000 * scale), 64))
    return {
        "pair_max_slope": lambda: _kernels.pair_max_slope_multi(X, f, alphas)[0],
        "envelope": lambda: np.concatenate(_kernels.envelope(Q, Xs, fs, 2.0, [0.1, 0.5], [2.0, 1.2])),
        "rollout_right": lambda: _kernels.rollout_right(np.zeros(noise.shape[0]), noise, 0.7, 0.01, 1.0, 0.95)[0],
        "walk": lambda: _kernels.walk(np.ones(u.shape[0], dtype=np.int64), u, 0.1, 3)[1].astype(float),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    jobs = workloads(args.scale, rng)
    print(f"{'kernel':<16}{'numpy s':>10}{'numba s':>10}{'first_call':>12}{'speedup':>9}  agree")
    for name, job in jobs.items():
        times, outs, first = {}, {}, 0.0
        for be in ("numpy", "numba"):
            with _kernels.use_backend(be):
                if be == "numba":
                    t = time.perf_counter()
                    job()
                    first = time.perf_counter() - t
                best = np.inf
                for _ in range(args.repeat):
                    t = time.perf_counter()
                    outs[be] = job()
                    best = min(best, time.perf_counter() - t)
                times[be] = best
        agree = np.allclose(outs["numpy"], outs["numba"], rtol=1e-12, atol=1e-12)
        print(f"{name:<16}{times['numpy']:>10.4f}{times['numba']:>10.4f}{first:>12.3f}{times['numpy'] / times['numba']:>9.1f}  {agree}")


if __name__ == "__main__":
    main()
