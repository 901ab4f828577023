"""Compare the numba and numpy kernels on the hot paths.

    python benchmarks/bench_backends.py [--n 1000000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from relmaser import _kernels
from relmaser.explorer import SampleSpec, sample_cloud


def best_of(fn, repeat):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.n
    x = 10 ** rng.uniform(-3, 2, n)
    u = rng.uniform(-3, 3, n)
    wh, wc = rng.uniform(0.01, 10, n), rng.uniform(0.01, 5, n)

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    cases = {
        "occupation": lambda b: _kernels.occupation_array(x, u, backend=b),
        "steady_fluxes": lambda b: _kernels.steady_fluxes(wh, wc, 0.4, 0.8, 0.0, u, 1.0, 1.0, 1.0, backend=b),
        "sample_cloud(1e5)": lambda b: sample_cloud(SampleSpec(n_samples=100_000, u_c=1.0), backend=b),
    }
    print(f"n = {n}, best of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases.items():
        t = [best_of(lambda: fn(b), args.repeat) for b in backends]
        line = f"{name:<20}" + "".join(f"{v * 1e3:>10.1f}ms" for v in t)
        if len(t) == 2:
            line += f"{t[0] / t[1]:>11.1f}x"
        print(line)
    if len(backends) == 2:
        a = cases["steady_fluxes"]("numpy")
        b = cases["steady_fluxes"]("numba")
        print(f"max relative difference (fluxes): {np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)):.2e}")


if __name__ == "__main__":
    main()
