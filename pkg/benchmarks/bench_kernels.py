"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--size N]

Each kernel runs on identical inputs under both backends. The report lists
the best wall time per backend, the speedup and the largest disagreement
between the two results.
"""
import argparse
import sys
import timeit

import numpy as np

from torusqm._kernels import available_backends


def workloads(size):
    rng = np.random.default_rng(0)
    x = rng.uniform(0.1, 60.0, size)
    z = rng.uniform(0, 5, size) * np.exp(1j * rng.uniform(0, 2 * np.pi, size))
    targets = np.sort(rng.uniform(0.05, 4.0, size))
    heun = (0.3 + 0.1j, -0.4, 1.5, 0.2 - 0.3j, 0.5)
    return {
        "bessel_jy_array": lambda k: k.bessel_jy_array(2.5, x),
        "heun_b_series_array": lambda k: k.heun_b_series_array(*heun, z),
        "ode2_march_many": lambda k: k.ode2_march_many(2, *heun, 1.0, 1.0, 0.0, targets),
    }


def max_diff(a, b):
    return max(float(np.max(np.abs(np.asarray(p) - np.asarray(q)))) for p, q in zip(a, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=2000)
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    py, cy = backends["python"], backends["cython"]
    print(f"{'kernel':<22}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max diff':>12}")
    for name, fn in workloads(args.size).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        diff = max_diff(fn(py), fn(cy))
        print(f"{name:<22}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x{diff:>12.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
