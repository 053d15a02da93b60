"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--cells 100000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from phasedual import _kernels_py

try:
    from phasedual import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def params(mu=1.0, nu=1.0, alpha=3.0):
    na2 = nu * alpha * alpha
    return mu, nu, na2, (na2 - 2 * mu) ** 3 / (27 * nu), -(mu + na2) / 3


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    p = params()
    rng = np.random.default_rng(0)
    tau2 = rng.uniform(0.0, 1.5 * p[3], args.cells)
    x = rng.normal(size=args.cells)
    cases = {
        "solve_many B1": lambda k: k.solve_many(tau2, 1, *p),
        "solve_many B3": lambda k: k.solve_many(tau2, 3, *p),
        "ordered_sum": lambda k: k.ordered_sum(x),
        "cumulative_sum": lambda k: k.cumulative_sum(x),
    }
    backends = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    print(f"{args.cells} cells, best of {args.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name, _ in backends) + ("     speedup" if _kernels_c else ""))
    for label, fn in cases.items():
        times = [min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        row = f"{label:<16}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if _kernels_c:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)
    if _kernels_c:
        same = all(np.array_equal(_kernels_py.solve_many(tau2, b, *p), _kernels_c.solve_many(tau2, b, *p),
                                  equal_nan=True) for b in (1, 2, 3))
        same &= _kernels_py.ordered_sum(x) == _kernels_c.ordered_sum(x)
        print(f"bit-identical results: {same}")


if __name__ == "__main__":
    main()
