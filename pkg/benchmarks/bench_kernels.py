"""Compiled vs pure-Python 2-jet kernel for Phi_t.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from lagspheres import _kernels


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=51200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    u1 = rng.uniform(-3.0, 3.0, args.points)
    u2 = rng.uniform(0.0, 2.0 * np.pi, args.points)
    if not _kernels.compiled_available():
        print("compiled kernel not built; only the python backend is timed")

    results = {}
    for backend in ("python", "compiled"):
        if backend == "compiled" and not _kernels.compiled_available():
            continue
        for chart, name in ((0, "cylinder"), (1, "sphere")):
            a = u1 if chart == 0 else np.tanh(u1)

            def run():
                return _kernels.phi_jets(4.0, 1.0, 0.7, chart, a, u2, backend=backend)

            best = min(timeit.repeat(run, number=1, repeat=args.repeat))
            results[(backend, name)] = (best, run())
            print(f"{backend:>8} {name:>8} {args.points:>7d} pts  {best * 1e3:8.2f} ms")

    for name in ("cylinder", "sphere"):
        if ("compiled", name) in results:
            tp, jp = results[("python", name)]
            tc, jc = results[("compiled", name)]
            scale = np.max(np.abs(jp))
            print(f"{name}: speedup {tp / tc:5.1f}x, max |diff| / max |jet| = "
                  f"{np.max(np.abs(jp - jc)) / scale:.1e}")


if __name__ == "__main__":
    main()
