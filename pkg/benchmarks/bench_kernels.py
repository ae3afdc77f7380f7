"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--number N]

Both backends are imported directly, so the EPIMATCH_DISABLE_NUMBA flag has no
effect here. The first numba call is made before timing to exclude compilation.
"""
import argparse
import timeit

import numpy as np

from epimatch.kernels import _numba, _numpy

# three-equilibrium economy: (alpha_H, alpha_L, Y_H, Y_L, theta_H, theta_L)
ECON = (0.5, 0.5, 0.6, 0.1, 0.46, 0.45)
POP_F = np.array(ECON)
POP_M = np.array(ECON)


def cases():
    solver_grid = np.linspace(0.1, 0.6, 10_000)
    oracle_grid = np.linspace(0.1, 0.6, 100_000)
    gf = np.linspace(0.1, 0.6, 21)
    seeds = np.array([(a, b) for a in gf for b in gf])
    return {
        "delta_roots (1e4 grid)": lambda k: k.delta_roots(*ECON, solver_grid),
        "residual_minima (1e5 grid)": lambda k: k.residual_minima(*ECON, oracle_grid),
        "twopop_iterate (21x21 seeds)": lambda k: k.twopop_iterate(
            POP_F, POP_M, 1.0, 1.0, seeds, 0.5, 1e-12, 10_000),
        "twopop_composite_roots (1e4)": lambda k: k.twopop_composite_roots(
            POP_F, POP_M, 1.0, 1.0, solver_grid),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    args = ap.parse_args()

    print(f"{'kernel':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        fn(_numba)  # compile outside the timed region
        ms = {}
        for label, mod in (("numpy", _numpy), ("numba", _numba)):
            best = min(timeit.repeat(lambda: fn(mod), repeat=args.repeat, number=args.number))
            ms[label] = 1e3 * best / args.number
        print(f"{name:32s} {ms['numpy']:10.3f} {ms['numba']:10.3f} {ms['numpy'] / ms['numba']:7.1f}x")


if __name__ == "__main__":
    main()
