"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run on both backends; outputs are compared for equality
before any timing is reported.
"""

import argparse
import timeit

from gkm14 import _kernels_py as py
from gkm14.lattice import build_named

try:
    from gkm14 import _kernels as cy
except ImportError:
    cy = None


def workloads():
    eta = py.eta_power(-12, 400)
    k = build_named("K")
    gram = [list(r) for r in k.gram]
    half = [1] * 12  # a coset center with denominator 2 in the basis of K
    ea = list(range(0, 600, 3))
    ca = [(-1) ** i * (i + 1) for i in range(len(ea))]
    return {
        "eta_power(-24, 600)": lambda m: m.eta_power(-24, 600),
        "conv_trunc 400x400": lambda m: m.conv_trunc(eta, eta, 400),
        "sparse_mul_trunc 200x200": lambda m: m.sparse_mul_trunc(ea, ca, ea, ca, 900),
        "enum_coset K, norm <= 8": lambda m: m.enum_coset(gram, [0] * 12, 1, 8),
        "enum_coset K coset, norm <= 6": lambda m: m.enum_coset(gram, half, 2, 24),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if cy is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'workload':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        if fn(py) != fn(cy):
            raise SystemExit(f"backends disagree on {name}")
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:32s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
