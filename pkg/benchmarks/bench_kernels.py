"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Every kernel is run on identical inputs under both backends; results must
match exactly before a timing is reported.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from dioph.arith import RngStream
from dioph.kernels import _pykernels

try:
    from dioph.kernels import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = RngStream(2024, 0)
    a, b = rng.uint64s(200_000), rng.uint64s(200_000)
    return {
        "euclid_division_counts(2e5 pairs)": lambda k: k.euclid_division_counts(a, b),
        "count_coprime_pairs(2e5 pairs)": lambda k: k.count_coprime_pairs(a, b),
        "inverse_distance_max(n=20011)": lambda k: k.inverse_distance_max(20011),
        "product_residue_count(p=2003, cap=40)": lambda k: k.product_residue_count(2003, 40),
        "reachable([97, 101, 103], 50000)": lambda k: k.reachable([97, 101, 103], 50_000),
        "scan_constant_pair(N=1009*1013, 2000 pairs)": lambda k: k.scan_constant_pair(
            1022117, 1021987, 12345, 678901, 2000),
    }


def same(x, y):
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    for name, fn in cases().items():
        if not same(fn(_ckernels), fn(_pykernels)):
            print(f"MISMATCH {name}", file=sys.stderr)
            return 1
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        rows.append({"kernel": name, "cython_s": t_c, "python_s": t_py, "speedup": t_py / t_c})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':48s} {'cython':>10s} {'python':>10s} {'speedup':>8s}")
        for r in rows:
            print(f"{r['kernel']:48s} {r['cython_s']:10.4f} {r['python_s']:10.4f} {r['speedup']:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
