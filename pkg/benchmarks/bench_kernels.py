"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from noncompact import _pykernels

try:
    from noncompact import _ckernels
except ImportError:
    _ckernels = None


def dist(X, p):
    return np.sum(np.abs(X[:, None, :] - X[None, :, :]) ** p, axis=2) ** (1 / p)


def cases():
    rng = np.random.default_rng(0)
    X20 = rng.uniform(-1, 1, size=(20, 16))
    tail = np.zeros((256, 257))
    tail[:, 0] = 0.8
    tail[np.arange(256), 1 + np.arange(256)] = 0.6
    X12 = rng.uniform(-1, 1, size=(12, 3))
    D12 = dist(X12, 2.0)
    cost12 = _pykernels.subset_costs_diameter(D12)
    X16 = rng.uniform(-1, 1, size=(16, 4))
    D16 = dist(X16, 2.0)
    X10 = rng.uniform(-1, 1, size=(10, 3))
    return [
        ("hull_fw 20x16 p=3", lambda k: k.hull_fw(X20, 3.0, 1e-6, 2000)),
        ("hull_fw tail 256 p=2", lambda k: k.hull_fw(tail, 2.0, 1e-6, 2000)),
        ("subset_costs_diameter n=12", lambda k: k.subset_costs_diameter(D12)),
        ("partition_minmax n=12 k=4", lambda k: k.partition_minmax(cost12, 12, 4)),
        ("max_min_dispersion n=16 m=6", lambda k: k.max_min_dispersion(D16, 6)),
        ("cheb_dual_fw 10x3 p=3", lambda k: k.cheb_dual_fw(X10, 3.0, 1e-9, 20000)),
        ("uniform_bounds n=10 p=3", lambda k: k.uniform_bounds(X10, 3.0)),
    ]


def best_time(fn, repeat):
    number = 1
    while True:
        t = timeit.timeit(fn, number=number)
        if t > 0.2 or number >= 1000:
            break
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rows = []
    for name, call in cases():
        tp = best_time(lambda: call(_pykernels), args.repeat)
        tc = best_time(lambda: call(_ckernels), args.repeat)
        rows.append({"case": name, "python_s": tp, "compiled_s": tc, "speedup": tp / tc})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':32s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
        for r in rows:
            print(f"{r['case']:32s} {r['python_s'] * 1e3:9.2f}ms {r['compiled_s'] * 1e3:9.3f}ms {r['speedup']:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
