"""Time the compiled and pure-Python kernel backends on random permutations.

    python3 benchmarks/bench_kernels.py [--sizes 300 3000 30000] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from cyclegeo import kernels

KERNELS = {
    "lis_length": lambda m, a: m.lis_length(a),
    "rs_shape": lambda m, a: m.rs_shape(a),
    "count_inversions": lambda m, a: m.count_inversions(a),
    "left_smaller_counts": lambda m, a: m.left_smaller_counts(a),
    "records": lambda m, a: m.records(a),
    "pattern_counts_3": lambda m, a: m.pattern_counts(a, 3),
}
# subset enumeration is O(n^3); keep it small
MAX_N = {"pattern_counts_3": 300}


def bench(sizes, repeat, seed=0):
    rng = np.random.default_rng(seed)
    backends = kernels.available_backends()
    for n in sizes:
        a = np.ascontiguousarray(rng.permutation(n), dtype=np.int64)
        for name, fn in KERNELS.items():
            if n > MAX_N.get(name, n):
                continue
            times = {}
            for b in backends:
                impl = kernels.get_backend(b)
                times[b] = min(timeit.repeat(lambda: fn(impl, a), number=1, repeat=repeat))
            yield n, name, times


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[300, 3000, 30000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    header = ["n", "kernel"] + [f"{b}_s" for b in backends]
    if "cython" in backends:
        header.append("speedup")
    print(",".join(header))
    for n, name, times in bench(args.sizes, args.repeat):
        fields = [str(n), name] + [f"{times[b]:.6f}" for b in backends]
        if "cython" in backends:
            fields.append(f"{times['python'] / max(times['cython'], 1e-9):.1f}")
        print(",".join(fields), flush=True)


if __name__ == "__main__":
    main()
