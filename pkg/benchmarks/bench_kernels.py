"""Compare the numba and numpy/Python oracle kernels on planted instances.

    python3 benchmarks/bench_kernels.py --n 12 16 20 --reps 3

The first call of each compiled kernel is a warm-up and is not timed.
"""

import argparse
import timeit

import numpy as np

from hampath import _accel, _kernels
from hampath.graph import gen_graph

KERNELS = {
    "subset_reach": lambda inst, impl: _kernels.subset_reach(inst.graph.succ_masks(), inst.n, inst.s, impl=impl),
    "count_paths": lambda inst, impl: _kernels.count_paths(inst.graph.succ_masks(), inst.n, inst.s, inst.e, 10**6, impl=impl),
    "length_reach": lambda inst, impl: _kernels.length_reach(inst.graph.succ_masks(), inst.n, inst.s, impl=impl),
}
# enumeration kernels blow up fast without compilation
LIMITS = {"subset_reach": 22, "count_paths": 12, "length_reach": 12}


def _parts(out):
    items = out if isinstance(out, tuple) else (out,)
    return [np.asarray(x).tolist() for x in items]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[8, 10, 12, 16, 20])
    ap.add_argument("--delta", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reps", type=int, default=3)
    a = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba not importable; only the fallback can run")
    print(f"{'kernel':<14}{'n':>4}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, fn in KERNELS.items():
        for n in a.n:
            if n > LIMITS[name]:
                continue
            inst = gen_graph(n, min(a.delta, n - 1), a.seed)
            row = {}
            for impl in ("numba", "numpy"):
                if impl == "numba" and not _accel.HAVE_NUMBA:
                    row[impl] = float("nan")
                    continue
                fn(inst, impl)
                row[impl] = min(timeit.repeat(lambda: fn(inst, impl), number=1, repeat=a.reps))
            same = _parts(fn(inst, "numba")) == _parts(fn(inst, "numpy"))
            print(f"{name:<14}{n:>4}{row['numba']:>12.4f}{row['numpy']:>12.4f}{row['numpy'] / row['numba']:>10.1f}{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
