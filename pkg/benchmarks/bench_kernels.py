"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row is the best-of-``repeat`` wall time for one kernel call on a random
matrix over GF(2^8) or GF(2^16).
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from rbtcode import kernels
from rbtcode.gf import get_field


def cases(rng):
    for m, size in [(8, 32), (8, 128), (16, 64), (16, 256)]:
        f = get_field(m)
        a = f.random((size, size), rng)
        b = f.random((size, 512), rng)
        tables = (f.exp, f.log, f.order)
        yield f"matmul  GF(2^{m}) {size}x{size} @ {size}x512", lambda k, a=a, b=b, t=tables: k.matmul(a, b, *t)
        yield f"rank    GF(2^{m}) {size}x{size}", lambda k, a=a, t=tables: k.rank(a, *t)
        while f.rank(a) < size:
            a = f.random((size, size), rng)
        yield f"inverse GF(2^{m}) {size}x{size}", lambda k, a=a, t=tables: k.inverse(a, *t)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    found = kernels.backends()
    names = sorted(found)
    print(f"{'kernel':44s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(np.random.default_rng(args.seed)):
        times = {}
        for name in names:
            mod = found[name]
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:44s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
