"""Compare the compiled and pure-Python exact-arithmetic backends.

    python benchmarks/bench_gauss.py [--repeat N]

Kernel timings use random Gaussian-integer matrices.  The end-to-end timings
run the CLI in a subprocess with and without ``FAMVERIFY_PURE=1``.
"""

import argparse
import os
import subprocess
import sys
import timeit
from pathlib import Path

import numpy as np

from famverify import gauss

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ["spider_law.feq", "join_dimension.feq", "clifford_t.feq"]


def kernel_cases(rng):
    for n, mag in [(16, 10), (64, 10), (128, 1000), (64, 2 ** 28)]:
        mats = [rng.integers(-mag, mag, size=(n, n), dtype=np.int64) for _ in range(4)]
        # contraction tensors are mostly zeros
        for m in mats:
            m[rng.random(m.shape) < 0.7] = 0
        yield f"{n}x{n} |x|<{mag}", mats


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    print(f"{'case':<24}{'python':>12}{'compiled':>12}{'object':>12}")
    for name, mats in kernel_cases(rng):
        row = [name]
        fns = [gauss.matmul_python, gauss.matmul_compiled if gauss._compiled_matmul else None,
               gauss._object_matmul]
        ref = gauss._object_matmul(*mats)
        for fn in fns:
            if fn is None:
                row.append("n/a")
                continue
            out = fn(*mats)
            assert all(np.array_equal(np.asarray(o, dtype=object), r) for o, r in zip(out, ref))
            t = min(timeit.repeat(lambda: fn(*mats), number=1, repeat=repeat))
            row.append(f"{t * 1e3:.3f}ms")
        print(f"{row[0]:<24}" + "".join(f"{c:>12}" for c in row[1:]))


def bench_cli(repeat):
    print(f"\n{'fixture':<24}{'python':>12}{'compiled':>12}")
    for name in FIXTURES:
        cells = []
        for pure in ("1", ""):
            env = dict(os.environ, FAMVERIFY_PURE=pure)
            cmd = [sys.executable, "-m", "famverify", "verify", str(ROOT / "fixtures" / name)]
            t = min(timeit.repeat(lambda: subprocess.run(cmd, env=env, capture_output=True,
                                                         check=False),
                                  number=1, repeat=repeat))
            cells.append(f"{t:.2f}s")
        print(f"{name:<24}" + "".join(f"{c:>12}" for c in cells))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    print(f"backend selected at import: {gauss.BACKEND}\n")
    bench_kernels(args.repeat)
    bench_cli(max(1, args.repeat // 2))


if __name__ == "__main__":
    main()
