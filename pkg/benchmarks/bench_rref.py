"""Compare the compiled and pure-Python elimination kernels.

Inputs are Hochschild differential matrices of the fixture algebras and random
small-integer matrices.  For each input both backends must return the same
echelon form.  Two timings are printed per backend: the elimination kernel
alone (``rank`` on an integer array) and ``rref`` end to end, which also pays
for converting Fractions to integers and back.

    python3 benchmarks/bench_rref.py [--repeat N] [--seed S]
"""
import argparse
import random
import sys
import time

import numpy as np

from deforma import io, linalg
from deforma.hochschild import differential_matrix
from deforma.linalg import RatMatrix, rank, rref


def fixture(name):
    import os
    return io.load(os.path.join(os.path.dirname(io.__file__), "fixtures", f"{name}.json"))


def cases(seed):
    out = []
    for name, n in [("dual_numbers", 3), ("truncated_x3", 2), ("truncated_x3", 3), ("m2", 2), ("xy", 2), ("m2", 3)]:
        m = differential_matrix(fixture(name), n)
        out.append((f"delta^{n} {name} ({m.rows}x{m.cols})", m))
    rng = random.Random(seed)
    for r, c in [(40, 40), (80, 60), (120, 120)]:
        rows = [[rng.randint(-3, 3) if rng.random() < 0.3 else 0 for _ in range(c)] for _ in range(r)]
        out.append((f"random sparse ({r}x{c})", RatMatrix.from_rows(rows)))
    return out


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    try:
        linalg.set_kernel_backend("compiled")
    except RuntimeError:
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'':38s} {'kernel only':^29s} {'rref end to end':^29s}")
    print(f"{'input':38s}" + f" {'compiled':>9s} {'python':>9s} {'ratio':>8s}" * 2)
    for label, m in cases(args.seed):
        ints = np.array([[int(x) for x in row] for row in m.data], dtype=np.int64)
        line = f"{label:38s}"
        for fn in (lambda: rank(ints), lambda: rref(m)):
            linalg.set_kernel_backend("compiled")
            tc, rc = best_time(fn, args.repeat)
            linalg.set_kernel_backend("python")
            tp, rp = best_time(fn, args.repeat)
            if rc != rp:
                print(f"{label}: backends disagree", file=sys.stderr)
                return 1
            line += f" {tc:8.4f}s {tp:8.4f}s {tp / tc:7.1f}x"
        print(line)
    linalg.set_kernel_backend("compiled")
    return 0


if __name__ == "__main__":
    sys.exit(main())
